"""Twin-prime-polynomial counts, the singular series, and the variance
heuristic built from them.

psi2 counts pairs (f, f+K) of monic prime powers exactly. The singular
series S(K) is an Euler product over monic irreducibles; factors are
grouped by degree (all primes of one degree coprime to K share a factor),
so the truncated product over deg P <= D costs O(D) once K is factored,
with a conservative tail bound recorded alongside. The J-sum over monic J
of degree j of S(JQ) is computed twice: directly, and as a power-series
coefficient of the closed-form generating function; with the same
truncation degree on both sides the two agree to rounding, which is the
point of the comparison. The final assembly turns those J-sums into a
heuristic estimate of the progression variance G(n; Q).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import RunConfig, cfg, require_enumeration
from .errors import ValidationError
from .fields import Field, field_from_q
from .lfunctions import monic_prime_powers
from .polys import (Poly, count_irreducibles, enumerate_monic, factorize,
                    is_irreducible, lambda_sq_sum_formula, phi_of,
                    von_mangoldt)
from .progressions import g_variance

_FRAC = Fraction


def psi2(n: int, K: Poly, config: RunConfig | None = None) -> int:
    """sum over monic degree-n f of Lambda(f) * Lambda(f + K), exactly."""
    if K.is_zero:
        raise ValidationError("offset K must be nonzero")
    if n <= K.degree:
        raise ValidationError("need n > deg K")
    field = K.field
    require_enumeration(field.q**n, config)
    if field.has_tables:
        from .bulk import lambda_table, shift_add_indices
        lam = lambda_table(field, n, config).astype(np.int64)
        nz = np.nonzero(lam)[0]
        shifted = shift_add_indices(field, nz, n, K)
        return int((lam[nz] * lam[shifted]).sum())
    total = 0
    for f, w in monic_prime_powers(field, n, config):
        total += w * von_mangoldt(f + K)
    return total


def nu_K(P: Poly, K: Poly) -> int:
    """#{A mod P : A(A+K) = 0}: 1 when P | K, else 2."""
    if K.is_zero:
        raise ValidationError("offset K must be nonzero")
    if not is_irreducible(P):
        raise ValidationError("P must be irreducible")
    return 1 if (K % P).is_zero else 2


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    truncation_degree: int
    tail_bound: float
    degree_logs: dict[int, float]

    def brackets(self, other: "SingularSeriesValue") -> bool:
        """Whether `other` (a refinement) sits inside value +- tail_bound."""
        return abs(other.value - self.value) <= self.tail_bound


def _divisor_prime_degrees(K: Poly) -> dict[int, int]:
    out: dict[int, int] = {}
    for P, _ in factorize(K).factors:
        out[P.degree] = out.get(P.degree, 0) + 1
    return out


def singular_series(K: Poly, D: int,
                    config: RunConfig | None = None) -> SingularSeriesValue:
    """Product over monic irreducibles P with deg P <= D of
    (1 - 1/|P|)^{-2} (1 - nu_K(P)/|P|), in log space.

    The primes of each degree coprime to K share one factor, so the
    product collapses to one term per degree plus corrections at the
    primes dividing K. The tail bound is an implementation-derived
    conservative envelope, not a sharp estimate.
    """
    if K.is_zero:
        raise ValidationError("offset K must be nonzero")
    if D < 1:
        raise ValidationError("truncation degree must be >= 1")
    field = K.field
    q = field.q
    k_divisors = _divisor_prime_degrees(K)
    logs: dict[int, float] = {}
    terms: list[float] = []
    zero = False
    for d in range(1, D + 1):
        nP = q**d
        pi_d = count_irreducibles(field, d)
        m_d = min(k_divisors.get(d, 0), pi_d)
        contrib = 0.0
        if pi_d - m_d > 0:
            # (1 - 1/nP)^{-2} (1 - 2/nP) = nP (nP - 2) / (nP - 1)^2
            if nP == 2:
                zero = True
            else:
                contrib += (pi_d - m_d) * math.log(
                    nP * (nP - 2) / (nP - 1) ** 2)
        if m_d:
            contrib += m_d * math.log(nP / (nP - 1))
        logs[d] = contrib
        terms.append(contrib)
    value = 0.0 if zero else math.exp(math.fsum(terms))
    tail = (2.0 / ((D + 1) * (q - 1))) * q ** (-D) \
        + 2.0 * max(K.degree, 1) * q ** (-(D + 1))
    return SingularSeriesValue(value=value, truncation_degree=D,
                               tail_bound=tail, degree_logs=logs)


def jsum_hl_prediction(Q: Poly, j: int) -> Fraction:
    """The asymptotic form q^j |Q| / Phi(Q) - 1/(q - 1)."""
    q = Q.field.q
    return _FRAC(q**j * q**Q.degree, phi_of(Q)) - _FRAC(1, q - 1)


def jsum_direct(Q: Poly, j: int, D: int,
                config: RunConfig | None = None) -> float:
    """sum over monic J of degree j of the truncated S(J*Q)."""
    if j < 0:
        raise ValidationError("j must be >= 0")
    field = Q.field
    require_enumeration(field.q**j, config)
    terms = [singular_series(J * Q, D, config).value
             for J in enumerate_monic(field, j, config=config)]
    return math.fsum(terms)


# -- truncated power series over floats (ascending, fixed length) -----------

def _ser_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    L = len(a)
    out = np.zeros(L)
    for i in range(L):
        if a[i]:
            out[i:] += a[i] * b[: L - i]
    return out


def _ser_inv(a: np.ndarray) -> np.ndarray:
    if a[0] != 1.0:
        raise ValidationError("series inverse needs unit constant term")
    L = len(a)
    out = np.zeros(L)
    out[0] = 1.0
    for i in range(1, L):
        out[i] = -np.dot(a[1: i + 1], out[i - 1:: -1][: i])
    return out


def _ser_pow(a: np.ndarray, e: int) -> np.ndarray:
    out = np.zeros(len(a))
    out[0] = 1.0
    base = a.copy()
    while e:
        if e & 1:
            out = _ser_mul(out, base)
        base = _ser_mul(base, base)
        e >>= 1
    return out


def jsum_series(Q: Poly, j: int, D: int,
                config: RunConfig | None = None) -> float:
    """The same truncated J-sum, read off the closed-form generating
    function: the coefficient of u^j in alpha * Z(u) Z(u/q) times the
    local corrections at the primes dividing Q and the global quadratic
    correction product.

    Rejected for q = 2, where the local denominators |P| - 2 degenerate at
    the linear primes.
    """
    field = Q.field
    q = field.q
    if q == 2:
        raise ValidationError("the closed form degenerates at |P| = 2; "
                              "q = 2 is not supported here")
    if j < 0:
        raise ValidationError("j must be >= 0")
    if D < 1:
        raise ValidationError("truncation degree must be >= 1")
    L = j + 1

    # alpha truncated at degree D, grouped by degree
    alpha_logs = []
    for d in range(1, D + 1):
        nP = q**d
        alpha_logs.append(count_irreducibles(field, d)
                          * math.log(1.0 - 1.0 / (nP - 1) ** 2))
    alpha = math.exp(math.fsum(alpha_logs))

    # Z(u) * Z(u/q): coefficients sum_{t} q^t * 1
    zz = np.zeros(L)
    for t in range(L):
        zz[t] = sum(q**s for s in range(t + 1))
    series = alpha * zz

    scalar = 1.0
    for P, _ in factorize(Q).factors:
        d = P.degree
        if d > D:
            continue
        nP = q**d
        scalar *= (nP - 1) / (nP - 2)
        loc = np.zeros(L)
        loc[0] = 1.0
        if d < L:
            loc[d] = 1.0 / (nP - 2)
        series = _ser_mul(series, _ser_inv(loc))
    series *= scalar

    for d in range(1, D + 1):
        if d >= L:
            break
        nP = q**d
        base = np.zeros(L)
        base[0] = 1.0
        base[d] = 2.0 / (nP * (nP - 2))
        if 2 * d < L:
            base[2 * d] = -1.0 / (nP * (nP - 2))
        series = _ser_mul(series, _ser_pow(base, count_irreducibles(field, d)))
    return float(series[j])


def hl_g_prediction(n: int, Q: Poly, D: int | None = None,
                    config: RunConfig | None = None) -> dict:
    """Assemble the twin-prime heuristic for the progression variance and
    set it against the exact value and the final asymptotic form."""
    c = cfg(config)
    if D is None:
        D = c.truncation_degree
    if n <= Q.degree:
        raise ValidationError("need n > deg Q for a nonempty offset range")
    field = Q.field
    q = field.q
    phi = phi_of(Q)
    divisor_degs = [P.degree for P, _ in factorize(Q).factors]
    lam_sq_coprime = lambda_sq_sum_formula(field, n) \
        - sum(d * d for d in divisor_degs if n % d == 0)
    first_moment = q**n - sum(d for d in divisor_degs if n % d == 0)
    jsums = {jj: jsum_direct(Q, jj, D, config) for jj in range(n - Q.degree)}
    hl_second = lam_sq_coprime + q**n * (q - 1) * math.fsum(jsums.values())
    hl_estimate = (hl_second - 2 * (q**n / phi) * first_moment
                   + q ** (2 * n) / phi)
    exact = g_variance(n, Q, method="characters", config=config).G
    final_form = q**n * (Q.degree - q**Q.degree / phi)
    return {
        "q": q, "n": n, "Q": Q.coeffs, "D": D,
        "exact_G": exact,
        "hl_estimate": hl_estimate,
        "final_form": final_form,
        "hl_over_exact": hl_estimate / float(exact) if exact else None,
        "final_over_exact": final_form / float(exact) if exact else None,
        "norm_q_over_phi": q**Q.degree / phi,
        "jsums": jsums,
    }


def psi2_trend(n: int, K_ints, q_list,
               config: RunConfig | None = None) -> list[dict]:
    """|psi2 - q^n| / q^{n - 1/2} across odd field sizes (bounded for the
    calibrated constant recorded in the tests)."""
    rows = []
    for q in q_list:
        field = field_from_q(q, config)
        K = Poly.from_ints(field, K_ints)
        value = psi2(n, K, config)
        rows.append({
            "q": q, "n": n, "psi2": value,
            "normalized_gap": abs(value - q**n) / q ** (n - 0.5),
        })
    return rows
