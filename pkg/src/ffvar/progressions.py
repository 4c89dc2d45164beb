"""Prime counts in arithmetic progressions and the variance G(n; Q).

Psi(n; Q, A) sums the prime-power weight over monic degree-n polynomials
in the class of A, for A ranging over all reduced residues (not only the
monic ones). The variance G is computed directly from the class counts
and, independently, from the character identity

    G(n; Q) = (1/Phi) * sum_{chi != chi_0} |Psi(n, chi)|^2
            + (1/Phi) * (sum_{P | Q, deg P | n} deg P)^2,

both as exact rationals. Two predictions ride along: the elementary
n q^n - q^{2n}/Phi(Q) for n < deg Q, and the random-matrix limit
min(n, deg Q - 1) for G/q^n with Q squarefree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import unit_group
from .config import RunConfig, cfg
from .errors import InternalCheckError, ValidationError
from .fields import Field, field_from_q
from .lfunctions import family_psi_sq_sum, monic_prime_powers, \
    trace_moment_family
from .polys import (Poly, factorize, is_squarefree, lambda_sq_sum_formula,
                    phi_of)

_FRAC = Fraction


@dataclass(frozen=True)
class ProgressionReport:
    q: int
    n: int
    modulus: tuple[int, ...]
    phi: int
    G_exact: Fraction | None
    G_by_characters: Fraction | None
    prediction_small_range: Fraction
    prediction_rmt: int
    squarefree: bool
    outside_hypotheses: str | None

    @property
    def G(self) -> Fraction:
        g = self.G_exact if self.G_exact is not None else self.G_by_characters
        if g is None:
            raise ValidationError("no variance computed")
        return g

    @property
    def normalized_G(self) -> float:
        return float(self.G / self.q**self.n)

    @property
    def deviation_rmt(self) -> float | None:
        if self.prediction_rmt <= 0:
            return None
        return abs(self.normalized_G / self.prediction_rmt - 1.0)


def _prime_degree_sum(Q: Poly, n: int) -> int:
    """sum of deg P over primes P | Q with deg P | n."""
    return sum(P.degree for P, _ in factorize(Q).factors if n % P.degree == 0)


def psi_by_class(n: int, Q: Poly,
                 config: RunConfig | None = None) -> dict[int, int]:
    """Psi(n; Q, A) for every reduced class, keyed by residue index."""
    group = unit_group(Q, config)
    out = {int(u): 0 for u in group.unit_indices}
    for f, weight in monic_prime_powers(Q.field, n, config):
        idx = group.residue_index(f)
        if idx in out:
            out[idx] += weight
    return out


def psi_progression(n: int, Q: Poly, A: Poly,
                    config: RunConfig | None = None) -> int:
    """Weighted count of monic degree-n prime powers congruent to A mod Q."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if A.gcd(Q).degree != 0:
        raise ValidationError("class representative must be coprime to Q")
    group = unit_group(Q, config)
    target = group.residue_index(A)
    total = 0
    for f, weight in monic_prime_powers(Q.field, n, config):
        if group.residue_index(f) == target:
            total += weight
    return total


def first_moment_identity(n: int, Q: Poly,
                          config: RunConfig | None = None) -> tuple[int, int]:
    """(sum of Psi over reduced classes, q^n - correction); must be equal."""
    total = sum(psi_by_class(n, Q, config).values())
    expected = Q.field.q**n - _prime_degree_sum(Q, n)
    return total, expected


def g_variance(n: int, Q: Poly, method: str = "both",
               config: RunConfig | None = None) -> ProgressionReport:
    """The variance of Psi(n; Q, .) over reduced classes, two exact ways."""
    if Q.degree < 1:
        raise ValidationError("modulus must have degree >= 1")
    if not Q.is_monic:
        _, Q = Q.monic()
    if method not in ("direct", "characters", "both"):
        raise ValidationError(f"unknown method {method!r}")
    if n < 1:
        raise ValidationError("n must be >= 1")
    field = Q.field
    q = field.q
    phi = phi_of(Q)
    G_direct = None
    G_chars = None
    if method in ("direct", "both"):
        classes = psi_by_class(n, Q, config)
        s1 = sum(classes.values())
        s2 = sum(v * v for v in classes.values())
        G_direct = (_FRAC(s2) - 2 * _FRAC(q**n, phi) * s1
                    + _FRAC(q ** (2 * n), phi))
    if method in ("characters", "both"):
        group = unit_group(Q, config)
        S, _ = family_psi_sq_sum(group, n, config=config)
        corr = _prime_degree_sum(Q, n)
        G_chars = _FRAC(S + corr * corr, phi)
    if G_direct is not None and G_chars is not None and G_direct != G_chars:
        raise InternalCheckError(
            f"G mismatch: direct {G_direct} vs characters {G_chars}")
    sf = is_squarefree(Q)
    return ProgressionReport(
        q=q, n=n, modulus=Q.coeffs, phi=phi,
        G_exact=G_direct, G_by_characters=G_chars,
        prediction_small_range=_FRAC(n * q**n) - _FRAC(q ** (2 * n), phi),
        prediction_rmt=min(n, Q.degree - 1),
        squarefree=sf,
        outside_hypotheses=None if sf else
        "Q is not squarefree: the min(n, deg Q - 1) limit is outside its "
        "hypotheses")


def g_small_range_check(n: int, Q: Poly,
                        config: RunConfig | None = None) -> dict:
    """For n < deg Q: exact G, its elementary prediction and the residual,
    with the proof's term-by-term decomposition.

    Raises InternalCheckError when the residual exceeds the calibrated
    envelope C * (n^2 q^{n/2} + (deg Q)^2).
    """
    if not (0 < n < Q.degree):
        raise ValidationError("need 0 < n < deg Q")
    c = cfg(config)
    field = Q.field
    q = field.q
    phi = phi_of(Q)
    rep = g_variance(n, Q, method="both", config=config)
    G = rep.G
    # exact decomposition: G = [sum Lambda^2 coprime] - 2 q^n/Phi [sum Lambda
    # coprime] + q^{2n}/Phi
    lam_sq = lambda_sq_sum_formula(field, n)
    corr_sq = sum(P.degree**2 for P, _ in factorize(Q).factors
                  if n % P.degree == 0)
    corr_1 = _prime_degree_sum(Q, n)
    lam_sq_coprime = lam_sq - corr_sq
    first_moment = q**n - corr_1
    expansion = (_FRAC(lam_sq_coprime)
                 - 2 * _FRAC(q**n, phi) * first_moment
                 + _FRAC(q ** (2 * n), phi))
    if expansion != G:
        raise InternalCheckError("small-range expansion disagrees with G")
    prediction = _FRAC(n * q**n) - _FRAC(q ** (2 * n), phi)
    residual = G - prediction
    envelope = c.small_range_constant * (n * n * q ** (n / 2) + Q.degree**2)
    if abs(float(residual)) > envelope:
        raise InternalCheckError(
            f"small-range residual {float(residual):.3g} exceeds the "
            f"calibrated envelope {envelope:.3g}")
    return {
        "q": q, "n": n, "Q": Q.coeffs, "G": G, "prediction": prediction,
        "residual": residual, "envelope": envelope,
        "terms": {
            "lambda_sq_all": lam_sq,
            "lambda_sq_divisor_correction": corr_sq,
            "first_moment": first_moment,
            "first_moment_correction": corr_1,
        },
    }


def instantiate_template(field: Field, template_ints) -> Poly:
    """Read integer template coefficients into the prime subfield."""
    return Poly.from_ints(field, template_ints)


def g_sweep(n: int, template_ints, q_list, method: str = "characters",
            config: RunConfig | None = None) -> list[dict]:
    """G/q^n across field sizes for a fixed coefficient template.

    Non-squarefree instantiations are skipped with a note, and per-row
    failures never abort the sweep.
    """
    rows = []
    for q in q_list:
        row: dict = {"q": q, "n": n, "template": list(template_ints)}
        try:
            field = field_from_q(q, config)
            Q = instantiate_template(field, template_ints)
            if Q.degree < 1:
                row["skipped"] = "template collapses to a constant"
            elif not is_squarefree(Q):
                row["skipped"] = "instantiation is not squarefree"
            else:
                rep = g_variance(n, Q, method, config)
                row.update({
                    "Q": list(Q.coeffs),
                    "G": rep.G,
                    "normalized_G": rep.normalized_G,
                    "prediction": rep.prediction_rmt,
                    "deviation": rep.deviation_rmt,
                })
        except Exception as exc:  # noqa: BLE001 - sweep rows must not abort
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def trace_moment_vs_g(n: int, Q: Poly,
                      config: RunConfig | None = None) -> dict:
    """G/q^n against the odd-primitive trace moment times (1 + 1/q)."""
    rep = g_variance(n, Q, method="characters", config=config)
    tm = trace_moment_family(Q, n, parity="odd", primitive_only=True,
                             config=config)
    q = Q.field.q
    lhs = rep.G / q**n
    rhs = tm.average * _FRAC(q + 1, q)
    discrepancy = lhs - rhs
    bound = cfg(config).trace_vs_g_constant * Q.degree**2 / q
    return {
        "q": q, "n": n, "Q": Q.coeffs,
        "normalized_G": lhs,
        "trace_moment": tm.average,
        "family_size": tm.count,
        "discrepancy": discrepancy,
        "bound": bound,
        "within_bound": abs(float(discrepancy)) <= bound,
    }
