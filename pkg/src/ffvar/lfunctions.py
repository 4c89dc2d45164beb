"""Dirichlet L-functions over F_q[T] as explicit polynomials.

For a nontrivial character mod Q the L-function is the polynomial
sum_k c_k u^k with c_k the full character sum over monic degree-k
polynomials; c_k vanishes for k >= deg Q, which is asserted as a
self-check. Even characters carry the forced zero at u = 1, divided out
exactly to give the completed polynomial. The prime sum
Psi(n, chi) = sum over monic degree-n of Lambda(f) chi(f) is computed two
independent ways: by direct enumeration of prime powers, and through
Newton's identities on the coefficient vector (power sums of the inverse
roots). Both run in exact cyclotomic-integer arithmetic, so their equality
is an integer identity, not a numerical one.

Family aggregates (sums of |Psi|^2 over all characters with given parity
or primitivity) run either per character or through a vectorized integer
engine that histograms character values and performs batched Newton
recursions; the two give identical integers and the engine falls back to
the per-character path when an overflow guard trips.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import Character, CharacterFamily, UnitGroup, unit_group
from .config import RunConfig, cfg, require_enumeration
from .cyclotomic import CycInt, _reduction_rows
from .errors import InternalCheckError, ValidationError
from .fields import Field
from .polys import (Poly, enumerate_monic, factorize, is_irreducible,
                    monic_from_index)

# ---------------------------------------------------------------------------
# prime-power enumeration (shared oracle for direct Psi sums)

_PRIME_POWER_MEMO: dict = {}


def monic_prime_powers(field: Field, n: int,
                       config: RunConfig | None = None) -> list[tuple[Poly, int]]:
    """All (f, Lambda(f)) with f monic of degree n and Lambda(f) > 0.

    Ordered by factor degree then index, so the listing is deterministic.
    """
    if n < 1:
        raise ValidationError("degree must be >= 1")
    key = (field.key, n)
    if key in _PRIME_POWER_MEMO:
        return _PRIME_POWER_MEMO[key]
    require_enumeration(field.q**n, config)
    out: list[tuple[Poly, int]] = []
    for d in range(1, n + 1):
        if n % d:
            continue
        e = n // d
        if field.has_tables and field.q**d > 4096:
            from .bulk import irreducible_index_table
            idxs = irreducible_index_table(field, d, config)[d]
            irr = (monic_from_index(field, d, int(i)) for i in idxs)
        else:
            irr = (f for f in enumerate_monic(field, d, config=config)
                   if is_irreducible(f))
        for P in irr:
            out.append((P**e, d))
    _PRIME_POWER_MEMO[key] = out
    return out


# ---------------------------------------------------------------------------
# the L-polynomial of a single character

@dataclass(frozen=True)
class LFunction:
    """Coefficients c_0..c_{deg Q - 1} (exact), plus the completed form.

    `completed` drops the trivial zero at u = 1 for even characters and is
    None for odd ones.
    """

    chi: Character
    coeffs: tuple[CycInt, ...]
    completed: tuple[CycInt, ...] | None

    @property
    def lambda_even(self) -> int:
        return 1 if self.completed is not None else 0

    @property
    def matrix_size(self) -> int:
        """deg Q - 1 - lambda, the unitarized matrix dimension."""
        return self.chi.modulus.degree - 1 - self.lambda_even

    def completed_or_raw(self) -> tuple[CycInt, ...]:
        return self.completed if self.completed is not None else self.coeffs


def _monic_residue_rows(group: UnitGroup, k: int) -> list[int]:
    """Table rows of the monic degree-k residues coprime to Q (k < deg Q)."""
    q = group.field.q
    base = q**k
    rows = []
    for j in range(base):
        row = group.row_for_index(base + j)
        if row is not None:
            rows.append(row)
    return rows


def l_coeffs(chi: Character, config: RunConfig | None = None) -> LFunction:
    """The L-polynomial of a nontrivial character, exactly."""
    if chi.is_trivial:
        raise ValidationError("the trivial character has no polynomial "
                              "L-function; see zeta_units")
    group = chi.group
    M = group.exponent
    degQ = group.Q.degree
    coeffs = []
    for k in range(degQ):
        vec = [0] * M
        for row in _monic_residue_rows(group, k):
            e = group.pairing(chi.exponents, group.dlog_rows[row])
            vec[e] += 1
        coeffs.append(CycInt(M, vec))
    # self-check: the degree-(deg Q) coefficient is the full unit sum, which
    # must vanish for a nontrivial character (each residue class receives
    # exactly one monic polynomial of degree deg Q)
    full = [0] * M
    for row in range(group.phi):
        e = group.pairing(chi.exponents, group.dlog_rows[row])
        full[e] += 1
    if not CycInt(M, full).is_zero:
        raise InternalCheckError("c_{deg Q} does not vanish")
    completed = None
    if chi.is_even:
        prefix = []
        acc = CycInt.zero(M)
        for c in coeffs:
            acc = (acc + c).reduced()
            prefix.append(acc)
        if not prefix[-1].is_zero:
            raise InternalCheckError("even character misses the zero at u=1")
        completed = tuple(prefix[:-1])
    return LFunction(chi=chi, coeffs=tuple(coeffs), completed=completed)


@dataclass(frozen=True)
class ZetaData:
    """Z(u) = 1/(1 - q u) and the trivial-character L-function."""

    field: Field

    def coeff(self, n: int) -> int:
        if n < 0:
            raise ValidationError("series coefficients start at 0")
        return self.field.q**n

    def trivial_l_coeff(self, Q: Poly, n: int) -> int:
        """Coefficient of u^n in Z(u) * prod_{P | Q} (1 - u^{deg P})."""
        if Q.field != self.field:
            raise ValidationError("modulus lives in a different field")
        num = [1]
        for P, _ in factorize(Q).factors:
            d = P.degree
            new = num + [0] * d
            for j, c in enumerate(num):
                new[j + d] -= c
            num = new
        q = self.field.q
        return sum(c * q ** (n - j) for j, c in enumerate(num[: n + 1]))


def zeta_units(field: Field) -> ZetaData:
    return ZetaData(field)


# ---------------------------------------------------------------------------
# Psi(n, chi) two ways

def psi_direct(n: int, chi: Character,
               config: RunConfig | None = None) -> CycInt:
    """sum over monic degree-n prime powers of Lambda(f) chi(f), by
    enumeration (the oracle side of the dual route)."""
    group = chi.group
    M = group.exponent
    vec = [0] * M
    for f, weight in monic_prime_powers(group.field, n, config):
        dv = group.dlog_vector(f)
        if dv is None:
            continue
        e = group.pairing(chi.exponents, dv)
        vec[e] += weight
    return CycInt(M, vec)


def _newton_psi(coeffs: list[CycInt], n: int, M: int) -> CycInt:
    """-p_n from the coefficient list (c_0 = 1 implied present at index 0)."""
    L = len(coeffs) - 1  # degree bound of the polynomial
    p: dict[int, CycInt] = {}
    for t in range(1, n + 1):
        acc = (t * coeffs[t]) if t <= L else CycInt.zero(M)
        for i in range(1, min(t - 1, L) + 1):
            acc = acc + coeffs[i] * p[t - i]
        p[t] = (-acc).reduced()
    return -p[n]


def psi_newton(n: int, chi: Character, lf: LFunction | None = None,
               config: RunConfig | None = None) -> CycInt:
    """Psi(n, chi) from the inverse-root power sums via Newton's identities.

    Cost after l_coeffs is O(n * deg Q) ring operations; this is the fast
    path for large n.
    """
    if chi.is_trivial:
        raise ValidationError("Newton path needs a nontrivial character")
    if n < 1:
        raise ValidationError("n must be >= 1")
    if lf is None:
        lf = l_coeffs(chi, config)
    M = chi.group.exponent
    return _newton_psi(list(lf.coeffs), n, M)


def rh_bound_holds(n: int, chi: Character, psi: CycInt | None = None) -> bool:
    """|Psi(n, chi)| <= (deg Q - 1) q^{n/2} for nontrivial chi."""
    if psi is None:
        psi = psi_newton(n, chi)
    q = chi.group.field.q
    bound = (chi.modulus.degree - 1) * q ** (n / 2)
    return abs(psi.to_complex()) <= bound + 1e-9


# ---------------------------------------------------------------------------
# root finding and the unitarized conjugacy class

def aberth_roots(coeffs, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """All roots of sum c_k z^k by simultaneous (Aberth) iteration.

    No deflation: every root is updated together, which keeps the tiny
    degrees here robust. Convergence is declared when every residual
    |p(z_i)| drops below tol times the evaluated coefficient scale.
    """
    c = np.asarray(coeffs, dtype=complex)
    if len(c) < 2 or c[-1] == 0:
        raise ValidationError("need a nonzero leading coefficient")
    N = len(c) - 1
    der = c[1:] * np.arange(1, N + 1)
    radius = 1.0 + float(np.max(np.abs(c[:-1] / c[-1]))) if N else 1.0
    angles = 2 * np.pi * (np.arange(N) + 0.3) / N + 0.4 / N
    z = radius * np.exp(1j * angles)
    cabs = np.abs(c)
    pv = np.polynomial.polynomial.polyval(z, c)
    for _ in range(max_iter):
        scale = np.polynomial.polynomial.polyval(np.abs(z), cabs) + 1e-300
        if np.max(np.abs(pv) / scale) <= tol:
            return z
        dv = np.polynomial.polynomial.polyval(z, der)
        dv = np.where(dv == 0, 1e-300, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv_sum = (1.0 / diff).sum(axis=1) - 1.0  # subtract the diagonal 1s
        denom = 1.0 - w * inv_sum
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        z = z - w / denom
        pv = np.polynomial.polynomial.polyval(z, c)
    raise InternalCheckError("root finder did not converge")


@dataclass(frozen=True)
class FrobeniusClass:
    """Sorted eigenangles of the unitarized conjugacy class, with the
    worst deviation of |alpha| from sqrt(q)."""

    matrix_size: int
    angles: tuple[float, ...]
    rh_residual: float

    def trace_power(self, n: int) -> complex:
        return sum(np.exp(1j * n * t) for t in self.angles)


def frobenius(chi: Character, lf: LFunction | None = None,
              config: RunConfig | None = None) -> FrobeniusClass:
    """Inverse roots of the completed L-polynomial as sqrt(q) e^{i theta}."""
    c = cfg(config)
    if chi.is_trivial or not chi.is_primitive:
        raise ValidationError("the unitarized class is defined for "
                              "primitive nontrivial characters")
    if lf is None:
        lf = l_coeffs(chi, config)
    comp = lf.completed_or_raw()
    N = lf.matrix_size
    if N == 0:
        return FrobeniusClass(matrix_size=0, angles=(), rh_residual=0.0)
    coeffs = np.array([z.to_complex() for z in comp])
    if abs(coeffs[-1]) < 1e-9:
        raise InternalCheckError("completed polynomial dropped degree")
    roots = aberth_roots(coeffs, tol=c.root_tol)
    alphas = 1.0 / roots
    sq = math.sqrt(chi.group.field.q)
    residual = float(np.max(np.abs(np.abs(alphas) - sq)))
    if residual > c.rh_tol:
        raise InternalCheckError(
            f"inverse root off the critical circle by {residual:.3e}")
    angles = tuple(sorted(float(a) % (2 * math.pi)
                          for a in np.angle(alphas / sq)))
    return FrobeniusClass(matrix_size=N, angles=angles, rh_residual=residual)


def inverse_root_profile(chi: Character,
                         config: RunConfig | None = None) -> dict:
    """Diagnostic for nontrivial characters: how the inverse roots split
    between modulus 1 and modulus sqrt(q). Reported, never asserted, for
    imprimitive characters."""
    lf = l_coeffs(chi, config)
    coeffs = np.array([z.to_complex() for z in lf.coeffs])
    while len(coeffs) > 1 and abs(coeffs[-1]) < 1e-9:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return {"near_one": 0, "near_sqrt_q": 0, "max_classification_gap": 0.0}
    roots = aberth_roots(coeffs, tol=cfg(config).root_tol)
    alphas = np.abs(1.0 / roots)
    sq = math.sqrt(chi.group.field.q)
    near_one = int(np.sum(np.abs(alphas - 1) <= np.abs(alphas - sq)))
    gap = float(np.max(np.minimum(np.abs(alphas - 1), np.abs(alphas - sq))))
    return {"near_one": near_one,
            "near_sqrt_q": len(alphas) - near_one,
            "max_classification_gap": gap}


# ---------------------------------------------------------------------------
# family aggregates

class _BatchOverflow(Exception):
    pass


_INT_GUARD = 2**62


def _family_selection(fam: CharacterFamily, parity: str | None,
                      primitive: bool | None,
                      include_trivial: bool) -> np.ndarray:
    mask = np.ones(len(fam), dtype=bool)
    if not include_trivial:
        mask[0] = False
    if parity == "even":
        mask &= fam.even_mask
    elif parity == "odd":
        mask &= ~fam.even_mask
    elif parity is not None:
        raise ValidationError("parity must be 'even', 'odd' or None")
    if primitive is True:
        mask &= fam.primitive_mask
    return mask


def _pure_family_sq_sum(fam: CharacterFamily, sel: np.ndarray, n: int,
                        add_lambda: bool,
                        config: RunConfig | None) -> int:
    group = fam.group
    M = group.exponent
    degQ = group.Q.degree
    rows_by_k = [_monic_residue_rows(group, k) for k in range(degQ)]
    total = CycInt.zero(M)
    for ci in np.nonzero(sel)[0]:
        chi = fam[int(ci)]
        coeffs = []
        for k in range(degQ):
            vec = [0] * M
            for row in rows_by_k[k]:
                e = group.pairing(chi.exponents, group.dlog_rows[row])
                vec[e] += 1
            coeffs.append(CycInt(M, vec))
        psi = _newton_psi(coeffs, n, M)
        if add_lambda and chi.is_even:
            psi = psi + CycInt.from_int(M, 1)
        total = (total + psi.norm_sq()).reduced()
    return total.as_int()


def _batched_conv(A: np.ndarray, B: np.ndarray, conv_idx: np.ndarray) -> np.ndarray:
    if int(np.abs(A).max(initial=0)) * int(np.abs(B).max(initial=0)) \
            * A.shape[1] >= _INT_GUARD:
        raise _BatchOverflow
    out = np.empty_like(A)
    for s in range(A.shape[1]):
        out[:, s] = (A * B[:, conv_idx[s]]).sum(axis=1)
    return out


def _batched_family_sq_sum(fam: CharacterFamily, sel: np.ndarray, n: int,
                           add_lambda: bool,
                           config: RunConfig | None) -> int:
    group = fam.group
    M = group.exponent
    degQ = group.Q.degree
    sel_idx = np.nonzero(sel)[0]
    orders = fam.order_array[sel_idx]
    Mf = int(np.lcm.reduce(orders)) if len(orders) else 1
    red_rows = np.array(_reduction_rows(Mf), dtype=np.int64)
    deg_phi = red_rows.shape[1]
    if int(np.abs(red_rows).max()) >= 2**20:
        raise _BatchOverflow
    RED = np.zeros((Mf, Mf), dtype=np.int64)
    RED[:, :deg_phi] = red_rows

    if group.orders:
        weights = np.array([M // d for d in group.orders], dtype=np.int64)
        E = fam.exponent_matrix[sel_idx] * weights[None, :]
    else:
        E = np.zeros((len(sel_idx), 0), dtype=np.int64)
    nsel = len(sel_idx)

    def reduce_rows(X: np.ndarray) -> np.ndarray:
        if int(np.abs(X).max(initial=0)) * int(np.abs(RED).max()) * Mf >= _INT_GUARD:
            raise _BatchOverflow
        return X @ RED

    C: dict[int, np.ndarray] = {}
    for k in range(degQ):
        rows = _monic_residue_rows(group, k)
        A = group.dlog_rows[np.array(rows, dtype=np.int64)]
        pair = (E @ A.T) % M if E.shape[1] else np.zeros((nsel, len(rows)),
                                                         dtype=np.int64)
        scaled = pair * Mf
        if np.any(scaled % M):
            raise InternalCheckError("family order does not cover a value")
        pos = scaled // M
        flat = (np.arange(nsel, dtype=np.int64)[:, None] * Mf + pos).ravel()
        C[k] = np.bincount(flat, minlength=nsel * Mf).reshape(nsel, Mf) \
                 .astype(np.int64)

    conv_idx = (np.arange(Mf)[:, None] - np.arange(Mf)[None, :]) % Mf
    L = degQ - 1
    p: dict[int, np.ndarray] = {}
    for t in range(1, n + 1):
        acc = t * C[t] if t <= L else np.zeros((nsel, Mf), dtype=np.int64)
        for i in range(1, min(t - 1, L) + 1):
            acc = acc + _batched_conv(C[i], p[t - i], conv_idx)
        p[t] = reduce_rows(-acc)
    psi = -p[n]
    if add_lambda:
        even_sel = fam.even_mask[sel_idx]
        psi[:, 0] += even_sel.astype(np.int64)
    conj = psi[:, (-np.arange(Mf)) % Mf]
    sq = _batched_conv(psi, conj, conv_idx)
    total_vec = sq.astype(object).sum(axis=0)
    return CycInt(Mf, [int(x) for x in total_vec]).as_int()


def family_psi_sq_sum(group: UnitGroup, n: int, parity: str | None = None,
                      primitive: bool | None = None,
                      include_trivial: bool = False,
                      add_lambda: bool = False,
                      config: RunConfig | None = None) -> tuple[int, int]:
    """(sum over the family of |Psi(n, chi) + lambda-shift|^2, family size).

    The sum over a conjugation-closed family is a rational integer; exact
    arithmetic throughout makes the result independent of any scheduling
    or batching, and the batched/vectorized route is verified against the
    per-character route in the tests.
    """
    fam = CharacterFamily(group)
    sel = _family_selection(fam, parity, primitive, include_trivial)
    count = int(sel.sum())
    if count == 0:
        return 0, 0
    if add_lambda and parity is None:
        raise ValidationError("lambda shift needs a fixed parity")
    if count >= cfg(config).batch_threshold:
        try:
            return _batched_family_sq_sum(fam, sel, n, add_lambda, config), count
        except _BatchOverflow:
            pass
    return _pure_family_sq_sum(fam, sel, n, add_lambda, config), count


@dataclass(frozen=True)
class TraceMomentReport:
    """Family average of |tr Theta^n|^2, computed via the prime sums."""

    q: int
    modulus: tuple[int, ...]
    n: int
    parity: str
    count: int
    average: Fraction

    @property
    def average_float(self) -> float:
        return float(self.average)


def trace_moment_family(Q: Poly, n: int, parity: str,
                        primitive_only: bool = True,
                        config: RunConfig | None = None) -> TraceMomentReport:
    """Average of |tr Theta_chi^n|^2 over the selected character family.

    Uses |Psi(n,chi) + lambda_chi|^2 / q^n per character, i.e. the explicit
    formula; no root finding involved. With primitive_only=False the same
    quantity is reported for the wider family as a diagnostic (imprimitive
    characters may carry unit inverse roots; see inverse_root_profile).
    """
    group = unit_group(Q, config)
    S, count = family_psi_sq_sum(group, n, parity=parity,
                                 primitive=True if primitive_only else None,
                                 add_lambda=True, config=config)
    if count == 0:
        raise ValidationError("empty character family")
    q = group.field.q
    return TraceMomentReport(q=q, modulus=Q.coeffs, n=n, parity=parity,
                             count=count, average=Fraction(S, count * q**n))
