"""Prime counts in short intervals and their variance, two exact ways.

The count nu(A; h) sums the prime-power weight over the interval around A,
skipping multiples of T. Averaging runs over the intervals centered at
T^(h+1)*B for monic B of degree n-h-1, which tile the monic degree-n
polynomials. The variance is computed directly from that enumeration and,
independently, from the even nontrivial characters modulo T^(n-h) via

    Var = q^{-2(n-h-1)} * sum |Psi(n, chi)|^2,

and the two exact rationals must agree. The random-matrix prediction for
the normalized variance is n-h-2, approached as q grows with (n, h) fixed
in the regime h < n-3.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import unit_group
from .config import RunConfig, cfg, require_enumeration
from .errors import InternalCheckError, ValidationError
from .fields import Field, field_from_q
from .lfunctions import family_psi_sq_sum, monic_prime_powers
from .polys import Poly, interval_members, von_mangoldt

_FRAC = Fraction


@dataclass(frozen=True)
class ShortIntervalReport:
    q: int
    n: int
    h: int
    mean_exact: Fraction
    mean_formula: Fraction
    variance_exact: Fraction | None
    variance_by_characters: Fraction | None
    prediction: int
    theorem_regime: bool
    warning: str | None

    @property
    def variance(self) -> Fraction:
        v = self.variance_exact if self.variance_exact is not None \
            else self.variance_by_characters
        if v is None:
            raise ValidationError("no variance computed")
        return v

    @property
    def normalized_variance(self) -> float:
        return float(self.variance / self.q ** (self.h + 1))

    @property
    def deviation(self) -> float | None:
        if self.prediction <= 0:
            return None
        return abs(self.normalized_variance / self.prediction - 1.0)


def nu(A: Poly, h: int, config: RunConfig | None = None) -> int:
    """Prime powers coprime to T in I(A; h), weighted by prime degree."""
    if not (1 <= h < A.degree):
        raise ValidationError("need 1 <= h < deg A")
    total = 0
    for f in interval_members(A, h, config):
        if f.coeffs and f.coeffs[0] != 0:
            total += von_mangoldt(f)
    return total


def psi_tilde(n: int, Q: Poly, A: Poly,
              config: RunConfig | None = None) -> int:
    """Lambda-sum over ALL degree-n polynomials (any leading coefficient)
    congruent to A mod Q."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if A.gcd(Q).degree != 0:
        raise ValidationError("class representative must be coprime to Q")
    field = Q.field
    total = 0
    for m, weight in monic_prime_powers(field, n, config):
        for c in range(1, field.q):
            if ((m.scale(c) - A) % Q).is_zero:
                total += weight
    return total


def _nu_values(field: Field, n: int, h: int,
               config: RunConfig | None) -> list[int]:
    """nu(T^{h+1} B; h) for every monic B of degree n-h-1, in index order."""
    q = field.q
    require_enumeration(q**n, config)
    if field.has_tables:
        import numpy as np

        from .bulk import lambda_table
        lam = lambda_table(field, n, config).astype(np.int64)
        lam[::q] = 0  # constant coefficient zero: multiples of T
        rows = lam.reshape(q ** (n - h - 1), q ** (h + 1))
        return [int(v) for v in rows.sum(axis=1)]
    from .polys import enumerate_monic
    out = []
    for B in enumerate_monic(field, n - h - 1, config=config):
        out.append(nu(B.shift(h + 1), h, config))
    return out


def si_mean(field: Field, n: int, h: int,
            config: RunConfig | None = None) -> tuple[Fraction, Fraction]:
    """(enumerated mean of nu over the interval centers, closed form)."""
    if not (1 <= h < n):
        raise ValidationError("need 1 <= h < n")
    q = field.q
    values = _nu_values(field, n, h, config)
    exact = _FRAC(sum(values), q ** (n - h - 1))
    formula = _FRAC(q ** (h + 1)) * (1 - _FRAC(1, q**n))
    return exact, formula


def si_variance(field: Field, n: int, h: int, method: str = "both",
                config: RunConfig | None = None) -> ShortIntervalReport:
    """Variance of nu over interval centers, by enumeration and/or the
    even-character identity; exact rationals throughout."""
    if not (1 <= h <= n - 2):
        raise ValidationError("need 1 <= h <= n - 2")
    if method not in ("direct", "characters", "both"):
        raise ValidationError(f"unknown method {method!r}")
    q = field.q
    theorem_regime = h < n - 3
    warning = None if theorem_regime else (
        "h < n-3 fails: exact identities hold but the limit statement "
        "is outside its regime")

    mean_formula = _FRAC(q ** (h + 1)) * (1 - _FRAC(1, q**n))
    mean_exact = mean_formula
    var_direct = None
    var_chars = None

    if method in ("direct", "both"):
        values = _nu_values(field, n, h, config)
        count = q ** (n - h - 1)
        mean_exact = _FRAC(sum(values), count)
        var_direct = _FRAC(sum(v * v for v in values), count) - mean_exact**2
        if mean_exact != mean_formula:
            raise InternalCheckError("interval mean disagrees with the "
                                     "closed form")
    if method in ("characters", "both"):
        modulus = Poly.x(field) ** (n - h)
        group = unit_group(modulus, config)
        S, _ = family_psi_sq_sum(group, n, parity="even", config=config)
        var_chars = _FRAC(S, q ** (2 * (n - h - 1)))
    if var_direct is not None and var_chars is not None \
            and var_direct != var_chars:
        raise InternalCheckError(
            f"variance mismatch: direct {var_direct} vs characters {var_chars}")
    return ShortIntervalReport(
        q=q, n=n, h=h, mean_exact=mean_exact, mean_formula=mean_formula,
        variance_exact=var_direct, variance_by_characters=var_chars,
        prediction=n - h - 2, theorem_regime=theorem_regime, warning=warning)


def si_sweep(n: int, h: int, q_list, method: str = "characters",
             config: RunConfig | None = None) -> list[dict]:
    """One variance report per field size; failures annotate their row and
    never abort the sweep."""
    rows = []
    for q in q_list:
        row: dict = {"q": q, "n": n, "h": h}
        try:
            field = field_from_q(q, config)
            rep = si_variance(field, n, h, method, config)
            row.update({
                "variance": rep.variance,
                "normalized_variance": rep.normalized_variance,
                "prediction": rep.prediction,
                "deviation": rep.deviation,
                "theorem_regime": rep.theorem_regime,
                "warning": rep.warning,
            })
        except Exception as exc:  # noqa: BLE001 - sweep rows must not abort
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows
