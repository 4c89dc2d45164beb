"""Vectorized enumeration kernels over table-backed fields.

These back the exhaustive experiments: a sieve producing the prime-power
weight of every monic polynomial of a given degree at once, bulk reduction
modulo a fixed polynomial, and coefficient-matrix plumbing. All kernels
work on monic-polynomial indices (see :mod:`ffvar.polys` for the index
convention) and need the field's add/mul lookup tables, so they are
available exactly when q <= table_cap. Everything here is integer-exact.
"""
from __future__ import annotations

import numpy as np

from .config import RunConfig, require_enumeration
from .errors import ValidationError
from .fields import Field
from .polys import Poly, count_irreducibles, monic_from_index, monic_index


def _require_tables(field: Field) -> None:
    if not field.has_tables:
        raise ValidationError(
            f"bulk kernels need lookup tables (q = {field.q} exceeds table cap)")


def monic_coeff_matrix(field: Field, n: int,
                       config: RunConfig | None = None) -> np.ndarray:
    """(q^n, n+1) matrix of coefficient codes for all monic degree-n polys.

    Row i holds the base-q digits of i followed by the leading 1.
    """
    q = field.q
    require_enumeration(q**n, config)
    idx = np.arange(q**n, dtype=np.int64)
    cols = []
    for _ in range(n):
        cols.append(idx % q)
        idx = idx // q
    cols.append(np.ones(q**n, dtype=np.int64))
    return np.stack(cols, axis=1)


def indices_to_coeffs(field: Field, idx: np.ndarray, n: int) -> np.ndarray:
    """Digits of monic indices: (len(idx), n+1) including the leading 1."""
    q = field.q
    idx = np.asarray(idx, dtype=np.int64)
    cols = []
    t = idx.copy()
    for _ in range(n):
        cols.append(t % q)
        t = t // q
    cols.append(np.ones(len(idx), dtype=np.int64))
    return np.stack(cols, axis=1)


def _product_indices(field: Field, P: Poly, G: np.ndarray) -> np.ndarray:
    """Indices of P*g over the monic cofactor coefficient matrix G."""
    q, d = field.q, P.degree
    m = G.shape[1] - 1
    N = G.shape[0]
    out = np.zeros((N, d + m + 1), dtype=np.int64)
    add, mul = field.add_table, field.mul_table
    pc = P.coeffs
    for i in range(d + 1):
        if pc[i] == 0:
            continue
        row = mul[pc[i]]
        for j in range(m + 1):
            out[:, i + j] = add[out[:, i + j], row[G[:, j]]]
    idx = np.zeros(N, dtype=np.int64)
    mult = 1
    for j in range(d + m):
        idx += out[:, j] * mult
        mult *= q
    return idx


def monic_multiples_indices(field: Field, P: Poly, m: int,
                            config: RunConfig | None = None) -> np.ndarray:
    """Indices of P*g for every monic g of degree m (P monic, deg P = d).

    The result indexes monic polynomials of degree d + m.
    """
    _require_tables(field)
    if not P.is_monic:
        raise ValidationError("P must be monic")
    return _product_indices(field, P, monic_coeff_matrix(field, m, config))


def _composite_mask(field: Field, D: int, irr: dict[int, np.ndarray],
                    config: RunConfig | None) -> np.ndarray:
    """Mark every monic degree-D polynomial with a factor of degree <= D/2."""
    q = field.q
    comp = np.zeros(q**D, dtype=bool)
    for e in range(1, D // 2 + 1):
        G = monic_coeff_matrix(field, D - e, config)
        for p_idx in irr[e]:
            P = monic_from_index(field, e, int(p_idx))
            comp[_product_indices(field, P, G)] = True
    return comp


def irreducible_index_table(field: Field, n: int,
                            config: RunConfig | None = None) -> dict[int, np.ndarray]:
    """Indices of monic irreducibles for every degree 1..n, by sieving.

    A composite of degree D has an irreducible factor of degree <= D/2, so
    marking products of known irreducibles with all monic cofactors finds
    the irreducibles of each degree inductively.
    """
    _require_tables(field)
    if n < 1:
        raise ValidationError("degree must be >= 1")
    require_enumeration(field.q**n, config)
    irr: dict[int, np.ndarray] = {1: np.arange(field.q, dtype=np.int64)}
    for D in range(2, n + 1):
        found = np.nonzero(~_composite_mask(field, D, irr, config))[0]
        expected = count_irreducibles(field, D)
        if len(found) != expected:
            raise ValidationError(
                f"sieve found {len(found)} irreducibles of degree {D}, "
                f"expected {expected}")
        irr[D] = found
    return irr


def lambda_table(field: Field, n: int,
                 config: RunConfig | None = None) -> np.ndarray:
    """Prime-power weights: entry i is the Lambda value of the monic
    degree-n polynomial with index i (int16)."""
    _require_tables(field)
    if n < 1:
        raise ValidationError("degree must be >= 1")
    q = field.q
    require_enumeration(q**n, config)
    half = n // 2
    irr: dict[int, np.ndarray] = {}
    if half >= 1:
        irr = irreducible_index_table(field, half, config)
    lam = np.zeros(q**n, dtype=np.int16)
    irr_n = np.nonzero(~_composite_mask(field, n, irr, config))[0]
    if len(irr_n) != count_irreducibles(field, n):
        raise ValidationError("degree-n sieve count mismatch")
    lam[irr_n] = n
    # proper prime powers P^(n/d) for d | n, d < n; every such d is <= n/2
    for d in range(1, n):
        if n % d:
            continue
        for p_idx in irr[d]:
            P = monic_from_index(field, d, int(p_idx))
            lam[monic_index(P ** (n // d))] = d
    return lam


def bulk_mod_indices(field: Field, idx: np.ndarray, n: int,
                     Q: Poly) -> np.ndarray:
    """Residue indices (base-q over deg < deg Q) of monic degree-n polys
    with the given indices, reduced mod monic Q."""
    _require_tables(field)
    if not Q.is_monic:
        raise ValidationError("Q must be monic")
    m = Q.degree
    q = field.q
    if n < m:
        return np.asarray(idx, dtype=np.int64) + q**n
    C = indices_to_coeffs(field, idx, n)
    add, mul, negt = field.add_table, field.mul_table, field.neg_table
    qc = Q.coeffs
    for col in range(n, m - 1, -1):
        factor = negt[C[:, col]]
        for j in range(m):
            if qc[j] == 0:
                continue
            C[:, col - m + j] = add[C[:, col - m + j], mul[factor, qc[j]]]
        C[:, col] = 0
    out = np.zeros(len(C), dtype=np.int64)
    mult = 1
    for j in range(m):
        out += C[:, j] * mult
        mult *= q
    return out


def monic_residues_mod(field: Field, k: int, Q: Poly,
                       config: RunConfig | None = None) -> np.ndarray:
    """Residue indices mod Q of every monic polynomial of degree k."""
    q = field.q
    require_enumeration(q**k, config)
    idx = np.arange(q**k, dtype=np.int64)
    return bulk_mod_indices(field, idx, k, Q)


def shift_add_indices(field: Field, idx: np.ndarray, n: int,
                      K: Poly) -> np.ndarray:
    """Indices of f + K for monic degree-n f given by `idx` (deg K < n)."""
    _require_tables(field)
    if K.is_zero:
        return np.asarray(idx, dtype=np.int64).copy()
    if K.degree >= n:
        raise ValidationError("need deg K < n")
    q = field.q
    idx = np.asarray(idx, dtype=np.int64)
    out = idx.copy()
    add = field.add_table
    mult = 1
    t = idx.copy()
    for j in range(K.degree + 1):
        digit = t % q
        kc = K.coeffs[j]
        if kc:
            out += (add[digit, kc] - digit) * mult
        t = t // q
        mult *= q
    return out
