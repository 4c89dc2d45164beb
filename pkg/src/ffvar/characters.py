"""The unit group (F_q[T]/Q)^x and its Dirichlet characters.

The group is decomposed generically: for each prime dividing its order the
Sylow subgroup is generated by deterministic scanning, decomposed by the
maximal-order/quotient recursion for abelian p-groups, and the per-prime
cyclic factors are merged into invariant factors d_1 >= d_2 >= ... with
d_{i+1} | d_i. A full discrete-log table (every unit residue -> exponent
vector) is built by enumerating all generator products; the enumeration
covering each unit exactly once is what certifies the decomposition.

Characters are exponent tuples against the generators; their values are
exponents of exp(2*pi*i/M) with M the group exponent, kept exact until an
explicit conversion. A character is even when it kills the scalars F_q^x
and primitive when no proper divisor modulus induces it; both flags are
computed definitionally and cross-checked against divisor-sum formulas in
:func:`char_census`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import cache as _cache
from .config import RunConfig, cfg, require_enumeration, require_phi
from .cyclotomic import CycInt
from .errors import InternalCheckError, ValidationError
from .fields import Field, factorize_int
from .polys import (Poly, factorize, mobius_poly, monic_divisors, phi_of)


# ---------------------------------------------------------------------------
# residue arithmetic on fixed-length coefficient tuples

def _make_mulmod(field: Field, Q: Poly):
    """Multiplication of residues mod Q as fixed-length-m tuples."""
    m = Q.degree
    add, mul, sub = field.add, field.mul, field.sub
    qc = Q.coeffs
    if all(c == 0 for c in qc[:-1]):
        # Q = T^m: reduction is truncation
        def mulmod(a, b):
            out = [0] * m
            for i in range(m):
                ai = a[i]
                if ai:
                    for j in range(m - i):
                        bj = b[j]
                        if bj:
                            out[i + j] = add(out[i + j], mul(ai, bj))
            return tuple(out)
        return mulmod

    def mulmod(a, b):
        conv = [0] * (2 * m - 1)
        for i in range(m):
            ai = a[i]
            if ai:
                for j in range(m):
                    bj = b[j]
                    if bj:
                        conv[i + j] = add(conv[i + j], mul(ai, bj))
        for top in range(2 * m - 2, m - 1, -1):
            c = conv[top]
            if c:
                conv[top] = 0
                for j in range(m):
                    if qc[j]:
                        conv[top - m + j] = sub(conv[top - m + j], mul(c, qc[j]))
        return tuple(conv[:m])
    return mulmod


def _pow(mulmod, ident, a, e: int):
    result = ident
    base = a
    while e:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    return result


def _tuple_index(field: Field, t) -> int:
    q = field.q
    idx = 0
    for c in reversed(t):
        idx = idx * q + c
    return idx


def _index_tuple(field: Field, idx: int, m: int) -> tuple[int, ...]:
    q = field.q
    out = []
    for _ in range(m):
        out.append(idx % q)
        idx //= q
    return tuple(out)


# ---------------------------------------------------------------------------
# abelian p-group decomposition on explicit element sets

def _element_order_p(mulmod, ident, x, ell: int) -> int:
    order = 1
    cur = x
    while cur != ident:
        cur = _pow(mulmod, ident, cur, ell)
        order *= ell
    return order


def _decompose_p_group(elements: list, mulmod, ident, ell: int) -> list[tuple]:
    """Basis [(generator, order), ...] with orders descending.

    `elements` is the full subgroup, explicitly listed.
    """
    if len(elements) == 1:
        return []
    orders = {x: _element_order_p(mulmod, ident, x, ell) for x in elements}
    g = max(sorted(elements), key=lambda x: orders[x])
    og = orders[g]
    cyc = {}
    cur = ident
    for t in range(og):
        cyc[cur] = t
        cur = mulmod(cur, g)
    # canonical representative of each coset of <g>
    rep_of: dict = {}
    for x in sorted(elements):
        if x in rep_of:
            continue
        coset = []
        cur = x
        for _ in range(og):
            coset.append(cur)
            cur = mulmod(cur, g)
        rep = min(coset)
        for y in coset:
            rep_of[y] = rep
    reps = sorted(set(rep_of.values()))

    def qmul(a, b):
        return rep_of[mulmod(a, b)]

    sub = _decompose_p_group(reps, qmul, rep_of[ident], ell)
    basis = [(g, og)]
    for hbar, oh in sub:
        z = _pow(mulmod, ident, hbar, oh)  # lands in <g>
        c = cyc[z]
        if c % oh:
            raise InternalCheckError("p-group correction failed")  # pragma: no cover
        corr = _pow(mulmod, ident, g, (og - c // oh) % og)
        basis.append((mulmod(hbar, corr), oh))
    return basis


# ---------------------------------------------------------------------------
# the unit group

@dataclass
class UnitGroup:
    """(F_q[T]/Q)^x with generators, invariant factors and full dlog table.

    Immutable after construction; evaluation helpers are pure.
    """

    Q: Poly
    phi: int
    generators: tuple[Poly, ...]
    orders: tuple[int, ...]
    unit_indices: np.ndarray       # ascending residue indices, length phi
    dlog_rows: np.ndarray          # (phi, r) exponent vectors, aligned

    def __post_init__(self):
        self._row_of = {int(u): i for i, u in enumerate(self.unit_indices)}
        self._weights = tuple(self.exponent // d for d in self.orders)

    @property
    def field(self) -> Field:
        return self.Q.field

    @property
    def exponent(self) -> int:
        return self.orders[0] if self.orders else 1

    @property
    def rank(self) -> int:
        return len(self.orders)

    def residue_index(self, f: Poly) -> int:
        r = f % self.Q
        return _tuple_index(self.field, r.coeffs + (0,) * (self.Q.degree - len(r.coeffs)))

    def row_for_index(self, idx: int) -> int | None:
        return self._row_of.get(int(idx))

    def dlog_vector(self, f: Poly) -> tuple[int, ...] | None:
        """Exponent vector of f mod Q, or None when gcd(f, Q) != 1."""
        row = self.row_for_index(self.residue_index(f))
        if row is None:
            return None
        return tuple(int(x) for x in self.dlog_rows[row])

    def pairing(self, exponents, dlog_vec) -> int:
        """Value exponent (mod M) of the character `exponents` at a unit."""
        M = self.exponent
        total = 0
        for e, a, w in zip(exponents, dlog_vec, self._weights):
            total += e * a * w
        return total % M

    def scalar_rows(self) -> list[tuple[int, ...]]:
        """dlog vectors of the nonzero scalars."""
        out = []
        for c in range(1, self.field.q):
            row = self.row_for_index(_tuple_index(self.field,
                                                  (c,) + (0,) * (self.Q.degree - 1)))
            if row is None:
                raise InternalCheckError("scalar missing from unit table")  # pragma: no cover
            out.append(tuple(int(x) for x in self.dlog_rows[row]))
        return out

    def serializable(self) -> dict:
        F = self.field
        return {
            "schema": _cache.SCHEMA_VERSION,
            "field": {"p": F.p, "k": F.k,
                      "modulus": list(F.modulus) if F.modulus else None},
            "Q": list(self.Q.coeffs),
            "phi": self.phi,
            "generators": [list(g.coeffs) for g in self.generators],
            "orders": list(self.orders),
            "unit_indices": [int(x) for x in self.unit_indices],
            "dlog": [[int(x) for x in row] for row in self.dlog_rows],
        }


def _coprime_residue_indices(field: Field, Q: Poly,
                             config: RunConfig | None) -> list[int]:
    m = Q.degree
    q = field.q
    require_enumeration(q**m, config)
    primes = [P for P, _ in factorize(Q).factors]
    if field.has_tables:
        from .bulk import bulk_mod_indices
        idx = np.arange(q**m, dtype=np.int64)
        # index i encodes a residue of degree < m; reuse the monic reducer
        # by treating digits directly
        ok = np.ones(q**m, dtype=bool)
        for P in primes:
            d = P.degree
            # residue of (digits of i) mod P: reduce a degree-(m-1) poly;
            # bulk_mod_indices expects monic input, so reduce i + q^m * 0
            # manually: append no leading one -- emulate with coefficient math
            ok &= _bulk_nonzero_mod(field, idx, m, P)
        return [int(i) for i in np.nonzero(ok)[0]]
    out = []
    for i in range(q**m):
        f = Poly(field, _strip(_index_tuple(field, i, m)))
        if not f.is_zero and all(not (f % P).is_zero for P in primes):
            out.append(i)
    return out


def _strip(t):
    t = list(t)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def _bulk_nonzero_mod(field: Field, idx: np.ndarray, m: int, P: Poly) -> np.ndarray:
    """Mask of residues (digits of idx, degree < m) not divisible by P."""
    q = field.q
    d = P.degree
    if d >= m:
        # P cannot divide a nonzero poly of smaller degree
        return idx != 0
    # synthetic division of the digit matrix by P
    C = []
    t = idx.copy()
    for _ in range(m):
        C.append(t % q)
        t = t // q
    C = np.stack(C, axis=1)
    add, mul, negt = field.add_table, field.mul_table, field.neg_table
    pc = P.coeffs
    for col in range(m - 1, d - 1, -1):
        factor = negt[C[:, col]]
        for j in range(d):
            if pc[j]:
                C[:, col - d + j] = add[C[:, col - d + j], mul[factor, pc[j]]]
        C[:, col] = 0
    return C[:, :d].any(axis=1)


_GROUP_MEMO: dict = {}


def unit_group(Q: Poly, config: RunConfig | None = None,
               use_cache: bool | None = None) -> UnitGroup:
    """Construct (or recall) the decomposed unit group mod Q."""
    if Q.degree < 1:
        raise ValidationError("modulus must have degree >= 1")
    if not Q.is_monic:
        _, Q = Q.monic()
    c = cfg(config)
    memo_key = (Q.field.key, Q.coeffs)
    if memo_key in _GROUP_MEMO:
        return _GROUP_MEMO[memo_key]
    phi = phi_of(Q)
    require_phi(phi, config)
    cache_on = c.use_cache if use_cache is None else use_cache
    group = None
    if cache_on:
        group = _cache.load_unit_group(Q, config)
    if group is None:
        group = _construct_unit_group(Q, phi, config)
        if cache_on:
            _cache.store_unit_group(group, config)
    _GROUP_MEMO[memo_key] = group
    return group


def _construct_unit_group(Q: Poly, phi: int,
                          config: RunConfig | None) -> UnitGroup:
    field = Q.field
    m = Q.degree
    mulmod = _make_mulmod(field, Q)
    ident = (1,) + (0,) * (m - 1)
    unit_idx_list = _coprime_residue_indices(field, Q, config)
    if len(unit_idx_list) != phi:
        raise InternalCheckError(
            f"unit enumeration found {len(unit_idx_list)}, expected {phi}")
    unit_tuples = [_index_tuple(field, i, m) for i in unit_idx_list]

    # per-prime Sylow decompositions
    per_prime: dict[int, list[tuple]] = {}
    for ell, e in sorted(factorize_int(phi).items()):
        L = ell**e
        proj_exp = phi // L
        table = {ident}
        for u in unit_tuples:
            if len(table) == L:
                break
            s = _pow(mulmod, ident, u, proj_exp)
            if s in table:
                continue
            new = set(table)
            power = s
            while power not in table:
                new.update(mulmod(t, power) for t in table)
                power = mulmod(power, s)
            table = new
        if len(table) != L:
            raise InternalCheckError(
                f"Sylow subgroup for {ell} has size {len(table)}, expected {L}")
        per_prime[ell] = _decompose_p_group(sorted(table), mulmod, ident, ell)

    # merge per-prime cyclic factors into invariant factors
    rank = max((len(v) for v in per_prime.values()), default=0)
    gens: list[tuple] = []
    orders: list[int] = []
    for i in range(rank):
        g, d = ident, 1
        for ell in sorted(per_prime):
            lst = per_prime[ell]
            if i < len(lst):
                g = mulmod(g, lst[i][0])
                d *= lst[i][1]
        gens.append(g)
        orders.append(d)

    # full dlog table by enumerating generator products
    r = len(gens)
    table: dict[tuple, tuple] = {ident: (0,) * r}
    for i, (g, d) in enumerate(zip(gens, orders)):
        base_items = list(table.items())
        power = ident
        for t in range(1, d):
            power = mulmod(power, g)
            for u, vec in base_items:
                nu = mulmod(u, power)
                if nu in table:
                    raise InternalCheckError("generators are not independent")
                table[nu] = vec[:i] + (t,) + vec[i + 1:]
    if len(table) != phi or set(table) != set(unit_tuples):
        raise InternalCheckError("dlog table does not cover the unit group")

    unit_indices = np.array(unit_idx_list, dtype=np.int64)
    dlog_rows = np.array([table[t] for t in unit_tuples],
                         dtype=np.int64).reshape(phi, r)
    gen_polys = tuple(Poly(field, _strip(g)) for g in gens)
    return UnitGroup(Q=Q, phi=phi, generators=gen_polys,
                     orders=tuple(orders), unit_indices=unit_indices,
                     dlog_rows=dlog_rows)


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class CharValue:
    """chi(f): zero, or the exponent a of exp(2*pi*i*a/M)."""

    order: int
    exponent: int | None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def to_cyc(self, order: int | None = None) -> CycInt:
        M = self.order if order is None else order
        if self.is_zero:
            return CycInt.zero(M)
        if M == self.order:
            return CycInt.root(M, self.exponent)
        return CycInt.root(self.order, self.exponent).rescale(M)

    def to_complex(self) -> complex:
        return self.to_cyc().to_complex()

    def __mul__(self, other: "CharValue") -> "CharValue":
        if self.order != other.order:
            raise ValidationError("mixed value orders")
        if self.is_zero or other.is_zero:
            return CharValue(self.order, None)
        return CharValue(self.order, (self.exponent + other.exponent) % self.order)

    def conj(self) -> "CharValue":
        if self.is_zero:
            return self
        return CharValue(self.order, (-self.exponent) % self.order)


class Character:
    """A Dirichlet character mod Q as an exponent tuple."""

    __slots__ = ("family", "index", "exponents")

    def __init__(self, family: "CharacterFamily", index: int,
                 exponents: tuple[int, ...]):
        self.family = family
        self.index = index
        self.exponents = exponents

    @property
    def group(self) -> UnitGroup:
        return self.family.group

    @property
    def modulus(self) -> Poly:
        return self.family.group.Q

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    @property
    def is_even(self) -> bool:
        return bool(self.family.even_mask[self.index])

    @property
    def is_primitive(self) -> bool:
        return bool(self.family.primitive_mask[self.index])

    @property
    def lambda_even(self) -> int:
        return 1 if self.is_even else 0

    @property
    def order(self) -> int:
        g = self.group
        o = 1
        for e, d in zip(self.exponents, g.orders):
            o = math.lcm(o, d // math.gcd(d, e))
        return o

    def conj(self) -> "Character":
        g = self.group
        ex = tuple((d - e) % d for e, d in zip(self.exponents, g.orders))
        return self.family.by_exponents(ex)

    def __call__(self, f: Poly) -> CharValue:
        return char_eval(self, f)

    def __repr__(self) -> str:
        return (f"Character(mod {self.modulus!r}, index={self.index}, "
                f"exponents={self.exponents})")


class CharacterFamily:
    """All Phi(Q) characters mod Q, indexed by mixed-radix exponent tuples.

    Index 0 is the trivial character. Flags for the whole family are
    computed in one vectorized pass.
    """

    def __init__(self, group: UnitGroup):
        self.group = group

    def __len__(self) -> int:
        return self.group.phi

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        """(phi, r) all exponent tuples, row index = character index."""
        g = self.group
        if not g.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in g.orders],
                            indexing="ij")
        return np.stack([grid.ravel() for grid in grids], axis=1)

    def index_of_exponents(self, exponents) -> int:
        g = self.group
        idx = 0
        for e, d in zip(exponents, g.orders):
            idx = idx * d + (e % d)
        return idx

    def by_exponents(self, exponents) -> Character:
        exponents = tuple(int(e) % d for e, d in zip(exponents, self.group.orders))
        return Character(self, self.index_of_exponents(exponents), exponents)

    def __getitem__(self, index: int) -> Character:
        if not (0 <= index < len(self)):
            raise ValidationError(f"character index {index} out of range")
        ex = tuple(int(x) for x in self.exponent_matrix[index])
        return Character(self, index, ex)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def _pairing_matrix(self, rows: np.ndarray) -> np.ndarray:
        """(phi, len(rows)) pairing exponents mod M against dlog rows."""
        g = self.group
        M = g.exponent
        if not g.orders:
            return np.zeros((1, len(rows)), dtype=np.int64)
        weights = np.array([M // d for d in g.orders], dtype=np.int64)
        E = self.exponent_matrix * weights[None, :]
        return (E @ np.asarray(rows, dtype=np.int64).T) % M

    @cached_property
    def even_mask(self) -> np.ndarray:
        g = self.group
        q = g.field.q
        if q == 2:
            return np.ones(len(self), dtype=bool)
        gen_scalar = g.field.generator()
        row = g.dlog_rows[g.row_for_index(
            _tuple_index(g.field, (gen_scalar,) + (0,) * (g.Q.degree - 1)))]
        return self._pairing_matrix(row[None, :])[:, 0] == 0

    @cached_property
    def primitive_mask(self) -> np.ndarray:
        g = self.group
        mask = np.ones(len(self), dtype=bool)
        nontrivial = self.exponent_matrix.any(axis=1)
        for P, _ in factorize(g.Q).factors:
            QP = g.Q // P
            if QP.degree == 0:
                # prime modulus: only the trivial character is induced
                mask &= nontrivial
                continue
            rows = self._kernel_rows(QP)
            pair = self._pairing_matrix(rows)
            mask &= (pair != 0).any(axis=1)
        return mask

    def _kernel_rows(self, QP: Poly) -> np.ndarray:
        """dlog rows of the units congruent to 1 mod Q/P."""
        g = self.group
        field = g.field
        dP = g.Q.degree - QP.degree
        rows = []
        one = Poly.one(field)
        for t_idx in range(field.q**dP):
            t = Poly(field, _strip(_index_tuple(field, t_idx, dP)))
            u = (one + QP * t) % g.Q
            row = g.row_for_index(g.residue_index(u))
            if row is not None:
                rows.append(g.dlog_rows[row])
        if not rows:
            raise InternalCheckError("empty kernel for primitivity test")  # pragma: no cover
        return np.stack(rows, axis=0)

    @cached_property
    def order_array(self) -> np.ndarray:
        g = self.group
        if not g.orders:
            return np.ones(1, dtype=np.int64)
        E = self.exponent_matrix
        out = np.ones(len(self), dtype=np.int64)
        for i, d in enumerate(g.orders):
            out = np.lcm(out, d // np.gcd(E[:, i], d))
        return out

    def trivial(self) -> Character:
        return self[0]


def characters(Q: Poly, config: RunConfig | None = None) -> CharacterFamily:
    """The indexed family of all Phi(Q) Dirichlet characters mod Q."""
    return CharacterFamily(unit_group(Q, config))


def char_eval(chi: Character, f: Poly) -> CharValue:
    """chi(f): reduces mod Q, vanishes off units, exact root of unity."""
    g = chi.group
    M = g.exponent
    vec = g.dlog_vector(f)
    if vec is None:
        return CharValue(M, None)
    return CharValue(M, g.pairing(chi.exponents, vec))


# ---------------------------------------------------------------------------
# censuses

def _phi_even_formula(R: Poly) -> int:
    """Even-character count of a modulus, with the empty modulus counting 1."""
    if R.degree == 0:
        return 1
    return phi_of(R) // (R.field.q - 1)


def char_census(Q: Poly, config: RunConfig | None = None) -> dict:
    """Character counts from flags and from divisor-sum formulas.

    Raises InternalCheckError when the two disagree.
    """
    fam = characters(Q, config)
    g = fam.group
    q = g.field.q
    even = fam.even_mask
    prim = fam.primitive_mask
    counted = {
        "phi": len(fam),
        "even": int(even.sum()),
        "primitive": int(prim.sum()),
        "primitive_even": int((even & prim).sum()),
        "primitive_odd": int((~even & prim).sum()),
    }
    divisors = monic_divisors(Q)
    phi_prim = sum(mobius_poly(D) * phi_of(Q // D) for D in divisors)
    phi_prim_even = sum(mobius_poly(D) * _phi_even_formula(Q // D)
                        for D in divisors)
    formulas = {
        "phi": phi_of(Q),
        "even": phi_of(Q) // (q - 1),
        "primitive": phi_prim,
        "primitive_even": phi_prim_even,
        "primitive_odd": phi_prim - phi_prim_even,
    }
    if counted != formulas:
        raise InternalCheckError(
            f"census mismatch: flags {counted} vs formulas {formulas}")
    return {"q": q, "Q": Q.coeffs, **counted}
