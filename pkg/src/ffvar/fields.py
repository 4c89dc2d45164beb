"""Exact arithmetic in finite fields F_q with q = p^k.

An element is held as an integer code in [0, q): the element with
coordinates (a_0, ..., a_{k-1}) in the power basis of the defining modulus
has code sum a_i * p^i. Codes 0..p-1 are the scalars of the prime field,
code 1 is the multiplicative identity. Extension fields carry an explicit
monic irreducible modulus over F_p; when none is supplied the
lexicographically least one (constant term first) is chosen, so two
constructions with identical inputs agree coefficient for coefficient.

Fields with q up to ``table_cap`` build full add/mul lookup tables, which
back the vectorized enumeration kernels in :mod:`ffvar.bulk`.
"""
from __future__ import annotations

from itertools import product
from math import isqrt

import numpy as np

from .config import RunConfig, cfg
from .errors import InternalCheckError, ValidationError

MAX_Q = 2**31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize_int(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine at desk scale)."""
    if n < 1:
        raise ValidationError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius_int(n: int) -> int:
    f = factorize_int(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


# ---------------------------------------------------------------------------
# minimal F_p[x] helpers on plain int lists (ascending), used only to pick
# and validate extension moduli before a Field object exists

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        _fp_trim(a)
    return a


def _fp_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_is_irreducible(f: list[int], p: int) -> bool:
    """Rabin test for a monic polynomial over F_p of degree >= 1."""
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    xq = _fp_powmod(x, p**n, f, p)
    if _fp_trim([(xi - yi) % p for xi, yi in zip(
            xq + [0] * len(x), x + [0] * len(xq))]):
        return False
    for ell in factorize_int(n):
        xe = _fp_powmod(x, p ** (n // ell), f, p)
        diff = [(a - b) % p for a, b in zip(xe + [0] * 2, x + [0] * len(xe))]
        g = _fp_gcd(f, _fp_trim(diff), p)
        if len(g) - 1 > 0:
            return False
    return True


def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k over F_p, constant term first."""
    for lower in product(range(p), repeat=k):
        f = list(lower) + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise InternalCheckError(f"no irreducible of degree {k} over F_{p}")  # pragma: no cover


class Field:
    """The finite field F_q, q = p^k, with exact element arithmetic.

    Immutable after construction; all operations are pure, so instances are
    safe to share across threads and processes.
    """

    __slots__ = (
        "p", "k", "q", "modulus", "_red_rows", "_gen",
        "add_table", "mul_table", "neg_table", "inv_table",
    )

    def __init__(self, p: int, k: int = 1,
                 modulus: tuple[int, ...] | None = None,
                 table_cap: int | None = None):
        if not is_prime(p):
            raise ValidationError(f"p = {p} is not prime")
        if k < 1:
            raise ValidationError(f"extension degree k = {k} must be >= 1")
        q = p**k
        if q > MAX_Q:
            raise ValidationError(f"q = {q} exceeds the supported bound {MAX_Q}")
        self.p, self.k, self.q = p, k, q
        if k == 1:
            if modulus is not None:
                raise ValidationError("prime fields take no modulus")
            self.modulus = None
        else:
            if modulus is None:
                modulus = _default_modulus(p, k)
            else:
                modulus = tuple(int(c) % p for c in modulus)
                if len(modulus) != k + 1 or modulus[-1] != 1:
                    raise ValidationError(
                        f"modulus must be monic of degree {k} over F_{p}")
                if not _fp_is_irreducible(list(modulus), p):
                    raise ValidationError("modulus is reducible over F_p")
            self.modulus = modulus
        # rows[j] = coordinates of T^(k+j) mod modulus, for reduction
        if k > 1:
            top = [(-c) % p for c in self.modulus[:-1]]  # T^k
            rows = [tuple(top)]
            cur = list(top)
            for _ in range(k - 2):
                carry = cur[-1]
                cur = [0] + cur[:-1]
                if carry:
                    cur = [(o + carry * t) % p for o, t in zip(cur, top)]
                rows.append(tuple(cur))
            self._red_rows = tuple(rows)
        else:
            self._red_rows = ()
        self._gen = None
        cap = cfg(None).table_cap if table_cap is None else table_cap
        if q <= cap:
            self._build_tables()
        else:
            self.add_table = self.mul_table = None
            self.neg_table = self.inv_table = None

    # -- element codecs ----------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coordinates of element `a` in the power basis (length k)."""
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_coeffs(self, v) -> int:
        p = self.p
        code = 0
        for i, c in enumerate(v):
            code += (int(c) % p) * p**i
        return code

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return self._add_ext(a, b)

    def _add_ext(self, a: int, b: int) -> int:
        p = self.p
        code, mult = 0, 1
        for _ in range(self.k):
            code += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return code

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.neg_table is not None:
            return int(self.neg_table[a])
        p = self.p
        code, mult = 0, 1
        for _ in range(self.k):
            code += ((-a) % p) * mult
            a //= p
            mult *= p
        return code

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return self._mul_ext(a, b)

    def _mul_ext(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        va, vb = self.coeffs(a), self.coeffs(b)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(va):
            if ai:
                for j, bj in enumerate(vb):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        out = conv[:k]
        for j in range(k - 1):
            c = conv[k + j]
            if c:
                row = self._red_rows[j]
                out = [(o + c * r) % p for o, r in zip(out, row)]
        return self.from_coeffs(out)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValidationError("zero element has no inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self.inv_table is not None:
            return int(self.inv_table[a])
        return self.pow(a, self.q - 2)

    # -- tables --------------------------------------------------------------

    def _build_tables(self) -> None:
        q = self.q
        if self.k == 1:
            r = np.arange(q, dtype=np.int64)
            self.add_table = (r[:, None] + r[None, :]) % q
            self.mul_table = (r[:, None] * r[None, :]) % q
            self.neg_table = (-r) % q
            inv = np.zeros(q, dtype=np.int64)
            inv[1:] = np.array([pow(int(a), q - 2, q) for a in range(1, q)])
            self.inv_table = inv
        else:
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    s = self._add_ext(a, b)
                    add[a, b] = add[b, a] = s
                    m = self._mul_ext(a, b)
                    mul[a, b] = mul[b, a] = m
            self.add_table = add
            self.mul_table = mul
            self.neg_table = np.array(
                [self.from_coeffs([(-c) % self.p for c in self.coeffs(a)])
                 for a in range(q)], dtype=np.int64)
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = self.pow(a, q - 2)
            self.inv_table = inv

    @property
    def has_tables(self) -> bool:
        return self.mul_table is not None

    # -- multiplicative structure ---------------------------------------------

    def generator(self) -> int:
        """Smallest element code generating the (cyclic) group F_q^x."""
        if self._gen is not None:
            return self._gen
        n = self.q - 1
        primes = list(factorize_int(n)) if n > 1 else []
        for g in range(1, self.q):
            if all(self.pow(g, n // ell) != 1 for ell in primes):
                self._gen = g
                return g
        raise InternalCheckError("no generator found")  # pragma: no cover

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValidationError("zero has no multiplicative order")
        n = self.q - 1
        order = n
        for ell, e in factorize_int(n).items():
            for _ in range(e):
                if self.pow(a, order // ell) == 1:
                    order //= ell
                else:
                    break
        return order

    def dlog(self, x: int, g: int | None = None) -> int:
        """e in [0, q-1) with g^e = x, by baby-step giant-step."""
        if x == 0:
            raise ValidationError("discrete log of zero is undefined")
        if g is None:
            g = self.generator()
        elif self.element_order(g) != self.q - 1:
            raise ValidationError(f"element {g} does not generate F_{self.q}^x")
        n = self.q - 1
        m = isqrt(n - 1) + 1 if n > 1 else 1
        baby: dict[int, int] = {}
        val = 1
        for j in range(m):
            baby.setdefault(val, j)
            val = self.mul(val, g)
        step = self.inv(self.pow(g, m))
        gamma = x
        for i in range(m + 1):
            if gamma in baby:
                return (i * m + baby[gamma]) % n
            gamma = self.mul(gamma, step)
        raise InternalCheckError("baby-step giant-step failed")  # pragma: no cover

    # -- identity ------------------------------------------------------------

    @property
    def key(self) -> tuple:
        return (self.p, self.k, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        if self.k == 1:
            return f"Field(q={self.q})"
        return f"Field(q={self.p}^{self.k}, modulus={list(self.modulus)})"


def make_field(p: int, k: int = 1, modulus=None,
               config: RunConfig | None = None) -> Field:
    """Construct and validate F_{p^k}; see the module docstring for codes."""
    mod = tuple(modulus) if modulus is not None else None
    return Field(p, k, mod, table_cap=cfg(config).table_cap)


def field_from_q(q: int, config: RunConfig | None = None) -> Field:
    """Construct F_q from the prime power q."""
    f = factorize_int(q)
    if len(f) != 1:
        raise ValidationError(f"q = {q} is not a prime power")
    (p, k), = f.items()
    return make_field(p, k, config=config)
