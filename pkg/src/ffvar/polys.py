"""The ring F_q[T]: arithmetic, factorization, prime-power counts.

Polynomials store their coefficients constant term first, as field codes,
with no trailing zeros (the zero polynomial has an empty tuple). Monic
polynomials of degree n are indexed by the base-q expansion of the n lower
coefficients: index i corresponds to T^n + sum_j code_j T^j where the
code_j are the base-q digits of i. Enumeration therefore runs with the
constant coefficient moving fastest, and an interval around T^(h+1)*B is
the contiguous index block [idx(B)*q^(h+1), (idx(B)+1)*q^(h+1)).

Factorization is squarefree decomposition, then distinct-degree splitting,
then equal-degree splitting; the randomized splitting draws from an RNG
seeded by a digest of the input, so output is reproducible. Factors are
sorted by (degree, coefficient tuple), giving a canonical form usable in
cache keys.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .config import RunConfig, require_enumeration
from .errors import ValidationError
from .fields import Field, factorize_int, mobius_int


class Poly:
    """An element of F_q[T] (immutable value)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def make(cls, field: Field, coeffs) -> "Poly":
        c = [int(x) for x in coeffs]
        if any(x < 0 or x >= field.q for x in c):
            raise ValidationError("coefficient code out of range")
        while c and c[-1] == 0:
            c.pop()
        return cls(field, tuple(c))

    @classmethod
    def from_ints(cls, field: Field, ints) -> "Poly":
        """Coefficients as plain integers, reduced into the prime subfield."""
        return cls.make(field, [int(x) % field.p for x in ints])

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: Field, c: int) -> "Poly":
        return cls(field, (c,)) if c else cls(field, ())

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValidationError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def norm(self) -> int:
        """q^deg for nonzero polynomials."""
        if self.is_zero:
            return 0
        return self.field.q ** self.degree

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field.key, self.coeffs))

    def sort_key(self) -> tuple:
        return (self.degree, self.coeffs)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        while out and out[-1] == 0:
            out.pop()
        return Poly(F, tuple(out))

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Poly(F, tuple(out))

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return Poly(F, ())
        return Poly(F, tuple(F.mul(a, c) for a in self.coeffs))

    def shift(self, m: int) -> "Poly":
        """Multiply by T^m."""
        if self.is_zero or m == 0:
            return self
        return Poly(self.field, (0,) * m + self.coeffs)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.field
        if other.field != F:
            raise ValidationError("mismatched fields")
        if other.is_zero:
            raise ValidationError("division by the zero polynomial")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lead = F.inv(b[-1])
        if len(a) - 1 < db:
            return Poly(F, ()), self
        quot = [0] * (len(a) - db)
        for top in range(len(a) - 1, db - 1, -1):
            c = a[top]
            if c:
                c = F.mul(c, inv_lead)
                quot[top - db] = c
                for j in range(db + 1):
                    a[top - db + j] = F.sub(a[top - db + j], F.mul(c, b[j]))
        while a and a[-1] == 0:
            a.pop()
        return Poly(F, tuple(_trim(quot))), Poly(F, tuple(a))

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValidationError("negative polynomial power")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pow_mod(self, e: int, m: "Poly") -> "Poly":
        result = Poly.one(self.field) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        if a.is_zero:
            return a
        return a.scale(a.field.inv(a.leading))

    def monic(self) -> tuple[int, "Poly"]:
        """(leading unit, monic normalization)."""
        if self.is_zero:
            raise ValidationError("zero polynomial has no monic form")
        u = self.leading
        return u, self.scale(self.field.inv(u))

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul(self.coeffs[i], (i % F.p)))
        return Poly(F, tuple(_trim(out)))

    def evaluate(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def star(self) -> "Poly":
        """The reversal T^deg * f(1/T); 0 maps to 0."""
        return Poly(self.field, tuple(_trim(list(reversed(self.coeffs)))))

    def __repr__(self) -> str:
        return f"Poly({poly_to_text(self)!r} over q={self.field.q})"


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def reverse_star(f: Poly) -> Poly:
    return f.star()


# ---------------------------------------------------------------------------
# text form: "T^3+2*T+1", or the constant-first vector "[1,2,0,1]"

def poly_to_text(f: Poly) -> str:
    if f.is_zero:
        return "0"
    terms = []
    for i in range(f.degree, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("T" if c == 1 else f"{c}*T")
        else:
            terms.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
    return "+".join(terms)


def poly_from_text(field: Field, text: str) -> Poly:
    s = text.strip().replace(" ", "")
    if not s:
        raise ValidationError("empty polynomial text")
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValidationError(f"malformed vector form: {text!r}")
        body = s[1:-1]
        ints = [int(t) for t in body.split(",")] if body else []
        return Poly.from_ints(field, ints)
    if s == "0":
        return Poly.zero(field)
    coeffs: dict[int, int] = {}
    s = s.replace("-", "+-")
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        if "T" in term:
            head, _, tail = term.partition("T")
            c = int(head.rstrip("*")) if head else 1
            e = int(tail[1:]) if tail.startswith("^") else (1 if not tail else None)
            if e is None:
                raise ValidationError(f"malformed term {term!r} in {text!r}")
        else:
            c, e = int(term), 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
    if not coeffs:
        return Poly.zero(field)
    vec = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        vec[e] = c % field.p
    return Poly.from_ints(field, vec)


# ---------------------------------------------------------------------------
# monic enumeration and indexing

def monic_index(f: Poly) -> int:
    if not f.is_monic:
        raise ValidationError("index is defined for monic polynomials")
    q = f.field.q
    idx = 0
    for c in reversed(f.coeffs[:-1]):
        idx = idx * q + c
    return idx


def monic_from_index(field: Field, n: int, idx: int) -> Poly:
    q = field.q
    lower = []
    for _ in range(n):
        lower.append(idx % q)
        idx //= q
    return Poly(field, tuple(lower) + (1,))


def enumerate_monic(field: Field, n: int, lo: int | None = None,
                    hi: int | None = None,
                    config: RunConfig | None = None):
    """Yield monic polynomials of degree n by index; [lo, hi) slices.

    Slices over disjoint index ranges compose to the full enumeration, so
    callers own any parallel partitioning.
    """
    if n < 0:
        raise ValidationError("degree must be >= 0")
    total = field.q**n
    lo = 0 if lo is None else lo
    hi = total if hi is None else hi
    if not (0 <= lo <= hi <= total):
        raise ValidationError(f"slice [{lo}, {hi}) out of range [0, {total})")
    require_enumeration(hi - lo, config)
    for i in range(lo, hi):
        yield monic_from_index(field, n, i)


def interval_members(A: Poly, h: int, config: RunConfig | None = None):
    """Yield all f with ||f - A|| <= q^h, i.e. A + g for deg g <= h."""
    if A.is_zero or h >= A.degree:
        raise ValidationError("need 0 <= h < deg A")
    if h < 0:
        raise ValidationError("h must be >= 0")
    field = A.field
    q = field.q
    require_enumeration(q ** (h + 1), config)
    for i in range(q ** (h + 1)):
        g = []
        t = i
        for _ in range(h + 1):
            g.append(t % q)
            t //= q
        yield A + Poly(field, tuple(_trim(g)))


# ---------------------------------------------------------------------------
# irreducibility and factorization

def is_irreducible(f: Poly) -> bool:
    """Rabin test; constants and the zero polynomial are not irreducible."""
    n = f.degree
    if n < 1:
        return False
    F = f.field
    q = F.q
    _, f = f.monic()
    x = Poly.x(F)
    if x.pow_mod(q**n, f) != (x % f):
        return False
    for ell in factorize_int(n):
        xe = x.pow_mod(q ** (n // ell), f)
        if f.gcd(xe - x).degree != 0:
            return False
    return True


def _pth_root(f: Poly) -> Poly:
    """For f with zero derivative (f a p-th power), return its p-th root."""
    F = f.field
    p, k = F.p, F.k
    # coefficients sit at exponents divisible by p; Frobenius inverse is
    # raising to p^(k-1)
    root = [F.pow(f.coeffs[i], p ** (k - 1)) for i in range(0, len(f.coeffs), p)]
    return Poly(F, tuple(_trim(root)))


def _squarefree_parts(f: Poly) -> list[tuple[Poly, int]]:
    """Yun-style decomposition of a monic f into (squarefree, multiplicity)."""
    F = f.field
    p = F.p
    out: list[tuple[Poly, int]] = []
    if f.is_one:
        return out
    df = f.derivative()
    if df.is_zero:
        return [(g, e * p) for g, e in _squarefree_parts(_pth_root(f))]
    c = f.gcd(df)
    w = f // c
    i = 1
    while not w.is_one:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        w = y
        c = c // y
        i += 1
    if not c.is_one:
        out.extend((g, e * p) for g, e in _squarefree_parts(_pth_root(c)))
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split squarefree monic f into (product of degree-d irreducibles, d)."""
    F = f.field
    q = F.q
    out = []
    x = Poly.x(F)
    r = x % f
    d = 0
    rest = f
    while rest.degree > 0:
        d += 1
        if rest.degree < 2 * d:
            out.append((rest, rest.degree))
            break
        r = r.pow_mod(q, rest)
        g = rest.gcd(r - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            r = r % rest
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    F = f.field
    if f.degree == d:
        return [f]
    q = F.q
    while True:
        a = Poly(F, tuple(rng.randrange(q) for _ in range(f.degree)))
        a = Poly(F, tuple(_trim(list(a.coeffs))))
        if a.degree < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree < f.degree:
            split = g
        else:
            if F.p == 2:
                # trace map over F_2 of the residue field
                t = Poly.zero(F)
                r = a % f
                for _ in range(F.k * d):
                    t = (t + r) % f
                    r = r.pow_mod(2, f)
                candidate = t
            else:
                candidate = a.pow_mod((q**d - 1) // 2, f) - Poly.one(F)
            split = f.gcd(candidate)
            if not (0 < split.degree < f.degree):
                continue
        return (_equal_degree(split, d, rng)
                + _equal_degree(f // split, d, rng))


@dataclass(frozen=True)
class Factorization:
    """unit * prod P_i^{e_i}, factors canonically sorted."""

    field: Field
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def value(self) -> Poly:
        out = Poly.constant(self.field, self.unit)
        for p, e in self.factors:
            out = out * p**e
        return out

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def distinct_primes(self) -> list[Poly]:
        return [p for p, _ in self.factors]


def _seed_for(f: Poly) -> int:
    F = f.field
    h = hashlib.sha256()
    h.update(repr((F.p, F.k, F.modulus, f.coeffs)).encode())
    return int.from_bytes(h.digest()[:8], "big")


def factorize(f: Poly) -> Factorization:
    """Canonical factorization into monic irreducibles."""
    if f.is_zero:
        raise ValidationError("cannot factor the zero polynomial")
    unit, g = f.monic()
    rng = random.Random(_seed_for(f))
    factors: list[tuple[Poly, int]] = []
    for sqf, mult in _squarefree_parts(g):
        for prod, d in _distinct_degree(sqf):
            for irr in _equal_degree(prod, d, rng):
                factors.append((irr, mult))
    factors.sort(key=lambda t: t[0].sort_key())
    return Factorization(f.field, unit, tuple(factors))


def von_mangoldt(f: Poly) -> int:
    """deg P if f = c * P^e with P monic irreducible, else 0."""
    if f.is_zero:
        raise ValidationError("Lambda is undefined at 0")
    if f.degree < 1:
        return 0
    fac = factorize(f)
    if fac.is_prime_power:
        return fac.factors[0][0].degree
    return 0


def count_irreducibles(field: Field, n: int) -> int:
    """pi(n), the number of monic irreducibles of degree n, by Mobius
    inversion of sum_{d|n} d*pi(d) = q^n."""
    if n < 1:
        raise ValidationError("degree must be >= 1")
    q = field.q
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += mobius_int(n // d) * q**d
    return total // n


def lambda_sum_formula(field: Field, n: int) -> int:
    """sum over monic degree-n of Lambda, via the pi(d) counts (= q^n)."""
    return sum(d * count_irreducibles(field, d)
               for d in range(1, n + 1) if n % d == 0)


def lambda_sq_sum_formula(field: Field, n: int) -> int:
    """sum over monic degree-n of Lambda^2 = sum_{d|n} d^2 pi(d)."""
    return sum(d * d * count_irreducibles(field, d)
               for d in range(1, n + 1) if n % d == 0)


def phi_of(Q: Poly) -> int:
    """Size of (F_q[T]/Q)^x via the product over Q's prime factors."""
    if Q.degree < 1:
        return 1
    q = Q.field.q
    phi = 1
    for P, e in factorize(Q).factors:
        nP = q**P.degree
        phi *= nP ** (e - 1) * (nP - 1)
    return phi


def monic_divisors(Q: Poly) -> list[Poly]:
    """All monic divisors of Q (including 1 and the monic form of Q)."""
    if Q.is_zero:
        raise ValidationError("zero has no divisor lattice")
    divs = [Poly.one(Q.field)]
    for P, e in factorize(Q).factors:
        powers = [P**j for j in range(e + 1)]
        divs = [d * pw for d in divs for pw in powers]
    divs.sort(key=Poly.sort_key)
    return divs


def mobius_poly(D: Poly) -> int:
    """Mobius function of a monic polynomial."""
    if D.is_one:
        return 1
    fac = factorize(D)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def is_squarefree(Q: Poly) -> bool:
    if Q.is_zero:
        return False
    dQ = Q.derivative()
    if dQ.is_zero:
        return Q.degree == 0
    return Q.gcd(dQ).degree == 0
