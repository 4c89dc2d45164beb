"""Exact cyclotomic integers: Z-linear combinations of M-th roots of unity.

A value is stored as an integer vector of length M, position a holding the
multiplicity of exp(2*pi*i*a/M). Addition, multiplication (cyclic
convolution) and conjugation are exact. Two vectors can represent the same
complex value, so equality, zero tests and rational extraction go through
the canonical form: the remainder modulo the M-th cyclotomic polynomial,
which is a faithful coordinate system for the value. Conversion to complex
floating point is the only lossy operation.
"""
from __future__ import annotations

import cmath
from functools import lru_cache

from .errors import ValidationError
from .fields import factorize_int


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize_int(n).items():
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending), den monic-ish."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for top in range(len(num) - 1, len(den) - 2, -1):
        c = num[top]
        if c % lead:
            raise ValidationError("inexact cyclotomic division")  # pragma: no cover
        c //= lead
        out[top - len(den) + 1] = c
        if c:
            for j, dj in enumerate(den):
                num[top - len(den) + 1 + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ValidationError("nonzero remainder in cyclotomic setup")  # pragma: no cover
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the M-th cyclotomic polynomial."""
    if M < 1:
        raise ValidationError("order must be >= 1")
    if M == 1:
        return (-1, 1)
    poly = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    for d in _divisors(M):
        if d < M:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(M: int) -> tuple[tuple[int, ...], ...]:
    """rows[j] = x^j mod Phi_M as a vector of length deg(Phi_M)."""
    phi = cyclotomic_polynomial(M)
    deg = len(phi) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    for j in range(M):
        if j < deg:
            cur = [0] * deg
            cur[j] = 1
        else:
            prev = rows[j - 1]
            cur = [0] + list(prev[:-1])
            carry = prev[-1]
            if carry:
                for t in range(deg):
                    cur[t] -= carry * phi[t]
        rows.append(tuple(cur))
    return tuple(rows)


@lru_cache(maxsize=None)
def _roots_of_unity(M: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * a / M) for a in range(M))


class CycInt:
    """An element of Z[zeta_M] in the group-ring representation."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != order:
            raise ValidationError("coefficient vector must have length M")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, M: int) -> "CycInt":
        return cls(M, (0,) * M)

    @classmethod
    def from_int(cls, M: int, n: int) -> "CycInt":
        v = [0] * M
        v[0] = n
        return cls(M, v)

    @classmethod
    def root(cls, M: int, a: int, mult: int = 1) -> "CycInt":
        v = [0] * M
        v[a % M] += mult
        return cls(M, v)

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "CycInt") -> None:
        if self.order != other.order:
            raise ValidationError("mixed cyclotomic orders")

    def __add__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.order,
                      (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.order,
                      (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.order, (-a for a in self.coeffs))

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.order, (a * other for a in self.coeffs))
        self._check(other)
        M = self.order
        out = [0] * M
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        k = i + j
                        out[k - M if k >= M else k] += a * b
        return CycInt(M, out)

    def __rmul__(self, other: int) -> "CycInt":
        return self * other

    def conj(self) -> "CycInt":
        M = self.order
        v = [0] * M
        for a, c in enumerate(self.coeffs):
            v[(-a) % M] += c
        return CycInt(M, v)

    def norm_sq(self) -> "CycInt":
        """self * conj(self); a nonnegative real cyclotomic value."""
        return self * self.conj()

    # -- canonical form and predicates ---------------------------------------

    def canonical(self) -> tuple[int, ...]:
        """Coordinates modulo Phi_M: equal values give equal tuples."""
        rows = _reduction_rows(self.order)
        deg = len(rows[0])
        out = [0] * deg
        for j, c in enumerate(self.coeffs):
            if c:
                row = rows[j]
                for t in range(deg):
                    out[t] += c * row[t]
        return tuple(out)

    def reduced(self) -> "CycInt":
        """Same value with small support (canonical form, zero-padded)."""
        can = self.canonical()
        return CycInt(self.order, can + (0,) * (self.order - len(can)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.canonical())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycInt):
            return NotImplemented
        if self.order != other.order:
            return False
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.order, self.canonical()))

    def as_int(self) -> int:
        """The value as a plain integer; raises if it is not rational."""
        can = self.canonical()
        if any(can[1:]):
            raise ValidationError("cyclotomic value is not a rational integer")
        return can[0]

    @property
    def is_rational(self) -> bool:
        return not any(self.canonical()[1:])

    def to_complex(self) -> complex:
        roots = _roots_of_unity(self.order)
        return sum(c * roots[a] for a, c in enumerate(self.coeffs) if c)

    def rescale(self, new_order: int) -> "CycInt":
        """Re-express in Z[zeta_{new_order}] when possible.

        Embedding needs order | new_order; collapsing needs the support to
        sit on multiples of order // new_order.
        """
        M, N = self.order, new_order
        if N == M:
            return self
        if N % M == 0:
            step = N // M
            v = [0] * N
            for a, c in enumerate(self.coeffs):
                v[a * step] += c
            return CycInt(N, v)
        if M % N == 0:
            step = M // N
            v = [0] * N
            for a, c in enumerate(self.coeffs):
                if c:
                    if a % step:
                        raise ValidationError(
                            "value does not live in the smaller cyclotomic ring")
                    v[a // step] += c
            return CycInt(N, v)
        raise ValidationError(f"cannot rescale order {M} to {N}")

    def __repr__(self) -> str:
        nz = {a: c for a, c in enumerate(self.coeffs) if c}
        return f"CycInt(M={self.order}, {nz})"
