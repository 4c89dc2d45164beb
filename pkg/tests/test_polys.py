import random

import pytest

from ffvar.config import RunConfig
from ffvar.errors import CapExceededError, ValidationError
from ffvar.fields import make_field
from ffvar.polys import (Poly, count_irreducibles, enumerate_monic, factorize,
                         interval_members, is_irreducible, is_squarefree,
                         lambda_sq_sum_formula, lambda_sum_formula,
                         mobius_poly, monic_divisors, monic_from_index,
                         monic_index, phi_of, poly_from_text, poly_to_text,
                         von_mangoldt)

F2 = make_field(2)
F3 = make_field(3)
F5 = make_field(5)


def P(field, text):
    return poly_from_text(field, text)


def random_poly(field, rng, max_deg=6):
    d = rng.randrange(max_deg + 1)
    return Poly.make(field, [rng.randrange(field.q) for _ in range(d + 1)])


def test_divmod_examples():
    f = P(F2, "T^3+T")
    g = P(F2, "T+1")
    quot, rem = divmod(f, g)
    assert quot == P(F2, "T^2+T") and rem.is_zero
    one = Poly.one(F2)
    assert divmod(f, one) == (f, Poly.zero(F2))
    with pytest.raises(ValidationError):
        divmod(f, Poly.zero(F2))


def test_divmod_random_round_trip():
    rng = random.Random(3)
    for field in (F2, F3, F5, make_field(2, 2)):
        for _ in range(100):
            f = random_poly(field, rng)
            g = random_poly(field, rng)
            if g.is_zero:
                continue
            quot, rem = divmod(f, g)
            assert quot * g + rem == f
            assert rem.degree < g.degree or rem.is_zero


def test_degree_of_products():
    rng = random.Random(5)
    for _ in range(100):
        f, g = random_poly(F3, rng), random_poly(F3, rng)
        if f.is_zero or g.is_zero:
            continue
        assert (f * g).degree == f.degree + g.degree
        assert (f * g).norm == f.norm * g.norm


def test_factorize_examples():
    fac = factorize(P(F2, "T^3+T^2+T+1"))
    assert fac.unit == 1
    assert fac.factors == ((P(F2, "T+1"), 3),)
    fac = factorize(P(F3, "T^2+2"))
    assert fac.factors == ((P(F3, "T+1"), 1), (P(F3, "T+2"), 1))
    irr = P(F5, "T^2+2")
    assert is_irreducible(irr)
    assert factorize(irr).factors == ((irr, 1),)
    with pytest.raises(ValidationError):
        factorize(Poly.zero(F3))


def test_factorize_round_trip_exhaustive_and_random():
    # every polynomial with q^deg <= a small bound, plus random larger ones
    for field in (F2, F3):
        for n in range(1, 6):
            if field.q**n > 300:
                break
            for idx in range(field.q**n):
                f = monic_from_index(field, n, idx)
                assert factorize(f).value() == f
    rng = random.Random(11)
    for field in (F5, make_field(2, 2), make_field(3, 2)):
        for _ in range(60):
            f = random_poly(field, rng, max_deg=8)
            if f.is_zero:
                continue
            assert factorize(f).value() == f


def test_factorize_deterministic():
    f = P(F5, "T^6+3*T^4+T+2")
    assert factorize(f) == factorize(f)


def test_von_mangoldt():
    assert von_mangoldt(P(F2, "T^2+T+1")) == 2
    assert von_mangoldt(P(F2, "T^3+T^2+T+1")) == 1
    assert von_mangoldt(P(F3, "T^2+2")) == 0
    # scalar invariance
    f = P(F3, "T^2+1")
    assert von_mangoldt(f.scale(2)) == von_mangoldt(f) == 2
    with pytest.raises(ValidationError):
        von_mangoldt(Poly.zero(F3))


def test_count_irreducibles():
    assert count_irreducibles(F2, 3) == 2
    assert count_irreducibles(F2, 4) == 3
    assert count_irreducibles(F5, 1) == 5
    with pytest.raises(ValidationError):
        count_irreducibles(F5, 0)


@pytest.mark.parametrize("q_args,n", [((2, 1), 6), ((3, 1), 4), ((5, 1), 3),
                                      ((2, 2), 3)])
def test_count_irreducibles_vs_enumeration(q_args, n):
    field = make_field(*q_args)
    for d in range(1, n + 1):
        brute = sum(1 for f in enumerate_monic(field, d) if is_irreducible(f))
        assert brute == count_irreducibles(field, d)


def test_explicit_formula_small():
    for field in (F2, F3, make_field(2, 2)):
        for n in range(1, 5):
            if field.q**n > 700:
                continue
            brute = sum(von_mangoldt(f) for f in enumerate_monic(field, n))
            assert brute == field.q**n
            assert lambda_sum_formula(field, n) == field.q**n


def test_lambda_squared_lemma():
    for field, n in ((F3, 4), (F5, 3), (F2, 6)):
        brute = sum(von_mangoldt(f) ** 2 for f in enumerate_monic(field, n))
        assert brute == lambda_sq_sum_formula(field, n)
        q = field.q
        assert abs(brute - n * q**n) <= 2 * n * n * q ** (n / 2)


def test_enumerate_monic():
    assert [poly_to_text(f) for f in enumerate_monic(F2, 1)] == ["T", "T+1"]
    assert [poly_to_text(f) for f in enumerate_monic(F3, 0)] == ["1"]
    assert sum(1 for _ in enumerate_monic(F5, 3)) == 125
    # slices partition the enumeration
    full = list(enumerate_monic(F3, 3))
    sliced = list(enumerate_monic(F3, 3, 0, 10)) + list(enumerate_monic(F3, 3, 10, 27))
    assert full == sliced
    with pytest.raises(CapExceededError):
        list(enumerate_monic(F5, 9, config=RunConfig(enumeration_cap=1000)))


def test_monic_index_round_trip():
    for n in range(4):
        for i in range(F3.q**n):
            f = monic_from_index(F3, n, i)
            assert f.is_monic and f.degree == n
            assert monic_index(f) == i


def test_reverse_star():
    assert P(F2, "T^3+T+1").star() == P(F2, "T^3+T^2+1")
    assert P(F3, "2*T^2+T").star() == P(F3, "T+2")
    assert Poly.zero(F3).star().is_zero
    rng = random.Random(2)
    # involution away from T | f, multiplicativity, Lambda preservation
    for _ in range(1000):
        f = random_poly(F3, rng)
        g = random_poly(F3, rng)
        assert (f * g).star() == f.star() * g.star()
        if not f.is_zero and f.coeffs[0] != 0:
            assert f.star().star() == f
    for f in enumerate_monic(F3, 4):
        if f.coeffs[0] != 0:
            assert von_mangoldt(f.star()) == von_mangoldt(f)


def test_interval_members():
    members = set(poly_to_text(f) for f in interval_members(P(F2, "T^2"), 0))
    assert members == {"T^2", "T^2+1"}
    assert sum(1 for _ in interval_members(P(F3, "T^2"), 1)) == 9
    with pytest.raises(ValidationError):
        list(interval_members(P(F3, "T"), 1))
    # monic center gives monic members
    assert all(f.is_monic for f in interval_members(P(F5, "T^3+2"), 1))


def test_intervals_partition_monics():
    # q=3, n=4, h=1: the 27 intervals around T^2*B tile all monic quartics
    n, h = 4, 1
    seen = set()
    for B in enumerate_monic(F3, n - h - 1):
        A = B.shift(h + 1)
        for f in interval_members(A, h):
            key = f.coeffs
            assert key not in seen
            seen.add(key)
    assert len(seen) == F3.q**n


def test_poly_text_round_trip():
    rng = random.Random(9)
    for _ in range(200):
        f = random_poly(F5, rng)
        assert poly_from_text(F5, poly_to_text(f)) == f
    assert poly_from_text(F3, "[1,2,0,1]") == P(F3, "T^3+2*T+1")
    assert poly_from_text(F3, "T^2-1") == P(F3, "T^2+2")


def test_phi_and_divisors():
    Q = P(F3, "T^2")
    assert phi_of(Q) == 6
    assert phi_of(P(F3, "T^2+2")) == 4  # (T+1)(T+2): 2 * 2
    assert phi_of(P(F5, "T")) == 4
    divs = monic_divisors(P(F2, "T^3+T^2"))  # T^2 (T+1)
    assert len(divs) == 6
    assert mobius_poly(P(F2, "T^2+T")) == 1
    assert mobius_poly(P(F2, "T^2")) == 0
    assert mobius_poly(P(F2, "T")) == -1


def test_is_squarefree():
    assert is_squarefree(P(F3, "T^2+2"))
    assert not is_squarefree(P(F3, "T^2"))
    assert not is_squarefree(P(F3, "T^3"))
    assert not is_squarefree(P(F2, "T^2"))  # derivative vanishes
