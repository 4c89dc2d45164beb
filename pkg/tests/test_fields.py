import random

import pytest

from ffvar.errors import ValidationError
from ffvar.fields import factorize_int, field_from_q, is_prime, make_field


def test_make_field_basics():
    f3 = make_field(3)
    assert (f3.p, f3.k, f3.q) == (3, 1, 3)
    f4 = make_field(2, 2)
    assert f4.q == 4
    # the unique irreducible quadratic over F_2
    assert f4.modulus == (1, 1, 1)


def test_non_prime_p_rejected():
    with pytest.raises(ValidationError):
        make_field(4, 1)
    with pytest.raises(ValidationError):
        make_field(2, 0)


def test_bad_modulus_rejected():
    with pytest.raises(ValidationError):
        make_field(2, 2, modulus=(1, 0, 1))  # (T+1)^2
    with pytest.raises(ValidationError):
        make_field(3, 2, modulus=(1, 1))  # wrong degree


def test_inverse():
    f5 = make_field(5)
    assert f5.inv(2) == 3
    f4 = make_field(2, 2)
    x = f4.from_coeffs((0, 1))
    x1 = f4.from_coeffs((1, 1))
    assert f4.inv(x) == x1
    with pytest.raises(ValidationError):
        make_field(3).inv(0)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)])
def test_ring_axioms_random(p, k):
    F = make_field(p, k)
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 6)])
def test_frobenius_fixed_points(p, k):
    F = make_field(p, k)
    assert F.q <= 64
    for a in range(F.q):
        assert F.pow(a, F.q) == a


def test_inverse_exhaustive_small():
    for q_args in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]:
        F = make_field(*q_args)
        for a in range(1, F.q):
            assert F.mul(a, F.inv(a)) == 1


def test_dlog_examples():
    f5 = make_field(5)
    assert f5.dlog(4, g=2) == 2
    assert f5.dlog(1, g=2) == 0
    f7 = make_field(7)
    assert f7.dlog(6, g=3) == 3
    with pytest.raises(ValidationError):
        f5.dlog(0, g=2)
    with pytest.raises(ValidationError):
        f7.dlog(6, g=2)  # 2 has order 3 mod 7


@pytest.mark.parametrize("p,k", [(5, 1), (3, 2), (2, 4), (101, 1)])
def test_dlog_round_trip(p, k):
    F = make_field(p, k)
    g = F.generator()
    for e in range(F.q - 1):
        assert F.dlog(F.pow(g, e)) == e


def test_deterministic_modulus_choice():
    a = make_field(3, 3)
    b = make_field(3, 3)
    assert a.modulus == b.modulus
    assert a == b
    # arithmetic tables coincide elementwise
    for x in range(a.q):
        for y in range(a.q):
            assert a.mul(x, y) == b.mul(x, y)


def test_tables_match_generic_arithmetic():
    F = make_field(3, 2)
    assert F.has_tables
    for a in range(F.q):
        for b in range(F.q):
            assert int(F.mul_table[a, b]) == F._mul_ext(a, b)
            assert int(F.add_table[a, b]) == F._add_ext(a, b)


def test_field_from_q():
    assert field_from_q(9).k == 2
    assert field_from_q(7).p == 7
    with pytest.raises(ValidationError):
        field_from_q(12)


def test_int_helpers():
    assert is_prime(2) and is_prime(97) and not is_prime(1) and not is_prime(91)
    assert factorize_int(360) == {2: 3, 3: 2, 5: 1}
