from fractions import Fraction

import pytest

from ffvar.config import RunConfig
from ffvar.errors import ValidationError
from ffvar.fields import make_field
from ffvar.lfunctions import monic_prime_powers
from ffvar.polys import Poly, enumerate_monic, poly_from_text, von_mangoldt
from ffvar.short_intervals import (nu, psi_tilde, si_mean, si_sweep,
                                   si_variance)

F2 = make_field(2)
F3 = make_field(3)
F5 = make_field(5)


def P(field, text):
    return poly_from_text(field, text)


def test_nu_example():
    assert nu(P(F2, "T^3+T"), 1) == 3
    with pytest.raises(ValidationError):
        nu(P(F2, "T^3"), 3)


def test_nu_upper_bound():
    n, h = 4, 3  # whole of M_4 in one interval
    with pytest.raises(ValidationError):
        si_variance(F2, n, h)  # h > n-2 rejected
    A = P(F3, "T^4")
    assert nu(A, 2) <= 4 * 3**3


def test_psi_tilde_examples():
    # A = 1, Q = T, n = 2 over F_3: all degree-2 polys with f(0) = 1
    total = 0
    for m, w in monic_prime_powers(F3, 2):
        for c in (1, 2):
            if m.scale(c).coeffs[0] == 1:
                total += w
    assert psi_tilde(2, P(F3, "T"), Poly.one(F3)) == total
    with pytest.raises(ValidationError):
        psi_tilde(2, P(F3, "T"), P(F3, "T"))


def test_psi_tilde_large_modulus_pins_class():
    # deg Q > n and A monic of degree n: the congruence pins f = A exactly
    Q = P(F3, "T^4+T+1")
    for A in enumerate_monic(F3, 2):
        if A.gcd(Q).degree == 0:
            brute = 0
            for m, w in monic_prime_powers(F3, 2):
                for c in (1, 2):
                    if ((m.scale(c) - A) % Q).is_zero:
                        brute += w
            val = psi_tilde(2, Q, A)
            assert val == brute == von_mangoldt(A)


@pytest.mark.parametrize("q,n,h", [(2, 4, 1), (3, 4, 1), (3, 5, 2)])
def test_fundamental_relation(q, n, h):
    field = make_field(q)
    Q = Poly.x(field) ** (n - h)
    for B in enumerate_monic(field, n - h - 1):
        assert nu(B.shift(h + 1), h) == psi_tilde(n, Q, B.star())


def test_interval_decomposition_counts_prime_powers_once():
    # q=3, n=4, h=1: summing nu over interval centers counts each monic
    # degree-4 prime power coprime to T exactly once
    n, h = 4, 1
    total = sum(nu(B.shift(h + 1), h) for B in enumerate_monic(F3, n - h - 1))
    expected = sum(w for f, w in monic_prime_powers(F3, n)
                   if f.coeffs[0] != 0)
    assert total == expected == 3**n - 1


@pytest.mark.parametrize("q,n,h,expect", [
    (3, 4, 1, Fraction(80, 9)),
    (2, 3, 1, Fraction(7, 2)),
    (5, 4, 1, Fraction(624, 25)),
])
def test_si_mean(q, n, h, expect):
    field = make_field(q)
    exact, formula = si_mean(field, n, h)
    assert exact == formula == expect


def test_si_mean_pure_path_agrees():
    # the pure path (no tables) must agree with the vectorized one
    cfg_notables = RunConfig(table_cap=1)
    field_pure = make_field(3, config=cfg_notables)
    assert not field_pure.has_tables
    exact_pure, _ = si_mean(field_pure, 4, 1, cfg_notables)
    exact_bulk, _ = si_mean(F3, 4, 1)
    assert exact_pure == exact_bulk


def test_si_variance_hand_value_q2():
    rep = si_variance(F2, 4, 1, method="both")
    assert rep.mean_exact == Fraction(15, 4)
    assert rep.variance_exact == Fraction(19, 16)
    assert rep.variance_by_characters == Fraction(19, 16)
    assert rep.prediction == 1
    assert not rep.theorem_regime and rep.warning is not None


@pytest.mark.parametrize("q,n,h", [(3, 4, 1), (3, 5, 1), (5, 4, 1),
                                   (2, 5, 1), (3, 5, 2)])
def test_si_variance_methods_agree(q, n, h):
    rep = si_variance(make_field(q), n, h, method="both")
    assert rep.variance_exact == rep.variance_by_characters
    assert rep.mean_exact == rep.mean_formula


def test_si_variance_trivial_h_regime():
    # h = n-2: modulus T^2, even nontrivial characters have N = 0, each
    # Psi = -1, so the variance is (count)/q^2
    q, n = 5, 4
    rep = si_variance(make_field(q), n, n - 2, method="both")
    count_even_nontrivial = q - 1
    assert rep.variance == Fraction(count_even_nontrivial, q**2)


def test_si_sweep_rows():
    rows = si_sweep(5, 1, [2, 3], method="characters")
    assert [r["q"] for r in rows] == [2, 3]
    assert all(r["prediction"] == 2 for r in rows)
    assert all(r["theorem_regime"] for r in rows)
    rows = si_sweep(4, 1, [3])
    assert rows[0]["warning"] is not None  # h < n-3 fails
    rows = si_sweep(5, 1, [6])  # not a prime power
    assert "error" in rows[0]
