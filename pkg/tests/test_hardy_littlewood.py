import math

import pytest

from ffvar.config import RunConfig
from ffvar.errors import ValidationError
from ffvar.fields import make_field
from ffvar.hardy_littlewood import (jsum_direct, jsum_hl_prediction,
                                    jsum_series, hl_g_prediction, nu_K, psi2,
                                    psi2_trend, singular_series)
from ffvar.polys import Poly, poly_from_text

F2 = make_field(2)
F3 = make_field(3)
F5 = make_field(5)
F7 = make_field(7)


def P(field, text):
    return poly_from_text(field, text)


def test_psi2_spec_value():
    assert psi2(2, Poly.one(F3)) == 6


def test_psi2_validations():
    with pytest.raises(ValidationError):
        psi2(2, Poly.zero(F3))
    with pytest.raises(ValidationError):
        psi2(1, P(F3, "T+1"))  # n <= deg K


def test_psi2_symmetry():
    for field, n, ktext in ((F3, 3, "T+1"), (F5, 2, "2"), (F3, 4, "T^2+1")):
        K = P(field, ktext)
        assert psi2(n, K) == psi2(n, -K)


def test_psi2_bulk_matches_pure():
    cfg_pure = RunConfig(table_cap=1)
    f3_pure = make_field(3, config=cfg_pure)
    K = Poly.one(F3)
    K_pure = Poly.one(f3_pure)
    assert psi2(3, K) == psi2(3, K_pure, cfg_pure)


def test_nu_K_cases():
    T = Poly.x(F3)
    assert nu_K(T, T * T) == 1
    assert nu_K(T, Poly.one(F3)) == 2
    assert nu_K(P(F2, "T+1"), P(F2, "T+1")) == 1
    with pytest.raises(ValidationError):
        nu_K(P(F3, "T^2"), Poly.one(F3))  # reducible
    with pytest.raises(ValidationError):
        nu_K(T, Poly.zero(F3))


def test_singular_series_divisor_factor():
    # a prime dividing K contributes (1 - 1/|P|)^{-1}: compare K with and
    # without the divisor at matched truncation
    D = 5
    with_div = singular_series(Poly.x(F3), D)  # K = T, divisible by T
    no_div = singular_series(Poly.one(F3), D)  # K = 1, coprime to T
    q = 3
    # ratio of the degree-1 logs: swap one generic factor for a divisor one
    generic = math.log(q * (q - 2) / (q - 1) ** 2)
    divisor = math.log(q / (q - 1))
    assert with_div.degree_logs[1] == pytest.approx(
        no_div.degree_logs[1] - generic + divisor)


def test_singular_series_refinement_within_tail():
    base = singular_series(Poly.one(F3), 6)
    finer = singular_series(Poly.one(F3), 8)
    assert base.brackets(finer)
    assert base.tail_bound > finer.tail_bound > 0


def test_singular_series_tends_to_one():
    values = [singular_series(Poly.one(make_field(q)), 6).value
              for q in (3, 5, 7, 11)]
    gaps = [abs(v - 1.0) for v in values]
    assert gaps == sorted(gaps, reverse=True)
    # the gap decays like 1/q: q * gap stays bounded
    for q, gap in zip((3, 5, 7, 11), gaps):
        assert q * gap < 2.0


def test_singular_series_vanishes_at_q2():
    # over F_2 any K coprime to some linear prime kills the product
    assert singular_series(Poly.one(F2), 4).value == 0.0


def test_jsum_direct_j0_is_singular_series():
    Q = P(F5, "T")
    assert jsum_direct(Q, 0, 6) == pytest.approx(
        singular_series(Q, 6).value, rel=1e-12)


@pytest.mark.parametrize("j", [0, 1, 2, 3])
def test_jsum_routes_agree(j):
    Q = P(F5, "T")
    a = jsum_direct(Q, j, 6)
    b = jsum_series(Q, j, 6)
    assert b == pytest.approx(a, rel=1e-6)


def test_jsum_routes_agree_other_modulus():
    Q = P(F7, "T+1")
    for j in (0, 1, 2):
        assert jsum_series(Q, j, 6) == pytest.approx(
            jsum_direct(Q, j, 6), rel=1e-6)


def test_jsum_prediction_value():
    assert jsum_hl_prediction(P(F5, "T"), 1) == 6  # 5*5/4 - 1/4


def test_jsum_gap_shrinks_with_q():
    gaps = []
    for q in (5, 7, 11, 13):
        field = make_field(q)
        Q = Poly.x(field)
        direct = jsum_direct(Q, 1, 6)
        pred = float(jsum_hl_prediction(Q, 1))
        gaps.append(abs(direct - pred) / q)
    assert gaps == sorted(gaps, reverse=True)


def test_jsum_series_rejects_q2():
    with pytest.raises(ValidationError):
        jsum_series(Poly.x(F2), 1, 4)


def test_hl_g_prediction_record():
    rec = hl_g_prediction(3, P(F7, "T^2"), D=6)
    assert rec["exact_G"] > 0
    assert set(rec["jsums"]) == {0}  # strict range: deg J < n - deg Q
    assert rec["hl_over_exact"] == pytest.approx(1.0, abs=0.35)
    with pytest.raises(ValidationError):
        hl_g_prediction(2, P(F7, "T^2"))


def test_hl_prediction_ratio_approaches_one():
    ratios = []
    for q in (5, 7, 11, 13):
        field = make_field(q)
        rec = hl_g_prediction(3, P(field, "T^2"), D=6)
        ratios.append(abs(rec["final_over_exact"] - 1.0))
    assert ratios[-1] < ratios[0]
    # |Q|/Phi -> 1
    assert abs(hl_g_prediction(3, P(make_field(13), "T^2"), D=4)
               ["norm_q_over_phi"] - 1.0) < 0.1


def test_psi2_trend_rows():
    rows = psi2_trend(3, [1], [3, 5, 7, 11, 13])
    assert all(r["normalized_gap"] <= 4.0 for r in rows)
