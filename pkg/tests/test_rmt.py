import numpy as np
import pytest

from ffvar.errors import ValidationError
from ffvar.rmt import (UnitaryMoment, haar_sample, pu_invariance_check,
                       trace_moment_mc)


def test_haar_sample_unitary():
    rng = np.random.default_rng(3)
    for _ in range(100):
        U = haar_sample(8, rng)
        assert np.max(np.abs(U.conj().T @ U - np.eye(8))) < 1e-10


def test_haar_n1_is_phase():
    rng = np.random.default_rng(1)
    U = haar_sample(1, rng)
    assert abs(abs(U[0, 0]) - 1) < 1e-12


def test_haar_deterministic_given_seed():
    a = haar_sample(5, np.random.default_rng(42))
    b = haar_sample(5, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_moment_estimates_hit_min():
    for N, n in ((4, 2), (1, 5), (3, 7)):
        m = trace_moment_mc(N, n, 20000, seed=7)
        assert m.exact == min(n, N)
        assert m.within <= 4.0
        assert m.std_error < 0.2


def test_moment_reproducible_and_seed_sensitive():
    a = trace_moment_mc(3, 2, 2000, seed=11)
    b = trace_moment_mc(3, 2, 2000, seed=11)
    c = trace_moment_mc(3, 2, 2000, seed=12)
    assert a == b
    assert a.estimate != c.estimate


def test_std_error_shrinks():
    small = trace_moment_mc(4, 3, 2000, seed=5)
    big = trace_moment_mc(4, 3, 32000, seed=5)
    assert big.std_error < small.std_error
    # CLT rate: quadrupling samples roughly halves the error
    assert big.std_error < small.std_error / 2


def test_validations():
    with pytest.raises(ValidationError):
        trace_moment_mc(0, 1, 1000, 1)
    with pytest.raises(ValidationError):
        trace_moment_mc(2, 2, 10, 1)


def test_pu_invariance():
    rec = pu_invariance_check(5, 3, 2000, seed=9)
    assert rec["passed"] and rec["failures"] == 0
    rec = pu_invariance_check(2, 4, 10000, seed=9)
    assert rec["failures"] == 0


def test_unitary_moment_within_zero_error():
    m = UnitaryMoment(N=2, n=2, samples=100, seed=0, estimate=2.0,
                      std_error=0.0)
    assert m.within == 0.0
