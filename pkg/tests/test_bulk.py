import numpy as np
import pytest

from ffvar.bulk import (bulk_mod_indices, irreducible_index_table,
                        lambda_table, monic_multiples_indices,
                        monic_residues_mod, shift_add_indices)
from ffvar.errors import ValidationError
from ffvar.fields import make_field
from ffvar.polys import (Poly, count_irreducibles, enumerate_monic,
                         is_irreducible, monic_from_index, monic_index,
                         poly_from_text, von_mangoldt)

F3 = make_field(3)
F5 = make_field(5)
F4 = make_field(2, 2)
F9 = make_field(3, 2)


@pytest.mark.parametrize("field,n", [(F3, 4), (F5, 3), (F4, 3), (F9, 3)])
def test_lambda_table_matches_von_mangoldt(field, n):
    lam = lambda_table(field, n)
    for i in range(field.q**n):
        f = monic_from_index(field, n, i)
        assert int(lam[i]) == von_mangoldt(f)


@pytest.mark.parametrize("field,n", [(F3, 5), (F5, 4), (F9, 3)])
def test_lambda_table_explicit_formula(field, n):
    lam = lambda_table(field, n)
    assert int(lam.astype(np.int64).sum()) == field.q**n


def test_irreducible_table_matches_predicate():
    for field, n in ((F3, 4), (F4, 3)):
        table = irreducible_index_table(field, n)
        for d in range(1, n + 1):
            got = set(int(i) for i in table[d])
            brute = {monic_index(f) for f in enumerate_monic(field, d)
                     if is_irreducible(f)}
            assert got == brute
            assert len(got) == count_irreducibles(field, d)


def test_monic_multiples():
    Pq = poly_from_text(F3, "T+1")
    idx = monic_multiples_indices(F3, Pq, 2)
    got = sorted(int(i) for i in idx)
    brute = sorted(monic_index(Pq * g) for g in enumerate_monic(F3, 2))
    assert got == brute


@pytest.mark.parametrize("field", [F3, F5, F9])
def test_bulk_mod_matches_scalar(field):
    Q = poly_from_text(field, "T^2+T+1")
    n = 4
    idx = np.arange(field.q**n, dtype=np.int64)
    res = bulk_mod_indices(field, idx, n, Q)
    for i in range(0, field.q**n, 7):
        f = monic_from_index(field, n, i)
        r = f % Q
        expect = sum(c * field.q**j for j, c in enumerate(r.coeffs))
        assert int(res[i]) == expect


def test_monic_residues_low_degree():
    Q = poly_from_text(F3, "T^3")
    res = monic_residues_mod(F3, 2, Q)
    # degree 2 < deg Q: residue is the polynomial itself
    for i, r in enumerate(res):
        f = monic_from_index(F3, 2, i)
        assert int(r) == sum(c * 3**j for j, c in enumerate(f.coeffs))


def test_shift_add():
    K = poly_from_text(F5, "T+2")
    n = 3
    idx = np.arange(F5.q**n, dtype=np.int64)
    out = shift_add_indices(F5, idx, n, K)
    for i in range(0, len(idx), 11):
        f = monic_from_index(F5, n, i)
        assert int(out[i]) == monic_index(f + K)
    with pytest.raises(ValidationError):
        shift_add_indices(F5, idx, 1, poly_from_text(F5, "T^2"))


def test_tables_required():
    big = make_field(521)  # beyond default table cap
    with pytest.raises(ValidationError):
        lambda_table(big, 2)
