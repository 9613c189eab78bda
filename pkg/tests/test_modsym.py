import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oggcheck.arith import is_squarefree, primes_upto
from oggcheck.linalg import Lattice, charpoly, mat_mul
from oggcheck.modsym import (build_manin_space, cuspidal_charpoly_sqrt, cuspidal_hecke_algebra,
                             genus, hecke_matrix, hecke_matrix_coset, hecke_matrix_merel,
                             heilbronn_merel, integral_cuspform_basis, jacobian_point_count,
                             poly_sqrt)
from frozen import A_N_11A, A_N_14A, A_N_15A, A_N_37A, POINTS_11A

SQUAREFREE = [N for N in range(2, 61) if is_squarefree(N)]

# genera of X_0(N), standard table
KNOWN_GENUS = {2: 0, 3: 0, 5: 0, 6: 0, 7: 0, 10: 0, 11: 1, 13: 0, 14: 1, 15: 1, 17: 1,
               19: 1, 21: 1, 22: 2, 23: 2, 26: 2, 29: 2, 30: 3, 31: 2, 33: 3, 34: 3,
               35: 3, 37: 2, 38: 4, 39: 3, 41: 3, 42: 5, 43: 3, 46: 5, 47: 4, 51: 5,
               53: 4, 55: 5, 57: 5, 58: 6, 59: 5}


def test_genus_table():
    assert {N: genus(N) for N in SQUAREFREE} == KNOWN_GENUS


@pytest.mark.parametrize("N", SQUAREFREE)
def test_cuspidal_dimension_is_twice_genus(N):
    assert build_manin_space(N).cuspidal_dimension == 2 * KNOWN_GENUS[N]


def test_rejects_bad_levels():
    with pytest.raises(ValueError):
        build_manin_space(12)
    with pytest.raises(ValueError):
        build_manin_space(1)


@given(st.integers(1, 40))
@settings(max_examples=40, deadline=None)
def test_heilbronn_set_conditions(n):
    X = heilbronn_merel(n)
    assert len(set(X)) == len(X)
    for a, b, c, d in X:
        assert a * d - b * c == n and a > b >= 0 and d > c >= 0


def test_level_11_hecke():
    ms = build_manin_space(11)
    assert charpoly(hecke_matrix(ms, 2)) == [4, 4, 1]  # (x + 2)^2
    assert charpoly(hecke_matrix(ms, 11)) == [1, -2, 1]  # (x - 1)^2
    assert cuspidal_charpoly_sqrt(ms, 3) == [1, 1]


@pytest.mark.parametrize("N", SQUAREFREE)
def test_merel_agrees_with_cosets(N):
    ms = build_manin_space(N)
    for ell in primes_upto(13):
        assert hecke_matrix_merel(ms, ell) == hecke_matrix_coset(ms, ell)
    for ell in (x for x in primes_upto(60) if N % x == 0):
        assert hecke_matrix_merel(ms, ell) == hecke_matrix_coset(ms, ell)


@pytest.mark.parametrize("N", [11, 15, 30, 35, 42, 58])
def test_composite_index_recurrences(N):
    ms = build_manin_space(N)
    for n in (4, 6, 8, 9, 10, 12, 15, 18, 25):
        assert hecke_matrix(ms, n) == hecke_matrix_merel(ms, n)


@pytest.mark.parametrize("N", SQUAREFREE)
def test_hecke_matrices_commute_and_charpolys_are_squares(N):
    ms = build_manin_space(N)
    mats = [hecke_matrix(ms, n) for n in range(1, 21)]
    for i, A in enumerate(mats):
        poly = charpoly(A)
        P = poly_sqrt(poly)
        assert len(P) == KNOWN_GENUS[N] + 1
        for B in mats[i + 1:]:
            assert mat_mul(A, B) == mat_mul(B, A)


def test_poly_sqrt():
    assert poly_sqrt([4, 4, 1]) == [2, 1]
    with pytest.raises(ArithmeticError):
        poly_sqrt([1, 0, 1])
    with pytest.raises(ArithmeticError):
        poly_sqrt([0, 1])


def test_point_counts_level_11():
    for q, count in POINTS_11A.items():
        assert jacobian_point_count(11, q) == count
    with pytest.raises(ValueError):
        jacobian_point_count(11, 2)
    with pytest.raises(ValueError):
        jacobian_point_count(11, 11)
    with pytest.raises(ValueError):
        jacobian_point_count(11, 9)


def test_genus_zero_point_count():
    assert jacobian_point_count(10, 3) == 1


def test_level_11_cusp_form_matches_point_count_oracle():
    (f,) = integral_cuspform_basis(11, 30)
    assert list(f.coeffs) == A_N_11A


@pytest.mark.parametrize("N,an", [(14, A_N_14A), (15, A_N_15A), (37, A_N_37A)])
def test_newform_lies_in_integral_basis(N, an):
    basis = integral_cuspform_basis(N, 30)
    L = Lattice.from_generators([[int(c) for c in f.coeffs] for f in basis], 31)
    assert L.contains(an)


@pytest.mark.parametrize("N", [11, 23, 30, 42])
def test_cusp_basis_is_echelon_and_integral(N):
    basis = integral_cuspform_basis(N, 20)
    assert len(basis) == KNOWN_GENUS[N]
    piv = [next(i for i, c in enumerate(f.coeffs) if c) for f in basis]
    assert piv == sorted(piv) and piv[0] == 1
    assert all(f.is_integral() for f in basis)


def test_cuspidal_algebra():
    alg = cuspidal_hecke_algebra(11)
    assert alg.rank == 1
    assert alg.closure_certificate() and alg.is_commutative()
    assert cuspidal_hecke_algebra(42).rank == 5
