from fractions import Fraction

import pytest

from oggcheck.arith import divisors, is_squarefree, prime_factors
from oggcheck.eisenstein import (ed_coefficient, ed_in_f_basis, ed_series, eis_divisors,
                                 eis_integral_lattice, eisenstein_basis, fd_basis_index,
                                 l_functional)
from oggcheck.qexp import Series, fd_series, hecke_on_series, sturm_bound

SQUAREFREE = [N for N in range(2, 61) if is_squarefree(N)]


def test_eis_divisors():
    assert eis_divisors(15) == (3, 5, 15)
    assert eis_divisors(11) == (11,)


def test_ed_coefficients_by_prime_type():
    # level 15, d = 3: l | d gives 1, l | N/d gives l^k, l prime to N gives sigma
    assert ed_coefficient(15, 3, 3) == 1
    assert ed_coefficient(15, 3, 9) == 1
    assert ed_coefficient(15, 3, 5) == 5
    assert ed_coefficient(15, 3, 25) == 25
    assert ed_coefficient(15, 3, 2) == 3
    assert ed_coefficient(15, 3, 4) == 7
    assert ed_coefficient(15, 3, 30) == 1 * 5 * 3
    with pytest.raises(ValueError):
        ed_coefficient(15, 3, 0)


def test_ed_constant_terms():
    assert ed_series(11, 11, 3)[0] == Fraction(5, 12)
    assert ed_series(15, 3, 3)[0] == 0


@pytest.mark.parametrize("N", [6, 10, 11, 14, 15, 21, 30])
def test_ed_are_hecke_eigenforms(N):
    B = sturm_bound(N)
    P = 8 * (B + 2)
    f_rows = {t: fd_series(N, t, P) for t in eis_divisors(N)}
    for d in eis_divisors(N):
        x = ed_in_f_basis(N, d)
        E = Series.zero(P)
        for c, t in zip(x, eis_divisors(N)):
            E = E + f_rows[t].scale(c)
        assert E == ed_series(N, d, P)
        for n in range(2, 8):
            TE = hecke_on_series(E, n, N)
            assert TE == E.truncate(TE.prec).scale(ed_coefficient(N, d, n))


@pytest.mark.parametrize("N", SQUAREFREE)
def test_l_functional_is_diagonal(N):
    ds = eis_divisors(N)
    for s in ds:
        f = fd_series(N, s, max(ds))
        for d in ds:
            assert l_functional(d, f) == (-12 * N * d if d == s else 0)


def test_l_functional_examples():
    f3 = fd_series(15, 3, 5)
    assert l_functional(3, f3) == -540
    assert l_functional(5, f3) == 0
    with pytest.raises(ValueError):
        l_functional(15, f3)


def test_eisenstein_basis_flavours():
    b = eisenstein_basis(15, 4)
    assert [d for d, _ in b.forms] == [3, 5, 15]
    e = eisenstein_basis(15, 4, "E-basis")
    assert e.matrix(2)[0][1] == 1
    with pytest.raises(ValueError):
        eisenstein_basis(15, 4, "other")
    with pytest.raises(ValueError):
        eisenstein_basis(12, 4)


def test_integral_lattice_level_11():
    L = eis_integral_lattice(11).lattice
    assert L.basis == ((5, 12, 36),)
    assert fd_basis_index(11) == {11: 1}


@pytest.mark.parametrize("N", SQUAREFREE)
def test_fd_basis_index_support(N):
    allowed = {2, 3} | set(prime_factors(N))
    assert set(fd_basis_index(N)) <= allowed
    assert eis_integral_lattice(N).lattice.rank == 2 ** len(prime_factors(N)) - 1
