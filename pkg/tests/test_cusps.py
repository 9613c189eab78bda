from fractions import Fraction

import pytest

from oggcheck.arith import divisors, is_squarefree, prime_factors, primes_upto, valuation
from oggcheck.cusps import (cusp_set, cuspidal_group, eta_divisor, full_cuspidal_invariants,
                            hd_divisors, lambda_and_cyclicity, ligozat_order, residue_consistency,
                            residue_matrix, transported_hecke_on_cusps, unit_divisor_lattice)
from oggcheck.eisenstein import eis_divisors
from oggcheck.hecke import cuspidal_ideal_index
from oggcheck.linalg import Lattice, mat_mul
from oggcheck.qexp import EtaExponent, fd_series, hd_exponent
from frozen import PRIME_LEVEL_CUSPIDAL_ORDER

SQUAREFREE = [N for N in range(2, 61) if is_squarefree(N)]


def admissible(N, pmax=100):
    return [p for p in primes_upto(pmax) if (6 * N) % p]


def test_cusp_set():
    C = cusp_set(15)
    assert C.cusps == (1, 3, 5, 15)
    assert C.widths == (15, 5, 3, 1)
    assert len(cusp_set(11)) == 2 and cusp_set(11).infinity == 1
    with pytest.raises(ValueError):
        cusp_set(12)


def test_ligozat_examples():
    assert eta_divisor(15, hd_exponent(15, 3)) == [-75, 75, -15, 15]
    assert eta_divisor(11, hd_exponent(11, 11)) == [-55, 55]
    zero = EtaExponent(15, {})
    assert eta_divisor(15, zero) == [0, 0, 0, 0]
    assert ligozat_order(11, hd_exponent(11, 11), 11) == 55


@pytest.mark.parametrize("N", SQUAREFREE)
def test_hd_divisors_degree_and_infinity(N):
    for d, D in zip(eis_divisors(N), hd_divisors(N)):
        assert sum(D) == 0
        assert D[-1] == Fraction(N * (d - 1), 2) == fd_series(N, d, 0)[0]
    assert residue_consistency(N)


def test_unit_divisor_lattice_level_11():
    first, second = unit_divisor_lattice(11)
    assert first.basis == ((55, -55),)
    assert second.basis == ((5, -5),)
    assert first.index_in(second) == 11


@pytest.mark.parametrize("N", SQUAREFREE)
def test_unit_lattice_index_support(N):
    first, second = unit_divisor_lattice(N)
    assert first.issubset(second)
    idx = first.index_in(second)
    allowed = {2, 3} | set(prime_factors(N))
    assert all(valuation(idx, p) == 0 for p in primes_upto(100) if p not in allowed)


def test_cuspidal_group_examples():
    C = cuspidal_group(11, 5)
    assert C.invariants.invariant_factors == (5,)
    assert C.full.invariant_factors == (55,)
    assert C.ord_p == 1
    assert cuspidal_group(11, 7).invariants.invariant_factors == ()
    assert cuspidal_group(15, 7).invariants.invariant_factors == ()
    assert full_cuspidal_invariants(11).invariant_factors == (55,)
    with pytest.raises(ValueError):
        cuspidal_group(11, 3)
    with pytest.raises(ValueError):
        cuspidal_group(11, 11)


@pytest.mark.parametrize("N", sorted(PRIME_LEVEL_CUSPIDAL_ORDER))
def test_prime_level_cuspidal_orders(N):
    n = PRIME_LEVEL_CUSPIDAL_ORDER[N]
    for p in admissible(N):
        assert cuspidal_group(N, p).ord_p == valuation(n, p)


@pytest.mark.parametrize("N", SQUAREFREE)
def test_cuspidal_generators_have_stated_orders(N):
    units = Lattice.from_generators([list(D) for D in hd_divisors(N)], len(divisors(N)))
    for p in admissible(N, 30):
        C = cuspidal_group(N, p)
        for g, o in zip(C.generators, C.orders):
            assert sum(g) == 0
            assert units.contains([o * x for x in g])
            assert not units.contains([(o // p) * x for x in g])


def test_residue_matrix():
    R = residue_matrix(15)
    assert R[0] == [-75, 75, -15, 15]


def test_transported_hecke_level_11():
    assert transported_hecke_on_cusps(11, 3) == [[4]]
    assert transported_hecke_on_cusps(11, 1) == [[1]]


@pytest.mark.parametrize("N", [6, 15, 30, 42])
def test_transported_hecke_relations(N):
    r = 2 ** len(prime_factors(N)) - 1
    I = [[int(i == j) for j in range(r)] for i in range(r)]
    mats = {n: transported_hecke_on_cusps(N, n) for n in (2, 3, 5, 7, 11)}
    prod = I
    for ell in prime_factors(N):
        U = transported_hecke_on_cusps(N, ell)
        A = [[u - i for u, i in zip(a, b)] for a, b in zip(U, I)]
        B = [[u - ell * i for u, i in zip(a, b)] for a, b in zip(U, I)]
        assert all(x == 0 for row in mat_mul(A, B) for x in row)
        prod = mat_mul(prod, A)
    assert all(x == 0 for row in prod for x in row)
    for a in mats.values():
        for b in mats.values():
            assert mat_mul(a, b) == mat_mul(b, a)


def test_lambda_level_11():
    lam = lambda_and_cyclicity(11, 5)
    assert lam.denominators == (5,)
    assert lam.cyclic and lam.orbit_order == 5
    triv = lambda_and_cyclicity(11, 7)
    assert triv.cyclic and triv.values == ()


@pytest.mark.parametrize("N", SQUAREFREE)
def test_cuspidal_order_equals_hecke_index_and_cyclic(N):
    for p in admissible(N):
        C = cuspidal_group(N, p)
        assert C.ord_p == cuspidal_ideal_index(N, p)
        lam = lambda_and_cyclicity(N, p)
        assert lam.cyclic and lam.orbit_order == C.order
