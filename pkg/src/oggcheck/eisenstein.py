"""Eisenstein series of weight 2 and square-free level N.

Two bases of E_2(N) are used: the eigenforms E_d, pinned down by their
Hecke eigenvalues, and the forms f_d = dlog((eta(dz)/eta(z))^{12N}).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import divisors, factor, is_squarefree, mobius, prime_factors, sigma1
from .linalg import Lattice, rref, saturate, solve_left
from .qexp import Series, fd_series, sturm_bound

__all__ = [
    "EisLattice",
    "EisensteinBasis",
    "ed_coefficient",
    "ed_series",
    "eis_divisors",
    "eis_integral_lattice",
    "eisenstein_basis",
    "fd_basis_index",
    "l_functional",
]


def _check_level(N):
    if not is_squarefree(N) or N < 2:
        raise ValueError(f"level must be square-free and > 1, got {N}")


def eis_divisors(N):
    """Divisors d > 1 of N, which index both Eisenstein bases."""
    return tuple(d for d in divisors(N) if d > 1)


def ed_coefficient(N, d, n):
    """a_n(E_d) for n >= 1, from multiplicativity and the prime-power rules."""
    if n < 1:
        raise ValueError("only n >= 1; a_0 comes from ed_series")
    out = 1
    for ell, k in factor(n).items() if n > 1 else ():
        if d % ell == 0:
            continue
        if N % ell == 0:
            out *= ell ** k
        else:
            out *= sigma1(ell ** k)
    return out


@lru_cache(maxsize=None)
def _fd_cached(N, d, prec):
    return fd_series(N, d, prec)


def _fd(N, d, prec):
    B = sturm_bound(N)
    return _fd_cached(N, d, max(prec, B)).truncate(prec)


@lru_cache(maxsize=None)
def ed_in_f_basis(N, d):
    """Rational coordinates of E_d in the basis (f_t), t in eis_divisors(N).

    Solved from the coefficients a_1 .. a_B; the solution is unique because
    the f_t are independent there, and a_0 is read off the combination.
    """
    _check_level(N)
    ts = eis_divisors(N)
    B = sturm_bound(N)
    hi = B
    while True:
        rows = [list(_fd(N, t, hi)[1:]) for t in ts]
        target = [ed_coefficient(N, d, n) for n in range(1, hi + 1)]
        x = solve_left(rows, target)
        if x is None:
            raise ArithmeticError(f"E_{d} is not in the span of the f_t at level {N}")
        # uniqueness: the f_t must be independent on these coefficients
        if len(rref(rows, hi)[1]) == len(ts):
            return tuple(x)
        hi += B


def ed_series(N, d, prec):
    """E_d to precision ``prec``; a_0 from the linear solve against the f_t."""
    if N % d or d == 1:
        raise ValueError(f"need a divisor d > 1 of {N}, got {d}")
    x = ed_in_f_basis(N, d)
    a0 = sum(c * _fd(N, t, 0)[0] for c, t in zip(x, eis_divisors(N)))
    return Series(tuple([a0] + [ed_coefficient(N, d, n) for n in range(1, prec + 1)]))


@dataclass(frozen=True)
class EisensteinBasis:
    level: int
    flavor: str  # "f-basis" or "E-basis"
    forms: tuple  # of (d, Series)

    def __post_init__(self):
        r = len(prime_factors(self.level))
        if len(self.forms) != 2 ** r - 1:
            raise ValueError("wrong number of Eisenstein basis elements")

    def matrix(self, prec):
        return [list(f[: prec + 1]) for _, f in self.forms]


def eisenstein_basis(N, prec, flavor="f-basis"):
    _check_level(N)
    if flavor == "f-basis":
        forms = tuple((d, _fd(N, d, prec)) for d in eis_divisors(N))
    elif flavor == "E-basis":
        forms = tuple((d, ed_series(N, d, prec)) for d in eis_divisors(N))
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return EisensteinBasis(N, flavor, forms)


@dataclass(frozen=True)
class EisLattice:
    """E_2(N, Z) as a saturated lattice of coefficient vectors (a_0 .. a_B)."""

    level: int
    prec: int
    lattice: Lattice


@lru_cache(maxsize=None)
def _f_lattice(N):
    B = sturm_bound(N)
    rows = []
    for d in eis_divisors(N):
        v = _fd(N, d, B).coeffs
        if any(c.denominator != 1 for c in v):
            raise ArithmeticError(f"f_{d} is not integral at level {N}")
        rows.append([int(c) for c in v])
    return Lattice.from_generators(rows, B + 1)


@lru_cache(maxsize=None)
def eis_integral_lattice(N):
    _check_level(N)
    L = saturate(_f_lattice(N))
    r = len(prime_factors(N))
    if L.rank != 2 ** r - 1:
        raise ArithmeticError("f_d are not independent to the Sturm bound")
    return EisLattice(N, sturm_bound(N), L)


def l_functional(d, f):
    """sum over t | d of mu(d/t) sigma_1(d/t) a_t(f)."""
    if f.prec < d:
        raise ValueError(f"need precision >= {d}, series has {f.prec}")
    return sum(mobius(d // t) * sigma1(d // t) * f[t] for t in divisors(d))


def fd_basis_index(N):
    """Factorization {prime: exponent} of [E_2(N, Z) : span of the f_d]."""
    idx = _f_lattice(N).index_in(eis_integral_lattice(N).lattice)
    return factor(idx) if idx > 1 else {}
