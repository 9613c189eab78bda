"""Cusps of X_0(N) for square-free N, divisors of eta quotients, and the
cuspidal subgroup.

A cusp is labelled by a divisor c of N (c = N is infinity, c = 1 is 0) and
has width N/c.  Cuspidal divisors are integer vectors indexed by
``divisors(N)`` in increasing order.  Degree-zero divisors are written in the
basis [c] - [oo], c != N.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import divisors, is_squarefree, prime_factors, valuation
from .eisenstein import _fd, eis_divisors
from .hecke import _hecke_on_f_basis, hecke_algebra, m_integral_basis
from .linalg import (AbelianInvariants, Lattice, clear_denominators, hnf, inverse, kernel,
                     mat_mul, smith_form, vec_mat)
from .modsym import cuspform_duality
from .qexp import EtaExponent, hd_exponent, sturm_bound

__all__ = [
    "CuspSet",
    "CuspidalGroup",
    "cusp_set",
    "cuspidal_group",
    "degree_zero_coords",
    "eta_divisor",
    "full_cuspidal_invariants",
    "hd_divisors",
    "lambda_and_cyclicity",
    "ligozat_order",
    "residue_consistency",
    "residue_matrix",
    "transported_hecke_on_cusps",
    "unit_divisor_lattice",
]


@dataclass(frozen=True)
class CuspSet:
    level: int
    cusps: tuple  # divisors of N
    widths: tuple

    def __len__(self):
        return len(self.cusps)

    @property
    def infinity(self):
        return self.cusps.index(self.level)


def _check(N):
    if N < 2 or not is_squarefree(N):
        raise ValueError(f"level must be square-free and > 1, got {N}")


def cusp_set(N):
    _check(N)
    cs = divisors(N)
    return CuspSet(N, cs, tuple(N // c for c in cs))


def ligozat_order(N, r, c):
    """Order of vanishing of the eta quotient r at the cusp c (in the local
    parameter of that cusp)."""
    return Fraction(N, 24) * sum(Fraction(e * gcd(c, d) ** 2, c * d) for d, e in r.r.items())


def eta_divisor(N, r):
    out = [ligozat_order(N, r, c) for c in divisors(N)]
    if any(x.denominator != 1 for x in out):
        raise ArithmeticError(f"eta quotient {r.r} has a non-integral divisor")
    return [int(x) for x in out]


def degree_zero_coords(N, D):
    """Coordinates of a degree-0 divisor in the basis [c] - [oo], c != N."""
    if sum(D):
        raise ValueError("divisor has nonzero degree")
    return [x for c, x in zip(divisors(N), D) if c != N]


def from_degree_zero_coords(N, v):
    out, it = [], iter(v)
    for c in divisors(N):
        out.append(0 if c == N else next(it))
    out[-1] = -sum(out)
    return out


@lru_cache(maxsize=None)
def hd_divisors(N):
    """div(h_d) for d in eis_divisors(N)."""
    return tuple(tuple(eta_divisor(N, hd_exponent(N, d))) for d in eis_divisors(N))


# -- unit lattices ---------------------------------------------------------

def _admissible_exponents(N):
    """Z-basis of exponent vectors r (indexed by divisors of N) meeting the
    modularity conditions: sum r = 0, 24 | sum d r_d, 24 | sum (N/d) r_d and
    prod d^{r_d} a square."""
    ds = divisors(N)
    forms = [([d for d in ds], 24), ([N // d for d in ds], 24)]
    for ell in prime_factors(N):
        forms.append(([1 if d % ell == 0 else 0 for d in ds], 2))
    n, k = len(ds), len(forms)
    rows = [[1] + [f[0][i] for f in forms] for i in range(n)]
    for j, (_, m) in enumerate(forms):
        rows.append([0] + [m if t == j else 0 for t in range(k)])
    K = kernel(rows, k + 1)
    return Lattice.from_generators([kr[:n] for kr in K], n)


@lru_cache(maxsize=None)
def unit_divisor_lattice(N):
    """(span of div(h_d), divisor lattice of all admissible eta quotients)."""
    _check(N)
    first = Lattice.from_generators([list(v) for v in hd_divisors(N)], len(divisors(N)))
    ds = divisors(N)
    divs = []
    for r in _admissible_exponents(N).basis:
        divs.append(eta_divisor(N, EtaExponent(N, dict(zip(ds, r)))))
    second = Lattice.from_generators(divs, len(ds))
    return first, second


# -- the cuspidal group ----------------------------------------------------

@dataclass(frozen=True)
class CuspidalGroup:
    level: int
    prime: int
    full: AbelianInvariants
    invariants: AbelianInvariants  # p-part
    generators: tuple  # cusp divisors lifting generators of the p-part
    orders: tuple

    @property
    def ord_p(self):
        return sum(valuation(f, self.prime) for f in self.invariants)

    @property
    def order(self):
        return self.invariants.order


@lru_cache(maxsize=None)
def _cuspidal_smith(N):
    rel = [degree_zero_coords(N, list(v)) for v in hd_divisors(N)]
    n = len(rel)
    diag, U, V, Vinv = smith_form(rel, n)
    if len(diag) != n:
        raise ArithmeticError("div(h_d) do not span a full-rank lattice")
    return tuple(diag), tuple(tuple(r) for r in Vinv)


def _check_p(N, p):
    if (6 * N) % p == 0:
        raise ValueError(f"p = {p} divides 6N = {6 * N}")


def cuspidal_group(N, p):
    _check(N)
    _check_p(N, p)
    diag, Vinv = _cuspidal_smith(N)
    full = AbelianInvariants(tuple(d for d in diag if d != 1))
    gens, orders = [], []
    for d, row in zip(diag, Vinv):
        k = valuation(d, p)
        if k:
            # (d / p^k) * row has exact order p^k
            gens.append(tuple(from_degree_zero_coords(N, [(d // p ** k) * x for x in row])))
            orders.append(p ** k)
    inv = AbelianInvariants(tuple(orders))
    return CuspidalGroup(N, p, full, inv, tuple(gens), tuple(orders))


def full_cuspidal_invariants(N):
    diag, _ = _cuspidal_smith(N)
    return AbelianInvariants(tuple(d for d in diag if d != 1))


# -- residues and the transported Hecke action ------------------------------

def residue_matrix(N):
    """Rows R(f_d) = div(h_d), d in eis_divisors(N); R vanishes on cusp forms."""
    _check(N)
    return [list(v) for v in hd_divisors(N)]


def residue_consistency(N):
    """Degree zero and the infinity entry equal to a_0 for every R(f_d)."""
    inf = divisors(N).index(N)
    return all(sum(v) == 0 and v[inf] == _fd(N, d, 0)[0]
               for d, v in zip(eis_divisors(N), hd_divisors(N)))


def _f_to_delta(N):
    return [degree_zero_coords(N, list(v)) for v in hd_divisors(N)]


def transported_hecke_on_cusps(N, n):
    """T_n on degree-zero cuspidal divisors (basis [c] - [oo]) with
    T^cusp R = R T_n, R the residue map on the f-basis."""
    Rf = _f_to_delta(N)
    return mat_mul(mat_mul(inverse(Rf), _hecke_on_f_basis(N, n)), Rf)


def _residue_on_M(N):
    """Residue (in [c] - [oo] coordinates) of each joint basis element."""
    J = m_integral_basis(N)
    Rf = _f_to_delta(N)
    out = []
    for row in J.decomp:
        fpart = row[J.genus:]
        out.append(vec_mat(fpart, Rf))
    return out


@dataclass(frozen=True)
class LambdaResult:
    values: tuple  # lambda(x_i) as Fractions in [0, 1)
    denominators: tuple
    cyclic: bool
    orbit_order: int


def _mod_Zp(x, p):
    """Representative a / p^k in [0, 1) of x modulo Z_(p)."""
    x = Fraction(x)
    k = valuation(x.denominator, p)
    pk = p ** k
    u = x.denominator // pk
    a = (x.numerator * pow(u, -1, pk)) % pk if pk > 1 else 0
    return Fraction(a, pk)


@lru_cache(maxsize=None)
def _residue_solver(N):
    R = _residue_on_M(N)
    D0, Ri = clear_denominators(R)
    H, U = hnf(Ri, len(Ri[0]))
    return D0, H, U[: len(H)]


def _preimage(N, D, p):
    """y (coordinates on the joint basis, p-integral) with R(y) = D."""
    D0, H, U = _residue_solver(N)
    target = [D0 * x for x in degree_zero_coords(N, list(D))]
    Hi = inverse(H)  # H is square: image has full rank
    z = vec_mat(target, Hi)
    if any(Fraction(x).denominator % p == 0 for x in z):
        raise ArithmeticError(f"no p-integral form with residue {D} at level {N}")
    return vec_mat(z, U)


def _lambda_of(N, y, p):
    J = m_integral_basis(N)
    gpart, _ = J.split(y)
    _, G, _ = cuspform_duality(N, sturm_bound(N))
    a1 = sum(c * row[1] for c, row in zip(gpart, G))
    return _mod_Zp(a1, p)


def lambda_and_cyclicity(N, p):
    """lambda on generators of C_p, and whether the Hecke orbit of lambda
    spans the whole dual of C_p."""
    C = cuspidal_group(N, p)
    if not C.generators:
        return LambdaResult((), (), True, 1)
    ys = [_preimage(N, D, p) for D in C.generators]
    vals = tuple(_lambda_of(N, y, p) for y in ys)
    alg = hecke_algebra(N, "full")
    ks = [valuation(o, p) for o in C.orders]
    rows = []
    for t in alg.basis:
        row = []
        for y, o in zip(ys, C.orders):
            v = _lambda_of(N, vec_mat(y, t), p)
            if (v * o).denominator != 1:
                raise ArithmeticError("lambda does not factor through C")
            row.append(int(v * o) % o)
        rows.append(row)
    n = len(ks)
    rel = rows + [[p ** k if i == j else 0 for j in range(n)] for i, k in enumerate(ks)]
    diag = smith_form(rel, n)[0]
    coker = 1
    for d in diag:
        coker *= d
    total = 1
    for o in C.orders:
        total *= o
    return LambdaResult(vals, tuple(v.denominator for v in vals), coker == 1, total // coker)
