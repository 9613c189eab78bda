"""Hecke algebras on M_2(N, Z) and S_2(N, Z), Eisenstein ideals, and the
index and group computations built on them.

Operators are integer matrices acting on row vectors of coordinates in a
fixed Z-basis of the relevant space of forms.  The basis of M_2(N, Z) is the
saturation of (integral cusp forms) + (the f_d) at the Sturm bound, and the
Hecke action is assembled blockwise: on cusp forms through the duality with
the Hecke algebra of cuspidal modular symbols, on Eisenstein series through
the eigenforms E_d.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .algebra import (AlgebraLattice, IdealLattice, enlarge, flatten, generate_algebra,
                      ideal_from_generators)
from .arith import factor, is_prime, prime_factors, primes_upto, support, valuation
from .eisenstein import ed_coefficient, ed_in_f_basis, eis_divisors, _fd
from .linalg import (AbelianInvariants, Lattice, det, identity, inverse, kernel, mat_mul,
                     rref, saturate, snf, vec_mat)
from .modsym import build_manin_space, cuspform_duality, genus, hecke_matrix
from .qexp import Series, sturm_bound

__all__ = [
    "JointBasis",
    "PresentationRing",
    "cuspidal_ideal_index",
    "duality_gram_check",
    "eisenstein_ideal",
    "hecke_algebra",
    "hecke_on_M",
    "ideal_J",
    "m_integral_basis",
    "presentation_check",
    "x_group",
]

DEFAULT_QMAX = 50


def _blockdiag(A, B):
    a, b = len(A), len(B)
    return [list(r) + [0] * b for r in A] + [[0] * a + list(r) for r in B]


def _conj(C, D, Cinv):
    return mat_mul(mat_mul(C, D), Cinv)


def _as_int_matrix(M, what):
    if any(Fraction(x).denominator != 1 for row in M for x in row):
        raise ArithmeticError(f"{what} is not integral")
    return [[int(x) for x in row] for row in M]


def bad_primes(N):
    """The primes allowed in torsion and index supports: {2, 3} and those dividing N."""
    return {2, 3} | set(prime_factors(N))


# -- the joint basis of M_2(N, Z) ------------------------------------------

@dataclass(frozen=True)
class JointBasis:
    """Z-basis of M_2(N, Z) given at the Sturm bound.

    ``rows`` are coefficient vectors a_0..a_prec; ``decomp[j]`` writes row j
    rationally in the concatenation (cusp echelon basis, f-basis).
    """

    level: int
    prec: int
    rows: tuple
    decomp: tuple
    decomp_inv: tuple
    genus: int
    eis_dim: int

    @property
    def rank(self):
        return len(self.rows)

    def series(self):
        return [Series(r) for r in self.rows]

    def cusp_coords(self):
        """Integer coordinates (in this basis) of the cusp echelon basis."""
        return _as_int_matrix(self.decomp_inv[: self.genus], "cusp sublattice")

    def f_coords(self):
        """Integer coordinates (in this basis) of the forms f_d."""
        return _as_int_matrix(self.decomp_inv[self.genus:], "f-basis in M")

    def split(self, y):
        """(cusp-echelon part, f-basis part) of the element with coordinates y."""
        z = vec_mat(y, self.decomp)
        return z[: self.genus], z[self.genus:]


def _cusp_rows(N, prec):
    _, rows, _ = cuspform_duality(N, prec)
    return [list(r) for r in rows]


@lru_cache(maxsize=None)
def m_integral_basis(N):
    B = sturm_bound(N)
    g = genus(N)
    G = _cusp_rows(N, B)
    F = []
    for d in eis_divisors(N):
        F.append([int(c) for c in _fd(N, d, B).coeffs])
    K = G + F
    L = saturate(Lattice.from_generators(K, B + 1))
    if L.rank != len(K):
        raise ArithmeticError("cusp forms and f_d are dependent at the Sturm bound")
    _, piv = rref(K, B + 1)
    Ksq_inv = inverse([[row[j] for j in piv] for row in K])
    rows = [list(r) for r in L.basis]
    C = mat_mul([[r[j] for j in piv] for r in rows], Ksq_inv)
    Cinv = inverse(C)
    return JointBasis(N, B, tuple(tuple(r) for r in rows), tuple(tuple(r) for r in C),
                      tuple(tuple(r) for r in Cinv), g, len(F))


# -- Hecke action ----------------------------------------------------------

def _hecke_on_cusp_echelon(N, n):
    """T_n on the echelon basis of S_2(N, Z), from the dual-basis description."""
    alg, _, A = cuspform_duality(N, sturm_bound(N))
    if alg.rank == 0:
        return []
    ms = build_manin_space(N)
    T = hecke_matrix(ms, n)
    if not alg.contains(T):
        raise ArithmeticError(f"T_{n} is not in the cuspidal Hecke algebra at level {N}")
    taus = alg.basis
    D = [alg.coords(mat_mul(tau, T)) for tau in taus]  # D[j][i] = coord_i(tau_j T_n)
    D = [[D[j][i] for j in range(len(taus))] for i in range(len(taus))]
    A = [list(r) for r in A]
    return _as_int_matrix(_conj(A, D, inverse(A)), f"T_{n} on cusp forms")


def _hecke_on_f_basis(N, n):
    """T_n on (f_d) through the eigenbasis E_d = sum_t x_dt f_t."""
    ds = eis_divisors(N)
    X = [list(ed_in_f_basis(N, d)) for d in ds]
    lam = [[ed_coefficient(N, d, n) if i == j else 0 for j, _ in enumerate(ds)]
           for i, d in enumerate(ds)]
    return _conj(inverse(X), lam, X)


@lru_cache(maxsize=None)
def _hecke_on_M_cached(N, n):
    J = m_integral_basis(N)
    D = _blockdiag(_hecke_on_cusp_echelon(N, n), _hecke_on_f_basis(N, n))
    T = _as_int_matrix(_conj(J.decomp, D, J.decomp_inv), f"T_{n} on M_2({N}, Z)")
    return tuple(tuple(r) for r in T)


def hecke_on_M(N, n):
    """Integer matrix of T_n (U_ell for ell | N) on the joint basis of M_2(N, Z)."""
    return [list(r) for r in _hecke_on_M_cached(N, n)]


def hecke_on_S(N, n):
    """T_n on the echelon basis of S_2(N, Z)."""
    return _hecke_on_cusp_echelon(N, n)


def _needed_operators(N, qmax):
    ns = set(prime_factors(N)) | set(primes_upto(qmax))
    return sorted(ns)


@lru_cache(maxsize=None)
def hecke_algebra(N, space="full", qmax=DEFAULT_QMAX):
    """Z-span of T_1..T_B on M (``space="full"``) or S (``"cuspidal"``),
    closed under products, then enlarged by any U_ell or T_q (q <= qmax)
    found missing.  ``rounds`` on the result counts closure rounds."""
    B = sturm_bound(N)
    J = m_integral_basis(N)
    if space == "full":
        op, size = (lambda n: hecke_on_M(N, n)), J.rank
    elif space == "cuspidal":
        op, size = (lambda n: hecke_on_S(N, n)), J.genus
    else:
        raise ValueError(f"unknown space {space!r}")
    alg = generate_algebra([op(n) for n in range(1, B + 1)], size,
                           tags=tuple(f"T{n}" for n in range(1, B + 1)))
    extra = [n for n in _needed_operators(N, qmax) if n > B]
    alg = enlarge(alg, [op(n) for n in extra])
    if alg.rank != size:
        raise ArithmeticError(f"Hecke algebra on {space} space has rank {alg.rank} != {size}")
    return alg


# -- Eisenstein ideal ------------------------------------------------------

@dataclass(frozen=True)
class EisensteinIdeal:
    ideal: IdealLattice
    eigen_rows: tuple  # eigenvalue vector of each algebra basis element on the E_d
    quotient: AbelianInvariants  # T~/I~

    @property
    def quotient_rank(self):
        return self.quotient.free_rank


def _ed_in_M(N):
    """Rational coordinates of E_d (d | N, d > 1) in the joint basis."""
    J = m_integral_basis(N)
    Fc = J.f_coords()
    out = []
    for d in eis_divisors(N):
        x = ed_in_f_basis(N, d)
        out.append([sum(c * row[j] for c, row in zip(x, Fc)) for j in range(J.rank)])
    return out


def _eigenvalue(vec, M):
    img = vec_mat(vec, M)
    k = next(i for i, v in enumerate(vec) if v)
    lam = Fraction(img[k]) / vec[k]
    if any(a != lam * b for a, b in zip(img, vec)):
        raise ArithmeticError("Eisenstein series is not an eigenvector")
    return lam


@lru_cache(maxsize=None)
def eisenstein_ideal(N):
    """I~ = annihilator of E_2(N) in T~, plus the eigenvalue map T~ -> Z^(2^r - 1)."""
    alg = hecke_algebra(N, "full")
    Es = _ed_in_M(N)
    eig = []
    for b in alg.basis:
        row = [_eigenvalue(e, b) for e in Es]
        eig.append([int(x) for x in _as_int_matrix([row], "Hecke eigenvalue")[0]])
    K = kernel(eig, len(Es))
    ideal = IdealLattice(alg, Lattice(alg.rank, tuple(tuple(r) for r in K)), ("annihilator",))
    # T~/I~ is isomorphic to the image of the eigenvalue map
    quotient = snf([list(r) for r in K], alg.rank) if K else snf([], alg.rank)
    return EisensteinIdeal(ideal, tuple(tuple(r) for r in eig), quotient)


def annihilates_eisenstein(N, M):
    """True when the operator M on the joint basis kills every f_d."""
    return all(not any(vec_mat(f, M)) for f in m_integral_basis(N).f_coords())


# -- restriction to cusp forms ---------------------------------------------

def _restrict(N, M):
    """Matrix of an operator on M restricted to the cusp echelon basis."""
    J = m_integral_basis(N)
    S = J.cusp_coords()
    out = [vec_mat(s, M) for s in S]
    # solve out = R * S; S has full row rank
    _, piv = rref(S, J.rank)
    Sinv = inverse([[r[j] for j in piv] for r in S])
    R = mat_mul([[r[j] for j in piv] for r in out], Sinv)
    if mat_mul(R, S) != out:
        raise ArithmeticError("operator does not preserve the cusp forms")
    return _as_int_matrix(R, "restriction to cusp forms")


@dataclass(frozen=True)
class CuspidalIndex:
    T: Lattice
    I: Lattice
    index: int


@lru_cache(maxsize=None)
def _cuspidal_index(N):
    J = m_integral_basis(N)
    g = J.genus
    if g == 0:
        return CuspidalIndex(Lattice(0), Lattice(0), 1)
    alg = hecke_algebra(N, "full")
    E = eisenstein_ideal(N)
    T = Lattice.from_generators([flatten(_restrict(N, b)) for b in alg.basis], g * g)
    Iops = [alg.element(x) for x in E.ideal.lattice.basis]
    I = Lattice.from_generators([flatten(_restrict(N, M)) for M in Iops], g * g)
    if T.rank != g or I.rank != g:
        raise ArithmeticError(f"restriction to cusp forms is rank-deficient at level {N}")
    return CuspidalIndex(T, I, I.index_in(T))


def cuspidal_ideal_index(N, p):
    """ord_p [T : I] with I the image of I~ in the Hecke algebra on cusp forms."""
    return valuation(_cuspidal_index(N).index, p)


# -- the ideal J -----------------------------------------------------------

def _op_coords(alg, N, n):
    return alg.coords(hecke_on_M(N, n))


def _minus_scalar(alg, coords, c):
    one = alg.one()
    return [x - c * o for x, o in zip(coords, one)]


def j_generator_primes(N, p, qmax=DEFAULT_QMAX):
    return tuple(q for q in primes_upto(qmax) if (6 * N * p) % q)


@lru_cache(maxsize=None)
def _ideal_J_cached(N, qs):
    alg = hecke_algebra(N, "full")
    gens = [_minus_scalar(alg, _op_coords(alg, N, q), q + 1) for q in qs]
    return ideal_from_generators(alg, gens, tuple(f"T{q}-{q + 1}" for q in qs))


def u_relations(N):
    """Coordinates in T~ of (U_l - 1)(U_l - l) for each l | N and of prod (U_l - 1)."""
    alg = hecke_algebra(N, "full")
    out = {}
    prod = alg.one()
    for ell in prime_factors(N):
        U = _op_coords(alg, N, ell)
        a = _minus_scalar(alg, U, 1)
        b = _minus_scalar(alg, U, ell)
        out[f"(U{ell}-1)(U{ell}-{ell})"] = alg.mul(a, b)
        prod = alg.mul(prod, a)
    out["prod(U-1)"] = prod
    return out


@dataclass(frozen=True)
class JReport:
    qset: tuple
    qmax: int
    contained: bool
    index_ppart: object  # int, or None when the ranks differ
    memberships: dict

    @property
    def equals_Itilde_ppart(self):
        return self.contained and self.index_ppart == 0

    @property
    def memberships_ok(self):
        return all(self.memberships.values())


def ideal_J(N, p, qmax=DEFAULT_QMAX):
    if qmax < 20:
        raise ValueError("qmax must be at least 20")
    if (6 * N) % p == 0:
        raise ValueError(f"p = {p} divides 6N")
    qs = j_generator_primes(N, p, qmax)
    J = _ideal_J_cached(N, qs)
    It = eisenstein_ideal(N).ideal
    contained = J.issubset(It)
    if not contained:
        raise ArithmeticError(f"J is not inside the Eisenstein ideal at level {N}")
    idx = J.index_ppart_in(It, p) if J.rank == It.rank else None
    mem = {name: J.contains_localized(x, p) for name, x in u_relations(N).items()}
    return J, JReport(qs, qmax, contained, idx, mem)


# -- presentation ----------------------------------------------------------

@dataclass(frozen=True)
class PresentationRing:
    """Z[x_1..x_r] / (x_i (x_i + 1 - l_i), x_1...x_r): free on the square-free
    monomials other than the top one."""

    level: int
    primes: tuple
    monomials: tuple  # subsets of range(r), as sorted tuples

    @classmethod
    def for_level(cls, N):
        ps = tuple(prime_factors(N))
        r = len(ps)
        mons = tuple(S for k in range(r) for S in combinations(range(r), k))
        return cls(N, ps, mons)

    @property
    def rank(self):
        return len(self.monomials)

    def mul_monomials(self, S, T):
        """x_S * x_T as (coefficient, monomial) or (0, None)."""
        c = 1
        for i in set(S) & set(T):
            c *= self.primes[i] - 1  # x_i^2 = (l_i - 1) x_i
        U = tuple(sorted(set(S) | set(T)))
        if len(U) == len(self.primes):
            return 0, None
        return c, U

    def multiplication_table(self):
        idx = {S: k for k, S in enumerate(self.monomials)}
        table = []
        for S in self.monomials:
            row = []
            for T in self.monomials:
                c, U = self.mul_monomials(S, T)
                v = [0] * self.rank
                if c:
                    v[idx[U]] = c
                row.append(v)
            table.append(row)
        return table


@dataclass(frozen=True)
class PresentationResult:
    relations_ok: bool
    cokernel_order: int
    cokernel_support_ok: bool
    isomorphism_at_p: bool
    rank: int


@lru_cache(maxsize=None)
def _presentation(N):
    R = PresentationRing.for_level(N)
    alg = hecke_algebra(N, "full")
    E = eisenstein_ideal(N)
    relations = u_relations(N)
    relations_ok = all(E.ideal.contains(x) for x in relations.values())
    # image of T~ under the eigenvalue map is T~/I~
    Lam = Lattice.from_generators([list(r) for r in E.eigen_rows], len(eis_divisors(N)))
    ops = {ell: _minus_scalar(alg, _op_coords(alg, N, ell), 1) for ell in R.primes}
    images = []
    for S in R.monomials:
        x = alg.one()
        for i in S:
            x = alg.mul(x, ops[R.primes[i]])
        eig = vec_mat(x, [list(r) for r in E.eigen_rows])
        c = Lam.coordinates(eig)
        images.append([int(v) for v in c])
    d = abs(det(images)) if len(images) == Lam.rank else 0
    ok_support = d != 0 and set(support(d)) <= bad_primes(N)
    return R, PresentationResult(relations_ok, d, ok_support, False, Lam.rank)


def presentation_check(N, p):
    """Check the map R/(relations) -> T~/I~, x_i -> U_i - 1.

    Returns a PresentationResult whose ``isomorphism_at_p`` is true when the
    relations hold, the ranks agree and p does not divide the cokernel order.
    """
    R, res = _presentation(N)
    iso = (res.relations_ok and res.rank == R.rank and res.cokernel_order != 0
           and res.cokernel_order % p != 0)
    return PresentationResult(res.relations_ok, res.cokernel_order, res.cokernel_support_ok,
                              iso, res.rank)


# -- X = M / (S + E) and the duality pairing --------------------------------

@lru_cache(maxsize=None)
def _x_invariants(N):
    J = m_integral_basis(N)
    S = J.cusp_coords()
    E = saturate(Lattice.from_generators(J.f_coords(), J.rank))
    rel = S + [list(r) for r in E.basis]
    return snf(rel, J.rank)


def x_group(N, p):
    """p-part of M_2(N, Z) / (S_2(N, Z) + E_2(N, Z))."""
    inv = _x_invariants(N)
    if inv.free_rank:
        raise ArithmeticError("S + E does not have full rank in M")
    return inv.p_part(p)


@lru_cache(maxsize=None)
def duality_gram_check(N):
    """Factorisation of det(a_1(t_i m_j)) over Z-bases of T~ and M."""
    J = m_integral_basis(N)
    alg = hecke_algebra(N, "full")
    a1 = [r[1] for r in J.rows]
    gram = [[sum(t[j][k] * a1[k] for k in range(J.rank)) for j in range(J.rank)]
            for t in alg.basis]
    d = det(gram)
    if d == 0:
        raise ArithmeticError(f"degenerate duality pairing at level {N}")
    return factor(abs(d)) if abs(d) > 1 else {}
