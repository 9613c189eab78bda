"""Weight-2 modular symbols for Gamma_0(N) via Manin symbols.

A Manin symbol (c:d) in P^1(Z/N) stands for g{0, oo} where g in SL_2(Z) has
bottom row congruent to (c, d).  Modulo the two- and three-term relations
they span the modular symbols; the kernel of the boundary map is H_1 of
X_0(N), of dimension 2g.  Integral structure is kept throughout: cuspidal
symbols are taken inside the Z-span of all Manin symbols, so every Hecke
matrix returned here is an integer matrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .algebra import enlarge, generate_algebra
from .arith import divisors, factor, is_prime, is_squarefree, prime_factors
from .linalg import (Lattice, charpoly, clear_denominators, hnf, identity, inverse,
                     kernel, mat_mul, rref, xgcd)
from .qexp import Series, sturm_bound

__all__ = [
    "ManinSpace",
    "build_manin_space",
    "cuspform_duality",
    "cuspidal_charpoly_sqrt",
    "cuspidal_hecke_algebra",
    "genus",
    "hecke_matrix",
    "hecke_matrix_coset",
    "hecke_matrix_merel",
    "heilbronn_merel",
    "integral_cuspform_basis",
    "jacobian_point_count",
    "poly_sqrt",
]


def genus(N):
    """Genus of X_0(N) for square-free N, from the Riemann-Hurwitz count."""
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    mu, nu2, nu3 = 1, 1, 1
    for ell in prime_factors(N):
        mu *= ell + 1
        # 1 + (-4/ell) and 1 + (-3/ell), Kronecker symbols
        if ell != 2:
            nu2 *= 2 if ell % 4 == 1 else 0
        if ell != 3:
            nu3 *= 2 if ell % 3 == 1 else 0
    cusps = len(divisors(N))
    twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps
    return twelve_g // 12


# -- P^1(Z/N) ----------------------------------------------------------------

def _p1_list(N):
    units = [u for u in range(1, N) if gcd(u, N) == 1] or [1]
    index = {}
    reps = []
    for c in range(N):
        for d in range(N):
            if (c, d) in index or gcd(gcd(c, d), N) != 1:
                continue
            orbit = {((u * c) % N, (u * d) % N) for u in units}
            rep = min(orbit)
            i = len(reps)
            reps.append(rep)
            for pair in orbit:
                index[pair] = i
    return reps, index


@dataclass(frozen=True)
class ManinSpace:
    """Manin-symbol presentation of weight-2 modular symbols for Gamma_0(N).

    ``symbols`` lists P^1(Z/N); ``sym_vecs[i]`` expresses symbol i in the
    free generators (rational coordinates, as a dict).  ``cuspidal`` is a
    Z-basis (rational coordinates on the free generators) of the cuspidal
    symbols lying in the Z-span of all Manin symbols.
    """

    level: int
    symbols: tuple
    index: dict
    free: tuple
    sym_vecs: tuple
    cusps: tuple
    boundary: tuple
    cuspidal: tuple
    cusp_pivots: tuple
    cusp_solver: tuple

    @property
    def dimension(self):
        return len(self.free)

    @property
    def cuspidal_dimension(self):
        return len(self.cuspidal)

    @property
    def genus(self):
        return len(self.cuspidal) // 2

    def symbol_index(self, c, d):
        N = self.level
        return self.index.get((c % N, d % N))

    def symbol_vector(self, c, d):
        """Vector of the Manin symbol (c:d), or None when gcd(c, d, N) > 1."""
        i = self.symbol_index(c, d)
        return None if i is None else self.sym_vecs[i]

    def cuspidal_coords(self, v):
        """Coordinates of a cuspidal vector v (free-generator coords) in ``cuspidal``."""
        x = [v[j] for j in self.cusp_pivots]
        Q = self.cusp_solver
        return [sum(a * Q[i][k] for i, a in enumerate(x)) for k in range(len(Q[0]))] if Q else []


def _add(acc, vec, c=1):
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + c * v


@lru_cache(maxsize=None)
def build_manin_space(N):
    if N < 2 or not is_squarefree(N):
        raise ValueError(f"level must be square-free and > 1, got {N}")
    reps, index = _p1_list(N)
    n = len(reps)

    def idx(c, d):
        return index[(c % N, d % N)]

    # two-term relations x + x*sigma = 0, x*sigma = (d, -c)
    sign_rep = [None] * n
    for i, (c, d) in enumerate(reps):
        j = idx(d, -c)
        if i == j:
            sign_rep[i] = (0, i)
        else:
            r = min(i, j)
            sign_rep[i] = (1 if i == r else -1, r)
    # three-term relations x + x*tau + x*tau^2 = 0, x*tau = (d, -c-d), x*tau^2 = (-c-d, c)
    live = sorted({r for s, r in sign_rep if s})
    col = {r: k for k, r in enumerate(live)}
    rels = set()
    for i, (c, d) in enumerate(reps):
        row = [0] * len(live)
        for j in (i, idx(d, -c - d), idx(-c - d, c)):
            s, r = sign_rep[j]
            if s:
                row[col[r]] += s
        if any(row):
            rels.add(tuple(row))
    R, piv = rref(sorted(rels), len(live)) if rels else ([], [])
    free_cols = [k for k in range(len(live)) if k not in set(piv)]
    free_pos = {k: t for t, k in enumerate(free_cols)}
    live_vecs = {}
    for k in free_cols:
        live_vecs[k] = {free_pos[k]: Fraction(1)}
    for row, k in zip(R, piv):
        live_vecs[k] = {free_pos[j]: -row[j] for j in free_cols if row[j]}
    sym_vecs = []
    for i in range(n):
        s, r = sign_rep[i]
        if not s:
            sym_vecs.append({})
        else:
            sym_vecs.append({t: s * v for t, v in live_vecs[col[r]].items()})
    free = tuple(live[k] for k in free_cols)
    k = len(free)

    cusps = divisors(N)
    cusp_pos = {c: t for t, c in enumerate(cusps)}

    def boundary_of_symbol(i):
        c, d = reps[i]
        out = [0] * len(cusps)
        out[cusp_pos[gcd(c, N)]] += 1
        out[cusp_pos[gcd(d, N)]] -= 1
        return out

    boundary = tuple(tuple(boundary_of_symbol(i)) for i in free)

    # Z-span of all Manin symbols inside Q^k
    dense = [[v.get(t, 0) for t in range(k)] for v in sym_vecs]
    D, scaled = clear_denominators(dense)
    Lint = Lattice.from_generators(scaled, k)
    Lrows = [[Fraction(x, D) for x in row] for row in Lint.basis]
    bd = [[sum(row[t] * boundary[t][j] for t in range(k)) for j in range(len(cusps))]
          for row in Lrows]
    if any(x.denominator != 1 for row in bd for x in row):
        raise ArithmeticError("boundary of an integral symbol is not integral")
    K = kernel([[int(x) for x in row] for row in bd], len(cusps))
    cuspidal = tuple(
        tuple(sum(c * Lrows[i][t] for i, c in enumerate(kr)) for t in range(k)) for kr in K
    )
    if cuspidal:
        _, cpiv = rref([list(v) for v in cuspidal], k)
        sub = [[v[j] for j in cpiv] for v in cuspidal]
        solver = tuple(tuple(r) for r in inverse(sub))
    else:
        cpiv, solver = [], ()
    ms = ManinSpace(N, tuple(reps), index, free, tuple(sym_vecs), cusps, boundary,
                    cuspidal, tuple(cpiv), solver)
    if ms.cuspidal_dimension != 2 * genus(N):
        raise ArithmeticError(
            f"cuspidal dimension {ms.cuspidal_dimension} != 2g = {2 * genus(N)} at level {N}")
    return ms


# -- Hecke operators ---------------------------------------------------------

def heilbronn_merel(n):
    """Merel's set: [[a, b], [c, d]] with ad - bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for d in range(-(-n // a), n + 2 - a):
            bc = a * d - n
            if bc == 0:
                out.extend((a, b, 0, d) for b in range(a))
                out.extend((a, 0, c, d) for c in range(1, d))
            else:
                for b in range(1, a):
                    if bc % b == 0 and bc // b < d:
                        out.append((a, b, bc // b, d))
    return out


def _image_on_free(ms, transform):
    """Matrix (rows = free generators) of a linear map given on Manin symbols."""
    k = ms.dimension
    rows = []
    for i in ms.free:
        c, d = ms.symbols[i]
        acc = {}
        for vec, coef in transform(c, d):
            _add(acc, vec, coef)
        rows.append([acc.get(t, 0) for t in range(k)])
    return rows


def _restrict_to_cuspidal(ms, TV):
    k = ms.dimension
    out = []
    for s in ms.cuspidal:
        img = [sum(s[t] * TV[t][j] for t in range(k) if s[t]) for j in range(k)]
        coords = ms.cuspidal_coords(img)
        # the projection only reads pivot columns; confirm the image really lies in the span
        back = [sum(c * v[j] for c, v in zip(coords, ms.cuspidal)) for j in range(k)]
        if back != img:
            raise ArithmeticError("Hecke image left the cuspidal subspace")
        if any(Fraction(x).denominator != 1 for x in coords):
            raise ArithmeticError("Hecke operator is not integral on cuspidal symbols")
        out.append([int(x) for x in coords])
    return out


def hecke_matrix_merel(ms, n):
    """T_n on cuspidal symbols from Merel's Heilbronn matrices (any n >= 1)."""
    N = ms.level
    X = heilbronn_merel(n)

    def transform(c, d):
        for a, b, cc, dd in X:
            v = ms.symbol_vector(c * a + d * cc, c * b + d * dd)
            if v is not None:
                yield v, 1

    return _restrict_to_cuspidal(ms, _image_on_free(ms, transform))


def _lift(ms, c, d):
    """An SL_2(Z) matrix whose bottom row is congruent to (c, d) mod N."""
    N = ms.level
    c %= N
    d %= N
    if c == 0:
        c = N
    while gcd(c, d) != 1:
        d += N
    _, x, y = xgcd(d, -c)  # x d - y c = 1
    return x, y, c, d


def _cf_symbols(ms, num, den):
    """{0, num/den} as a list of (sign, symbol vector) via continued fractions."""
    out = [ms.symbol_vector(0, 1)]
    if den == 0:
        return out
    g = gcd(num, den)
    num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    # convergents p_k/q_k of num/den
    p2, q2, p1, q1 = 0, 1, 1, 0
    a, b = num, den
    k = 0
    while b:
        t = a // b
        a, b = b, a - t * b
        p, q = t * p1 + p2, t * q1 + q2
        s = 1 if k % 2 else -1  # (-1)^(k-1)
        out.append(ms.symbol_vector(s * q, q1))
        p2, q2, p1, q1 = p1, q1, p, q
        k += 1
    return out


def _modsym_vector(ms, alpha, beta):
    """{alpha, beta} for cusps given as (num, den) pairs."""
    acc = {}
    for v in _cf_symbols(ms, *beta):
        _add(acc, v)
    for v in _cf_symbols(ms, *alpha):
        _add(acc, v, -1)
    return acc


def _act(m, cusp):
    a, b, c, d = m
    x, y = cusp
    return a * x + b * y, c * x + d * y


def hecke_matrix_coset(ms, ell):
    """T_ell (or U_ell) on cuspidal symbols from the coset representatives
    [[1, j], [0, ell]] (and [[ell, 0], [0, 1]] when ell does not divide N)."""
    if not is_prime(ell):
        raise ValueError("coset route is implemented for primes only")
    reps = [(1, j, 0, ell) for j in range(ell)]
    if ms.level % ell:
        reps.append((ell, 0, 0, 1))

    def transform(c, d):
        a, b, c1, d1 = _lift(ms, c, d)
        zero, inf = (b, d1), (a, c1)  # g(0), g(oo)
        for m in reps:
            yield _modsym_vector(ms, _act(m, zero), _act(m, inf)), 1

    return _restrict_to_cuspidal(ms, _image_on_free(ms, transform))


@lru_cache(maxsize=None)
def _prime_hecke(N, ell):
    ms = build_manin_space(N)
    if N % ell:
        M = hecke_matrix_merel(ms, ell)
    else:
        M = hecke_matrix_coset(ms, ell)
    return tuple(tuple(r) for r in M)


def _mat_lin(A, B, a=1, b=1):
    return [[a * x + b * y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def hecke_from_primes(n, N, prime_op, size):
    """T_n from prime-index operators via T_{mn} = T_m T_n (coprime) and the
    prime-power recurrences T_{l^{k+1}} = T_l T_{l^k} - l T_{l^{k-1}} (l prime
    to N), U_{l^k} = U_l^k."""
    out = identity(size)
    for ell, e in factor(n).items() if n > 1 else ():
        T = [list(r) for r in prime_op(ell)]
        if N % ell == 0:
            P = identity(size)
            for _ in range(e):
                P = mat_mul(P, T)
        else:
            prev, P = identity(size), T
            for _ in range(e - 1):
                prev, P = P, _mat_lin(mat_mul(T, P), prev, 1, -ell)
        out = mat_mul(out, P)
    return out


@lru_cache(maxsize=None)
def _hecke_cached(N, n):
    ms = build_manin_space(N)
    M = hecke_from_primes(n, N, lambda ell: _prime_hecke(N, ell), ms.cuspidal_dimension)
    return tuple(tuple(r) for r in M)


def hecke_matrix(ms, n):
    """Integer matrix of T_n (U_ell for ell | N) on the cuspidal symbols.

    Rows are images of basis vectors (operators act on row vectors).
    """
    if n < 1:
        raise ValueError("Hecke index must be positive")
    return [list(r) for r in _hecke_cached(ms.level, n)]


# -- characteristic polynomials and point counts ----------------------------

def poly_sqrt(f):
    """Monic integer P with P^2 == f (coefficients lowest first), or raise."""
    deg = len(f) - 1
    if deg % 2 or f[-1] != 1:
        raise ArithmeticError("not a perfect square")
    g = deg // 2
    top = [1]  # P coefficients, highest first
    for k in range(1, g + 1):
        s = f[deg - k] - sum(top[i] * top[k - i] for i in range(1, k))
        if s % 2:
            raise ArithmeticError("not a perfect square")
        top.append(s // 2)
    P = top[::-1]
    sq = [0] * (deg + 1)
    for i, a in enumerate(P):
        for j, b in enumerate(P):
            sq[i + j] += a * b
    if sq != list(f):
        raise ArithmeticError("not a perfect square")
    return P


def cuspidal_charpoly_sqrt(ms, n):
    """P with charpoly(T_n | cuspidal symbols) = P^2."""
    return poly_sqrt(charpoly(hecke_matrix(ms, n)))


def jacobian_point_count(N, q):
    """|J_0(N)(F_q)| = P_q(q + 1) for a prime q not dividing 2N."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if (2 * N) % q == 0:
        raise ValueError(f"q = {q} divides 2N; reduction mod q is not usable")
    P = cuspidal_charpoly_sqrt(build_manin_space(N), q)
    return sum(c * (q + 1) ** i for i, c in enumerate(P))


# -- Hecke algebra on cuspidal symbols and integral cusp forms ---------------

@lru_cache(maxsize=None)
def cuspidal_hecke_algebra(N, upto=None):
    """Z-span of T_1..T_B on cuspidal symbols, closed under products, and
    enlarged until T_n for n <= ``upto`` all lie in it."""
    ms = build_manin_space(N)
    B = sturm_bound(N)
    size = ms.cuspidal_dimension
    mats = [hecke_matrix(ms, n) for n in range(1, B + 1)]
    alg = generate_algebra(mats, size, tags=tuple(f"T{n}" for n in range(1, B + 1)))
    if upto and upto > B:
        alg = enlarge(alg, [hecke_matrix(ms, n) for n in range(B + 1, upto + 1)])
    if alg.rank != ms.genus:
        raise ArithmeticError(f"cuspidal Hecke algebra has rank {alg.rank}, expected g")
    return alg


def _dual_rows(alg, ms, prec):
    """Rows phi_i with a_n(phi_i) = i-th coordinate of T_n, n = 1..prec, or
    None when some T_n is missing from the algebra."""
    cols = []
    for n in range(1, prec + 1):
        M = hecke_matrix(ms, n)
        if not alg.contains(M):
            return None
        cols.append(alg.coords(M))
    return [[0] + [c[i] for c in cols] for i in range(alg.rank)]


@lru_cache(maxsize=None)
def cuspform_duality(N, prec):
    """(algebra, echelon rows, A) with echelon rows = A * dual rows.

    The dual rows phi_i satisfy phi_i(tau_j) = delta_ij for the algebra basis
    tau_j, via the pairing (f, t) -> a_1(t f); A is unimodular.
    """
    ms = build_manin_space(N)
    P = max(prec, sturm_bound(N))
    alg = cuspidal_hecke_algebra(N)
    rows = _dual_rows(alg, ms, P)
    if rows is None:
        alg = cuspidal_hecke_algebra(N, upto=P)
        rows = _dual_rows(alg, ms, P)
    if alg.rank == 0:
        return alg, (), ()
    H, U = hnf(rows, P + 1)
    if len(H) != alg.rank:
        raise ArithmeticError("q-expansion map is not injective on the Hecke dual")
    return alg, tuple(tuple(r[: prec + 1]) for r in H), tuple(tuple(r) for r in U)


def integral_cuspform_basis(N, prec):
    """Echelon Z-basis of S_2(N, Z) to precision ``prec``.

    Coefficients come from the duality a_n(f) = phi(T_n) with phi running
    over Hom(T, Z), T the Hecke algebra on cuspidal symbols.
    """
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    _, rows, _ = cuspform_duality(N, prec)
    return [Series(r) for r in rows]
