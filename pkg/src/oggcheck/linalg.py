"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer work uses Python ints, rational
work uses :class:`fractions.Fraction`; nothing here ever touches floats.

Conventions: vectors are rows and matrices act on the right (``x -> x A``).
The Hermite normal form is the row-style one with positive pivots and the
entries above each pivot reduced into ``[0, pivot)``, so two lattices are
equal exactly when their stored bases are equal.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .arith import valuation

__all__ = [
    "AbelianInvariants",
    "Lattice",
    "charpoly",
    "det",
    "hnf",
    "identity",
    "index_ppart",
    "inverse",
    "kernel",
    "mat_mul",
    "rref",
    "saturate",
    "smith_form",
    "snf",
    "solve_left",
    "transpose",
]


# -- small helpers -----------------------------------------------------------

def xgcd(a, b):
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vec_mat(v, A):
    """Row vector times matrix."""
    if not A:
        return []
    n = len(A[0])
    out = [0] * n
    for c, row in zip(v, A):
        if c:
            for j, a in enumerate(row):
                if a:
                    out[j] += c * a
    return out


def _ncols(A, ncols):
    if ncols is not None:
        return ncols
    if not A:
        raise ValueError("column count of an empty matrix must be given")
    return len(A[0])


def common_denominator(values):
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def clear_denominators(rows):
    """Scale a rational matrix to an integer one; returns (scale, int rows)."""
    D = common_denominator(x for row in rows for x in row)
    return D, [[int(Fraction(x) * D) for x in row] for row in rows]


# -- Hermite normal form -----------------------------------------------------

def hnf(A, ncols=None, transform=True):
    """Row Hermite normal form.

    Returns ``(H, U)`` where ``U`` is a square unimodular matrix and the rows of
    ``U A`` are the rows of ``H`` followed by zero rows.  ``H`` holds only the
    nonzero rows, so ``len(H)`` is the rank.  With ``transform=False`` the
    second component is None.
    """
    n = _ncols(A, ncols)
    H = [list(map(int, row)) for row in A]
    m = len(H)
    U = identity(m) if transform else None
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            if a == 0:
                H[r], H[i] = H[i], H[r]
                if transform:
                    U[r], U[i] = U[i], U[r]
                continue
            if b % a == 0:
                q = b // a
                H[i] = [y - q * x for x, y in zip(H[r], H[i])]
                if transform:
                    U[i] = [y - q * x for x, y in zip(U[r], U[i])]
                continue
            g, x, y = xgcd(a, b)
            s, t = -b // g, a // g
            Hr, Hi = H[r], H[i]
            H[r] = [x * u + y * v for u, v in zip(Hr, Hi)]
            H[i] = [s * u + t * v for u, v in zip(Hr, Hi)]
            if transform:
                Ur, Ui = U[r], U[i]
                U[r] = [x * u + y * v for u, v in zip(Ur, Ui)]
                U[i] = [s * u + t * v for u, v in zip(Ur, Ui)]
        piv = H[r][c]
        if piv == 0:
            continue
        if piv < 0:
            piv = -piv
            H[r] = [-v for v in H[r]]
            if transform:
                U[r] = [-v for v in U[r]]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [y - q * x for x, y in zip(H[r], H[i])]
                if transform:
                    U[i] = [y - q * x for x, y in zip(U[r], U[i])]
        r += 1
    return H[:r], U


def kernel(A, ncols=None):
    """HNF basis of the left integer kernel {x in Z^m : x A = 0}."""
    m = len(A)
    if m == 0:
        return []
    H, U = hnf(A, ncols=ncols)
    K = U[len(H):]
    if not K:
        return []
    return hnf(K, ncols=m, transform=False)[0]


def right_kernel(A, ncols):
    """HNF basis of {v in Z^n : A v = 0}."""
    return kernel(transpose(A, ncols), ncols=len(A))


# -- Smith normal form -------------------------------------------------------

@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ... of a finitely generated abelian group.

    Each factor is > 1 or 0; zeros (free factors) come last.
    """

    invariant_factors: tuple

    def __post_init__(self):
        fs = self.invariant_factors
        for a, b in zip(fs, fs[1:]):
            if a == 0 and b != 0:
                raise ValueError("free factors must come last")
            if a and b % a:
                raise ValueError(f"divisibility chain broken: {fs}")
        if any(f == 1 or f < 0 for f in fs):
            raise ValueError(f"invalid invariant factors {fs}")

    @property
    def free_rank(self):
        return sum(1 for f in self.invariant_factors if f == 0)

    @property
    def torsion(self):
        return tuple(f for f in self.invariant_factors if f)

    @property
    def order(self):
        """Order of the torsion subgroup."""
        out = 1
        for f in self.torsion:
            out *= f
        return out

    def p_part(self, p):
        """Invariants of the p-primary part of the torsion subgroup."""
        fs = [p ** valuation(f, p) for f in self.torsion]
        return AbelianInvariants(tuple(sorted(f for f in fs if f > 1)))

    def __iter__(self):
        return iter(self.invariant_factors)

    def __len__(self):
        return len(self.invariant_factors)


def smith_form(A, ncols=None):
    """Smith decomposition of an integer matrix.

    Returns ``(diag, U, V, Vinv)`` with ``U A V`` diagonal, ``diag`` its
    nonzero diagonal entries (positive, dividing each other), and ``Vinv`` the
    inverse of ``V``.  For the cokernel ``Z^n / rowspace(A)`` the row
    ``Vinv[i]`` is a generator of order ``diag[i]`` and rows past
    ``len(diag)`` generate the free part.
    """
    n = _ncols(A, ncols)
    D = [list(map(int, row)) for row in A]
    m = len(D)
    U, V, Vinv = identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        D[dst] = [y + q * x for x, y in zip(D[src], D[dst])]
        U[dst] = [y + q * x for x, y in zip(U[src], U[dst])]

    def add_col(dst, src, q):
        # column dst += q * column src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [y - q * x for x, y in zip(Vinv[dst], Vinv[src])]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                cands = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m)
                 if any(D[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
        diag.append(D[t][t])
        t += 1
    return diag, U, V, Vinv


def snf(A, ncols=None):
    """Invariant factors of the cokernel of the relation matrix ``A``.

    ``A`` is read as a list of relations among the ``ncols`` standard
    generators of ``Z^ncols``.
    """
    n = _ncols(A, ncols)
    diag = smith_form(A, n)[0] if A else []
    fs = [d for d in diag if d != 1] + [0] * (n - len(diag))
    return AbelianInvariants(tuple(fs))


# -- rational elimination ----------------------------------------------------

def rref(M, ncols=None):
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    n = _ncols(M, ncols)
    R = [[Fraction(x) for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [y - f * x for x, y in zip(R[r], R[i])]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def solve_left(A, b):
    """Some rational x with x A = b, or None when b is not in the row space."""
    m = len(A)
    if m == 0:
        return [] if all(v == 0 for v in b) else None
    n = len(b)
    # columns of [A^T | b]
    aug = [[Fraction(A[i][j]) for i in range(m)] + [Fraction(b[j])] for j in range(n)]
    R, piv = rref(aug, m + 1)
    if m in piv:
        return None
    x = [Fraction(0)] * m
    for row, c in zip(R, piv):
        x[c] = row[m]
    return x


def inverse(M):
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, piv = rref(aug, 2 * n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(M):
    """Determinant; fraction-free Bareiss elimination for integer input."""
    n = len(M)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in M for x in row):
        D, Mi = clear_denominators(M)
        return Fraction(det(Mi), D ** n)
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            s = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if s is None:
                return 0
            A[k], A[s] = A[s], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def charpoly(A):
    """Characteristic polynomial det(x I - A), coefficients lowest degree first.

    Berkowitz's division-free recursion, so integer input stays integral.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("charpoly needs a square matrix")
    if n == 0:
        return [1]
    P = [1, -A[0][0]]  # highest degree first while building
    for k in range(1, n):
        M = [row[:k] for row in A[:k]]
        R = A[k][:k]
        t = [1, -A[k][k]]
        v = [A[i][k] for i in range(k)]
        for _ in range(k):
            t.append(-sum(r * x for r, x in zip(R, v)))
            v = [sum(a * x for a, x in zip(row, v)) for row in M]
        P = [sum(t[i - j] * P[j] for j in range(min(i, k) + 1)) for i in range(k + 2)]
    return P[::-1]


# -- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^ambient_dim stored by its canonical HNF basis."""

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def from_generators(cls, gens, ambient_dim):
        gens = [list(g) for g in gens]
        if any(len(g) != ambient_dim for g in gens):
            raise ValueError("generator length does not match ambient dimension")
        if any(not isinstance(x, int) and Fraction(x).denominator != 1
               for g in gens for x in g):
            raise ValueError("lattice generators must be integral")
        H = hnf([[int(x) for x in g] for g in gens], ambient_dim, transform=False)[0]
        return cls(ambient_dim, tuple(tuple(row) for row in H))

    @classmethod
    def full(cls, n):
        return cls(n, tuple(tuple(row) for row in identity(n)))

    @property
    def rank(self):
        return len(self.basis)

    def pivots(self):
        return [next(j for j, x in enumerate(row) if x) for row in self.basis]

    def coordinates(self, v):
        """Rational coordinates of v in the basis, or None if v is outside the span."""
        if all(type(x) is int for x in v):
            c = self._int_coordinates(v)
            if c is not None:
                return c
        res = [Fraction(x) for x in v]
        coords = []
        for row, c in zip(self.basis, self.pivots()):
            a = res[c] / row[c]
            coords.append(a)
            if a:
                res = [x - a * y for x, y in zip(res, row)]
        if any(res):
            return None
        return coords

    def _int_coordinates(self, v):
        """Integer-only elimination; None as soon as a division is inexact
        (the caller then redoes the work over Q)."""
        res = list(v)
        coords = []
        for row, c in zip(self.basis, self.pivots()):
            a, r = divmod(res[c], row[c])
            if r:
                return None
            coords.append(Fraction(a))
            if a:
                res = [x - a * y for x, y in zip(res, row)]
        if any(res):
            return None
        return coords

    def contains(self, v):
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def contains_localized(self, v, p):
        """Membership in the lattice tensored with Z_(p)."""
        c = self.coordinates(v)
        return c is not None and all(x.denominator % p for x in c)

    def issubset(self, other):
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other):
        return Lattice.from_generators(list(self.basis) + list(other.basis), self.ambient_dim)

    def saturate(self):
        return saturate(self)

    def index_in(self, big):
        """The index [big : self]; both lattices must have the same rank."""
        if big.rank != self.rank:
            raise ValueError("index needs lattices of equal rank")
        rows = []
        for v in self.basis:
            c = big.coordinates(v)
            if c is None or any(x.denominator != 1 for x in c):
                raise ValueError("lattice is not contained in the larger one")
            rows.append([int(x) for x in c])
        return abs(det(rows))


def saturate(L):
    """{v in Z^n : k v in L for some k >= 1}, via the kernel of the kernel."""
    if L.rank == 0:
        return L
    n = L.ambient_dim
    K = right_kernel([list(b) for b in L.basis], n)
    if not K:
        return Lattice.full(n)
    S = right_kernel(K, n)
    return Lattice(n, tuple(tuple(row) for row in S))


def index_ppart(big, small, p):
    """ord_p of the index [big : small] for nested lattices of equal rank."""
    return valuation(small.index_in(big), p)
