"""Commutative operator algebras and their ideals as integer lattices.

An algebra is the Z-span of some square integer matrices, closed under
multiplication.  Elements are handled through their integer coordinates in
the canonical HNF basis of the flattened matrices.
"""

from dataclasses import dataclass, field

from .linalg import Lattice, identity, index_ppart, mat_mul

__all__ = ["AlgebraLattice", "IdealLattice", "generate_algebra", "ideal_from_generators"]

MAX_CLOSURE_ROUNDS = 12


def flatten(M):
    return [x for row in M for x in row]


def unflatten(v, n):
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


@dataclass(frozen=True)
class AlgebraLattice:
    size: int
    lattice: Lattice
    rounds: int = 0
    tags: tuple = field(default=(), compare=False)

    @property
    def rank(self):
        return self.lattice.rank

    @property
    def basis(self):
        return [unflatten(b, self.size) for b in self.lattice.basis]

    def contains(self, M):
        return self.lattice.contains(flatten(M))

    def coords(self, M):
        """Integer coordinates of an operator in the basis; raises if absent."""
        c = self.lattice.coordinates(flatten(M))
        if c is None or any(x.denominator != 1 for x in c):
            raise ValueError("operator is not in the algebra lattice")
        return [int(x) for x in c]

    def element(self, coords):
        n = self.size
        flat = [0] * (n * n)
        for c, b in zip(coords, self.lattice.basis):
            if c:
                flat = [x + c * y for x, y in zip(flat, b)]
        return unflatten(flat, n)

    def mul(self, x, y):
        return self.coords(mat_mul(self.element(x), self.element(y)))

    def one(self):
        return self.coords(identity(self.size))

    def is_commutative(self):
        B = self.basis
        return all(mat_mul(a, b) == mat_mul(b, a) for i, a in enumerate(B) for b in B[i + 1:])

    def closure_certificate(self):
        """True when every product of two basis elements lies in the lattice."""
        B = self.basis
        return all(self.contains(mat_mul(a, b)) for i, a in enumerate(B) for b in B[i:])


def generate_algebra(mats, size, tags=(), max_rounds=MAX_CLOSURE_ROUNDS):
    """Z-span of ``mats`` and the identity, enlarged until closed under products."""
    gens = [flatten(identity(size))] + [flatten(M) for M in mats]
    L = Lattice.from_generators(gens, size * size)
    for rounds in range(max_rounds):
        B = [unflatten(b, size) for b in L.basis]
        new = []
        for i, a in enumerate(B):
            for b in B[i:]:
                v = flatten(mat_mul(a, b))
                if not L.contains(v):
                    new.append(v)
        if not new:
            return AlgebraLattice(size, L, rounds, tuple(tags))
        L = Lattice.from_generators(list(L.basis) + new, size * size)
    raise RuntimeError(f"algebra did not close after {max_rounds} rounds")


def enlarge(alg, mats, tags=()):
    """Add operators to an algebra (re-closing); returns alg itself if nothing is new."""
    extra = [M for M in mats if not alg.contains(M)]
    if not extra:
        return alg
    out = generate_algebra(alg.basis + extra, alg.size, alg.tags + tuple(tags))
    return AlgebraLattice(out.size, out.lattice, alg.rounds + out.rounds + 1, out.tags)


@dataclass(frozen=True)
class IdealLattice:
    """An ideal of an AlgebraLattice, as a lattice of coordinate vectors."""

    parent: AlgebraLattice
    lattice: Lattice
    provenance: tuple = field(default=(), compare=False)

    @property
    def rank(self):
        return self.lattice.rank

    def contains(self, x):
        return self.lattice.contains(x)

    def contains_localized(self, x, p):
        return self.lattice.contains_localized(x, p)

    def issubset(self, other):
        return self.lattice.issubset(other.lattice)

    def index_ppart_in(self, other, p):
        return index_ppart(other.lattice, self.lattice, p)

    def is_ideal(self):
        A = self.parent
        one_hot = [[int(i == j) for j in range(A.rank)] for i in range(A.rank)]
        return all(self.contains(A.mul(b, e)) for b in self.lattice.basis for e in one_hot)


def ideal_from_generators(alg, gens, provenance=()):
    """Ideal generated by coordinate vectors ``gens`` inside a commutative algebra."""
    n = alg.rank
    one_hot = [[int(i == j) for j in range(n)] for i in range(n)]
    rows = []
    for g in gens:
        G = alg.element(g)
        for e in one_hot:
            rows.append(alg.coords(mat_mul(G, alg.element(e))))
    L = Lattice.from_generators(rows, n) if rows else Lattice(n, ())
    return IdealLattice(alg, L, tuple(provenance))
