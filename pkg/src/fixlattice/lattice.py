"""Lattices given by Gram matrices, embedded sublattices, duals and complements."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import NotContained, NotIntegral, NotPositiveDefinite, RankMismatch


class Lattice:
    """A positive-definite lattice known through its Gram matrix.

    The integral and even flags are always recomputed from the Gram matrix.
    Rank 0 (empty Gram) is allowed.
    """

    __slots__ = ("gram", "name", "_key", "__dict__")

    def __init__(self, gram, name: str | None = None, check: bool = True):
        G = la.rat_matrix(gram, 0 if len(gram) == 0 else None)
        if G.shape[0] != G.shape[1]:
            raise ValueError("Gram matrix must be square")
        if check:
            if not (G == G.T).all():
                raise ValueError("Gram matrix must be symmetric")
            if not la.is_positive_definite(G):
                raise NotPositiveDefinite("Gram matrix is not positive definite")
        G.setflags(write=False)
        self.gram = G
        self.name = name
        self._key = tuple(tuple(r) for r in G.tolist())

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def det(self) -> Fraction:
        return Fraction(la.det(self.gram))

    @cached_property
    def is_integral(self) -> bool:
        return la.is_integral(self.gram)

    @cached_property
    def is_even(self) -> bool:
        return self.is_integral and all(self.gram[i, i].numerator % 2 == 0 for i in range(self.rank))

    @cached_property
    def int_gram(self) -> np.ndarray:
        """The Gram matrix as an IntMatrix (requires an integral lattice)."""
        if not self.is_integral:
            raise NotIntegral("lattice is not integral")
        return la.int_matrix(self.gram, self.rank)

    @cached_property
    def scaled_gram(self) -> tuple[np.ndarray, int]:
        """``(s * gram, s)`` with the least ``s`` making the Gram integral."""
        s = la.denominator(self.gram)
        return la.int_matrix(self.gram * s, self.rank), s

    def __eq__(self, other):
        return isinstance(other, Lattice) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Lattice{label} rank={self.rank} det={self.det}>"

    def norm(self, x) -> Fraction:
        x = np.asarray(x, dtype=object)
        return Fraction(x.dot(self.gram).dot(x))

    def inner(self, x, y) -> Fraction:
        return Fraction(np.asarray(x, dtype=object).dot(self.gram).dot(np.asarray(y, dtype=object)))


class EmbeddedLattice:
    """The sublattice of ``ambient`` spanned by integer rows (ambient coordinates).

    The basis is kept in Hermite normal form, so two embedded lattices are
    equal exactly when their basis matrices are.
    """

    __slots__ = ("ambient", "basis", "__dict__")

    def __init__(self, ambient: Lattice, rows):
        n = ambient.rank
        B = la.hnf_basis(la.int_matrix(rows, n), n)
        B.setflags(write=False)
        self.ambient = ambient
        self.basis = B

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def gram(self) -> np.ndarray:
        return la.rat_matrix(self.basis.dot(self.ambient.gram).dot(self.basis.T), self.rank)

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, check=False)

    @cached_property
    def is_primitive(self) -> bool:
        return saturate(self) == self

    def contains(self, x) -> bool:
        return _coords_in(self.basis, list(x)) is not None

    def coordinates(self, x) -> np.ndarray:
        """Integer coordinates of ambient vector ``x`` in this basis."""
        c = _coords_in(self.basis, la.int_matrix([list(x)], self.ambient.rank)[0])
        if c is None:
            raise NotContained("vector not in sublattice")
        return c

    def __eq__(self, other):
        return (isinstance(other, EmbeddedLattice) and self.ambient == other.ambient
                and self.basis.shape == other.basis.shape and (self.basis == other.basis).all())

    def __hash__(self):
        return hash((self.ambient, tuple(map(tuple, self.basis.tolist()))))

    def __repr__(self):
        return f"<EmbeddedLattice rank={self.rank} in {self.ambient!r}>"


def _coords_in(B, x):
    """Solve ``c @ B == x`` for integral ``c``; None if impossible."""
    k = B.shape[0]
    if k == 0:
        return la.int_matrix([[]], 0)[0] if not any(x) else None
    # B is in HNF: walk pivots top-down
    x = [int(v) for v in x]
    c = []
    for i in range(k):
        row = B[i]
        j = next(j for j in range(len(row)) if row[j] != 0)
        q, r = divmod(x[j], int(row[j]))
        if r:
            return None
        c.append(q)
        if q:
            x = [a - q * int(b) for a, b in zip(x, row)]
    if any(x):
        return None
    return np.array(c, dtype=object)


@dataclass(frozen=True)
class DualDescription:
    lattice: Lattice
    dual_gram: np.ndarray
    index: int


def dual(L: Lattice) -> DualDescription:
    """Gram matrix of L* in the dual basis and the index |L*/L| = det(L)."""
    if not L.is_integral:
        raise NotIntegral("dual lattice needs an integral lattice")
    return DualDescription(L, la.inverse(L.gram), int(abs(L.det)))


def saturate(S: EmbeddedLattice) -> EmbeddedLattice:
    """Primitive closure of ``S`` (rational span intersected with the ambient)."""
    n = S.ambient.rank
    if S.rank == 0:
        return S
    Y = la.kernel_saturated(S.basis.T)  # rows y with y @ B.T == 0
    if Y.shape[0] == 0:
        return EmbeddedLattice(S.ambient, la.identity(n))
    return EmbeddedLattice(S.ambient, la.kernel_saturated(Y.T))


def orthogonal_complement(S: EmbeddedLattice) -> EmbeddedLattice:
    """Saturated complement ``{x in ambient : (x, s) = 0 for s in S}``."""
    n = S.ambient.rank
    if S.rank == 0:
        return EmbeddedLattice(S.ambient, la.identity(n))
    A, _ = S.ambient.scaled_gram
    M = A.dot(S.basis.T)
    return EmbeddedLattice(S.ambient, la.kernel_saturated(M))


def direct_sum(L1: Lattice, L2: Lattice) -> Lattice:
    n1, n2 = L1.rank, L2.rank
    G = [[Fraction(0)] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            G[i][j] = L1.gram[i, j]
    for i in range(n2):
        for j in range(n2):
            G[n1 + i][n1 + j] = L2.gram[i, j]
    return Lattice(la.rat_matrix(G, n1 + n2), check=False)


def rescale(L: Lattice, n) -> Lattice:
    n = Fraction(n)
    if n <= 0:
        raise ValueError("scale must be positive")
    name = f"{L.name}({n})" if L.name else None
    return Lattice(L.gram * n, name=name, check=False)


def sublattice_index(S: EmbeddedLattice, T: EmbeddedLattice) -> int:
    """The index [T : S] for S contained in T of equal rank."""
    if S.rank != T.rank:
        raise RankMismatch("sublattice_index needs equal ranks")
    X = []
    for row in S.basis:
        c = _coords_in(T.basis, row)
        if c is None:
            raise NotContained("S is not contained in T")
        X.append(list(c))
    return abs(int(la.det(la.int_matrix(X, S.rank)))) if S.rank else 1


def zero_lattice() -> Lattice:
    return Lattice(la.rat_matrix([], 0), name="0", check=False)


def sublattice(ambient: Lattice, rows) -> EmbeddedLattice:
    return EmbeddedLattice(ambient, rows)


def whole(ambient: Lattice) -> EmbeddedLattice:
    return EmbeddedLattice(ambient, la.identity(ambient.rank))
