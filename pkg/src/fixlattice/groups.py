"""Finite groups of lattice isometries given by generating matrices.

Elements act on row coordinates, ``x -> x g``, and preserve the ambient Gram
matrix: ``g A g^t = A``.  Orders are computed from a stabilizer chain of the
permutation action on a finite spanning set of vectors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, NotFaithfulDomain, PreconditionViolated
from .isometry import VectorIndex, o0_split
from .lattice import EmbeddedLattice, Lattice, orthogonal_complement, saturate
from .perm import PermGroup, inv, is_identity, mul, perm_order, perm_power
from .shortvec import short_vectors

ORBIT_LIMIT = 400_000


def _as_int64(g) -> np.ndarray:
    g = np.asarray(g)
    if g.dtype == object:
        return la.to_int64(g)
    return g.astype(np.int64)


def preserves_gram(g, A) -> bool:
    go = np.asarray(g).astype(object)
    Ao = np.asarray(A).astype(object)
    return bool((go.dot(Ao).dot(go.T) == Ao).all())


def vector_orbits(gens, seeds: np.ndarray, limit: int = ORBIT_LIMIT) -> np.ndarray:
    """Union of the orbits of the rows of ``seeds`` (integer vectors)."""
    seen = {}
    out = []
    frontier = []
    for v in seeds:
        key = v.tobytes()
        if key not in seen:
            seen[key] = len(out)
            out.append(v)
            frontier.append(v)
    while frontier:
        F = np.array(frontier)
        frontier = []
        for g in gens:
            for w in F @ g:
                key = w.tobytes()
                if key not in seen:
                    seen[key] = len(out)
                    out.append(w)
                    frontier.append(w)
                    if len(out) > limit:
                        raise BudgetExceeded("permutation domain too large")
    return np.array(out, dtype=np.int64)


def default_domain(ambient: Lattice, gens) -> np.ndarray:
    """Orbits of short ambient vectors, added by increasing norm until they span."""
    from .shortvec import _reduced

    n = ambient.rank
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    red = _reduced(ambient)
    vl = short_vectors(ambient, Fraction(int(red.Gi.diagonal().max()), red.scale))
    chosen = np.zeros((0, n), dtype=np.int64)
    covered: set[bytes] = set()
    for v in vl.coords:
        if v.tobytes() in covered:
            continue
        orb = vector_orbits(gens, v[None, :])
        covered.update(w.tobytes() for w in orb)
        chosen = np.vstack([chosen, orb])
        if np.linalg.matrix_rank(chosen.astype(float)) == n:
            return chosen
    raise NotFaithfulDomain("short vectors do not span")


class MatrixGroup:
    """Group generated by integer isometries of ``ambient``."""

    def __init__(self, ambient: Lattice, gens, domain: np.ndarray | None = None,
                 order: int | None = None, check: bool = True, name: str | None = None):
        self.ambient = ambient
        n = ambient.rank
        self.gens = [_as_int64(g).reshape(n, n) for g in gens]
        self.gens = [g for g in self.gens if not (g == np.eye(n, dtype=np.int64)).all()]
        self.name = name
        if check:
            A = ambient.gram
            for g in self.gens:
                if not preserves_gram(g, A):
                    raise ValueError("generator does not preserve the Gram matrix")
        self._domain = domain
        self._order = order

    def __repr__(self):
        return f"<MatrixGroup {self.name or ''} ngens={len(self.gens)} rank={self.ambient.rank}>"

    @property
    def rank(self) -> int:
        return self.ambient.rank

    @cached_property
    def domain(self) -> np.ndarray:
        if self._domain is not None:
            D = np.asarray(self._domain, dtype=np.int64)
            if self.rank and np.linalg.matrix_rank(D.astype(float)) < self.rank:
                raise NotFaithfulDomain("permutation domain does not span the ambient space")
            return D
        return default_domain(self.ambient, self.gens)

    @cached_property
    def _index(self) -> VectorIndex:
        return VectorIndex(self.domain)

    def perm_of(self, g) -> np.ndarray:
        p = self._index.find(self.domain @ g)
        if (p < 0).any():
            raise NotFaithfulDomain("domain is not closed under the group")
        return p

    @cached_property
    def _domain_basis(self):
        D = self.domain
        rows: list[int] = []
        for i in range(D.shape[0]):
            if np.linalg.matrix_rank(D[rows + [i]].astype(float)) == len(rows) + 1:
                rows.append(i)
                if len(rows) == self.rank:
                    break
        B = la.int_matrix(D[rows].tolist(), self.rank)
        return rows, la.inverse(B)

    def matrix_of_perm(self, p: np.ndarray) -> np.ndarray:
        rows, Binv = self._domain_basis
        img = la.int_matrix(self.domain[p[rows]].tolist(), self.rank)
        g = Binv.dot(img)
        if not la.is_integral(g):
            raise AssertionError("permutation does not come from an integral matrix")
        return la.to_int64(la.int_matrix(g, self.rank))

    @cached_property
    def perms(self) -> list[np.ndarray]:
        return [self.perm_of(g) for g in self.gens]

    @cached_property
    def perm_group(self) -> PermGroup:
        return PermGroup(self.perms, self.domain.shape[0], seed=0)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = 1 if not self.gens else self.perm_group.order()
        return self._order

    def contains(self, g) -> bool:
        g = _as_int64(g)
        if (g == np.eye(self.rank, dtype=np.int64)).all():
            return True
        if not self.gens:
            return False
        try:
            p = self.perm_of(g)
        except NotFaithfulDomain:
            return False
        return self.perm_group.contains(p)

    def random_element(self, rng: random.Random) -> np.ndarray:
        """A random word of length 12 in the generators."""
        n = self.rank
        g = np.eye(n, dtype=np.int64)
        if not self.gens:
            return g
        for _ in range(12):
            g = g @ rng.choice(self.gens)
        return g


def group_order(G: MatrixGroup) -> int:
    return G.order


def trivial_group(ambient: Lattice) -> MatrixGroup:
    return MatrixGroup(ambient, [], order=1, check=False)


# -- fixed lattices ------------------------------------------------------------

def invariant_lattice(G: MatrixGroup) -> EmbeddedLattice:
    n = G.rank
    if not G.gens:
        return EmbeddedLattice(G.ambient, la.identity(n))
    I = np.eye(n, dtype=np.int64)
    M = np.hstack([g - I for g in G.gens])
    return EmbeddedLattice(G.ambient, la.kernel_saturated(la.int_matrix(M.tolist(), M.shape[1])))


def coinvariant_lattice(G: MatrixGroup) -> EmbeddedLattice:
    C = orthogonal_complement(invariant_lattice(G))
    for g in G.gens:
        if (restrict(g, C) == np.eye(C.rank, dtype=np.int64)).all():
            raise AssertionError("group does not act faithfully on the coinvariant lattice")
    return C


def restrict(g, S: EmbeddedLattice) -> np.ndarray:
    """Matrix of ``g`` on the basis of the invariant sublattice ``S``."""
    k = S.rank
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rows = [S.coordinates(r) for r in S.basis.dot(np.asarray(g).astype(object))]
    return la.to_int64(la.int_matrix([list(r) for r in rows], k))


@dataclass
class FixedData:
    group: MatrixGroup
    invariant: EmbeddedLattice
    coinvariant: EmbeddedLattice


def fixed_data(G: MatrixGroup) -> FixedData:
    inv_l = invariant_lattice(G)
    return FixedData(G, inv_l, orthogonal_complement(inv_l))


# -- O^2 ---------------------------------------------------------------------

def _odd_part(p: np.ndarray) -> np.ndarray:
    m = perm_order(p)
    t = 1
    while m % 2 == 0:
        m //= 2
        t *= 2
    return perm_power(p, t)


def _is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def o2_subgroup(G: MatrixGroup, seed: int = 0, max_rounds: int = 200) -> MatrixGroup:
    """The smallest normal subgroup with a 2-group quotient."""
    order = G.order
    if _is_power_of_two(order):
        return trivial_group(G.ambient)
    rng = random.Random(seed)
    N_deg = G.domain.shape[0]
    gens = [q for q in (_odd_part(p) for p in G.perms) if not is_identity(q)]
    sample_src = G.perm_group
    for _ in range(max_rounds):
        gens = _normal_closure(gens, G.perms, N_deg)
        N = PermGroup(gens, N_deg) if gens else None
        n_order = N.order() if N else 1
        if order % n_order == 0 and _is_power_of_two(order // n_order):
            mats = [G.matrix_of_perm(p) for p in (N.strong_gens() if N else [])]
            mats = _prune(mats, G, n_order)
            return MatrixGroup(G.ambient, mats, domain=G.domain, order=n_order, check=False)
        sample_src._rng = rng
        for _ in range(8):
            q = _odd_part(sample_src.random_element())
            if not is_identity(q) and (N is None or not N.contains(q)):
                gens.append(q)
    raise BudgetExceeded("O^2 computation did not certify within the round budget")


def _normal_closure(gens, conj, n):
    gens = list(gens)
    if not gens:
        return gens
    while True:
        N = PermGroup(gens, n)
        added = False
        for x in list(gens):
            for c in conj:
                y = mul(mul(inv(c), x), c)
                if not N.contains(y):
                    gens.append(y)
                    N = PermGroup(gens, n)
                    added = True
        if not added:
            return gens


def _prune(mats, G: MatrixGroup, order: int):
    """Drop redundant generators while keeping the group order."""
    keep: list[np.ndarray] = []
    for m in mats:
        keep.append(m)
        H = MatrixGroup(G.ambient, keep, domain=G.domain, check=False)
        if H.order == order:
            return keep
    return keep


# -- pointwise stabilizers -------------------------------------------------------

def pointwise_stabilizer(ambient: Lattice, S: EmbeddedLattice) -> MatrixGroup:
    """All isometries of the even unimodular ``ambient`` fixing ``S`` vector by vector.

    Built as O0 of the orthogonal complement, extended by the identity on S.
    """
    if not (ambient.is_even and ambient.det == 1):
        raise PreconditionViolated("ambient must be even unimodular")
    S = saturate(S)
    C = orthogonal_complement(S)
    n = ambient.rank
    if C.rank == 0:
        return trivial_group(ambient)
    split = o0_split(C.lattice)
    P = la.int_matrix(np.vstack([S.basis, C.basis]).tolist(), n) if S.rank else C.basis
    Pinv = la.inverse(P)
    mats = []
    k = S.rank
    for h in split.kernel_gens:
        D = la.identity(n)
        for i in range(C.rank):
            for j in range(C.rank):
                D[k + i, k + j] = int(h[i, j])
        g = Pinv.dot(D).dot(P)
        if not la.is_integral(g):
            raise AssertionError("O0 element does not extend to the ambient lattice")
        g = la.int_matrix(g, n)
        if S.rank and not (S.basis.dot(g) == S.basis).all():
            raise AssertionError("extension does not fix S")
        mats.append(la.to_int64(g))
    return MatrixGroup(ambient, mats, order=split.kernel_order)


# -- frames versus S-lattices --------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str                       # "frame", "slattice" or "neither"
    frame: np.ndarray | None = None
    witness: np.ndarray | None = None


def frame_or_slattice(G: MatrixGroup, require_o2: bool = True, max_rank: int = 16) -> Verdict:
    """Decide whether ``G`` stabilizes a coordinate frame or fixes an S-lattice."""
    from .leech import class_representatives, s_lattice_check
    from .shortvec import _check_leech_like, coset_short_reps

    _check_leech_like(G.ambient)
    if require_o2 and G.gens and o2_subgroup(G).order != G.order:
        raise PreconditionViolated("group is not generated by its elements of odd order")
    F = invariant_lattice(G)
    if F.rank == 0:
        return Verdict("slattice")
    if F.rank > max_rank:
        raise BudgetExceeded(f"fixed lattice of rank {F.rank} has too many classes mod 2")
    for u in class_representatives(F):
        reps = coset_short_reps(G.ambient, u)
        if not reps.zero_class and reps.min_norm == 8:
            frame = reps.vectors.coords
            idx = VectorIndex(frame)
            for g in G.gens:
                if (idx.find(frame @ g) < 0).any():
                    raise AssertionError("group does not stabilize the frame of a fixed class")
            return Verdict("frame", frame=frame, witness=np.asarray(u))
    return Verdict("slattice") if s_lattice_check(F) else Verdict("neither")


def normalizes(g, G: MatrixGroup) -> bool:
    gi = la.to_int64(la.int_matrix(la.inverse(la.int_matrix(g.tolist(), G.rank)), G.rank))
    return all(G.contains(gi @ h @ g) for h in G.gens)


__all__ = [
    "MatrixGroup", "FixedData", "Verdict", "invariant_lattice", "coinvariant_lattice",
    "fixed_data", "group_order", "o2_subgroup", "pointwise_stabilizer", "frame_or_slattice",
    "restrict", "normalizes", "trivial_group", "vector_orbits", "preserves_gram",
]
