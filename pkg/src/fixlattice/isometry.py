"""Automorphism groups and isometry tests by vector backtracking.

A lattice is represented through a finite generating set ``V`` of short
vectors.  An isometry is determined by the images of a basis chosen inside
``V``; images are searched among vectors with the same colour (an iterated
inner-product fingerprint) and the same inner products with the images
already fixed.  The automorphism group is built level by level as a
stabilizer chain, so its order is the product of the basic orbit lengths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded
from .lattice import Lattice
from .perm import PermGroup, orbit_mask
from .shortvec import _reduced, short_vectors

COLOUR_DEPTH = 2
_COLOUR_LIMIT = 4000
DEFAULT_NODE_BUDGET = 5_000_000


class VectorIndex:
    """Row lookup for an integer matrix (rows assumed distinct)."""

    def __init__(self, V: np.ndarray):
        self.V = V
        rng = np.random.default_rng(7)
        self.w = rng.integers(1, 2**31, size=V.shape[1], dtype=np.int64)
        keys = V @ self.w
        self.order = np.argsort(keys, kind="stable")
        self.keys = keys[self.order]

    def find(self, X: np.ndarray) -> np.ndarray:
        """Indices of the rows of ``X`` in ``V``; -1 where absent."""
        X = np.atleast_2d(X)
        k = X @ self.w
        pos = np.searchsorted(self.keys, k)
        out = np.full(X.shape[0], -1, dtype=np.int64)
        for t in range(X.shape[0]):
            p = pos[t]
            while p < len(self.keys) and self.keys[p] == k[t]:
                cand = self.order[p]
                if (self.V[cand] == X[t]).all():
                    out[t] = cand
                    break
                p += 1
        return out


def _spans(V: np.ndarray, n: int) -> bool:
    """Do the integer rows of ``V`` generate ``Z^n``?"""
    if V.shape[0] == 0:
        return n == 0
    if np.linalg.matrix_rank(V.astype(float)) < n:
        return False
    rows: list[np.ndarray] = []
    Vf = V.astype(float)
    for i in range(V.shape[0]):
        cand = rows + [Vf[i]]
        if np.linalg.matrix_rank(np.array(cand)) == len(cand):
            rows.append(Vf[i])
            if len(rows) == n:
                break
    B = la.hnf_basis(la.int_matrix(np.rint(np.array(rows)).astype(np.int64).tolist(), n), n)
    while True:
        d = abs(int(la.det(B)))
        if d == 1:
            return True
        adj = la.int_matrix(la.inverse(B) * d, n)
        R = (V.astype(object).dot(adj)) % d
        bad = np.nonzero([any(r) for r in R])[0]
        if bad.size == 0:
            return False
        B = la.hnf_basis(np.vstack([B, la.int_matrix([V[bad[0]].tolist()], n)]), n)


def _colours(V: np.ndarray, G: np.ndarray, depth: int) -> np.ndarray:
    """Integer colour per vector: norm refined by inner-product histograms."""
    norms = np.einsum("ij,jk,ik->i", V, G, V)
    if V.shape[0] > _COLOUR_LIMIT or depth == 0:
        return norms
    VG = V @ G
    ip = VG @ V.T
    col = norms.copy()
    for _ in range(depth):
        ids = {}
        new = np.empty_like(col)
        # combine (inner product, colour of partner) into one key per pair
        _, cinv = np.unique(col, return_inverse=True)
        key = ip * (int(cinv.max()) + 1) + cinv[None, :]
        for i in range(V.shape[0]):
            vals, cnt = np.unique(key[i], return_counts=True)
            sig = (int(col[i]), tuple(vals.tolist()), tuple(cnt.tolist()))
            new[i] = ids.setdefault(sig, hash(sig))
        col = new
    return col


class _Context:
    """Short generating vectors of a lattice and the data used to search them."""

    def __init__(self, L: Lattice, bound: Fraction | None = None, depth: int = COLOUR_DEPTH):
        self.L = L
        self.n = L.rank
        A, self.scale = L.scaled_gram
        self.A = la.to_int64(A)
        if bound is None:
            bound = self._generating_bound()
        self.bound = Fraction(bound)
        vl = short_vectors(L, self.bound)
        self.V = np.ascontiguousarray(vl.coords)
        self.norms = vl.scaled_norms
        self.VG = self.V @ self.A
        self.index = VectorIndex(self.V)
        self.colour = _colours(self.V, self.A, depth)

    def _generating_bound(self) -> Fraction:
        red = _reduced(self.L)
        top = Fraction(int(red.Gi.diagonal().max()), red.scale)
        vl = short_vectors(self.L, top)
        for q in np.unique(vl.scaled_norms):
            m = Fraction(int(q), vl.scale)
            if _spans(vl.coords[vl.scaled_norms <= q], self.n):
                return m
        return top

    def class_sizes(self) -> dict:
        vals, cnt = np.unique(self.colour, return_counts=True)
        return dict(zip(vals.tolist(), cnt.tolist()))

    @cached_property
    def basis(self) -> tuple[np.ndarray, bool]:
        """Indices of basis vectors in ``V`` and whether they form a Z-basis."""
        sizes = self.class_sizes()
        order = sorted(range(len(self.V)), key=lambda i: (sizes[self.colour[i]], int(self.norms[i]), i))
        chosen: list[int] = []
        for i in order:
            rows = [self.V[j].tolist() for j in chosen] + [self.V[i].tolist()]
            ed = la.elementary_divisors(la.int_matrix(rows, self.n))
            if len(ed) == len(rows) and all(d == 1 for d in ed):
                chosen.append(i)
                if len(chosen) == self.n:
                    return np.array(chosen), True
        # no primitive completion found greedily: any independent subset will do
        chosen = []
        for i in order:
            rows = [self.V[j] for j in chosen] + [self.V[i]]
            if np.linalg.matrix_rank(np.array(rows, dtype=float)) == len(rows):
                chosen.append(i)
                if len(chosen) == self.n:
                    break
        return np.array(chosen), False

    @cached_property
    def basis_inverse(self):
        idx, unimodular = self.basis
        Binv = la.inverse(la.int_matrix(self.V[idx].tolist(), self.n))
        if unimodular:
            return la.to_int64(la.int_matrix(Binv, self.n)), True
        return Binv, False

    def matrix_from_images(self, images: np.ndarray) -> np.ndarray | None:
        """``g`` with ``B g = images`` (rows); None if not integral."""
        Binv, unimodular = self.basis_inverse
        if unimodular:
            return Binv @ images
        g = Binv.dot(la.int_matrix(images.tolist(), images.shape[1]))
        if not la.is_integral(g):
            return None
        return la.to_int64(la.int_matrix(g, images.shape[1]))

    def perm_of(self, g: np.ndarray) -> np.ndarray:
        p = self.index.find(self.V @ g)
        if (p < 0).any():
            raise AssertionError("matrix does not preserve the short-vector set")
        return p

    def matrix_of_perm(self, p: np.ndarray) -> np.ndarray:
        idx, _ = self.basis
        g = self.matrix_from_images(self.V[p[idx]])
        assert g is not None
        return g


class _Search:
    """Depth-first search for basis images in a target context."""

    def __init__(self, src: _Context, dst: _Context, node_budget: int):
        self.src, self.dst = src, dst
        idx, _ = src.basis
        self.bidx = idx
        B = src.V[idx]
        self.gram_b = B @ src.A @ B.T
        self.bcol = src.colour[idx]
        self.classes = {c: np.nonzero(dst.colour == c)[0] for c in np.unique(self.bcol)}
        self.budget = node_budget
        self.nodes = 0

    def candidates(self, level: int, images: list[int]) -> np.ndarray:
        cls = self.classes.get(self.bcol[level])
        if cls is None or cls.size == 0:
            return np.zeros(0, dtype=np.int64)
        if not images:
            return cls
        dst = self.dst
        P = dst.V[images]  # previous images
        ips = dst.VG[cls] @ P.T
        ok = (ips == self.gram_b[level, : len(images)]).all(axis=1)
        return cls[ok]

    def extend(self, images: list[int], cands: list[np.ndarray] | None = None):
        """Complete ``images`` to a full isometry, or None.

        ``cands[j]`` holds the images still possible for basis vector j given
        the choices made so far; it is narrowed after every choice.
        """
        n = self.src.n
        level = len(images)
        if level == n:
            return self.src.matrix_from_images(self.dst.V[images])
        if cands is None:
            cands = [self.candidates(j, images) for j in range(n)]
        dst = self.dst
        for c in cands[level]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded("isometry search node budget exhausted")
            vc = dst.V[c]
            narrowed = cands[: level + 1]
            for j in range(level + 1, n):
                cj = cands[j]
                cj = cj[dst.VG[cj] @ vc == self.gram_b[j, level]]
                if cj.size == 0:
                    break
                narrowed.append(cj)
            else:
                g = self.extend(images + [int(c)], narrowed)
                if g is not None:
                    return g
        return None


@dataclass
class IsometryGroup:
    """O(L) given by generators (integer matrices acting on row coordinates)."""

    lattice: Lattice
    gens: list[np.ndarray]
    order: int
    orbit_lengths: list[int] = field(default_factory=list)

    @cached_property
    def context(self) -> _Context:
        return _context(self.lattice)

    @cached_property
    def perm_group(self) -> PermGroup:
        ctx = self.context
        perms = [ctx.perm_of(g) for g in self.gens]
        idx, _ = ctx.basis
        return PermGroup(perms, len(ctx.V), base_prefix=[int(i) for i in idx])


@lru_cache(maxsize=256)
def _context(L: Lattice) -> _Context:
    return _Context(L)


def _check_gram(g: np.ndarray, A: np.ndarray, A2: np.ndarray | None = None) -> None:
    go = g.astype(object)
    rhs = A if A2 is None else A2
    if not (go.dot(rhs.astype(object)).dot(go.T) == A.astype(object)).all():
        raise AssertionError("map does not preserve the Gram matrix")


@lru_cache(maxsize=256)
def automorphism_group(L: Lattice, node_budget: int = DEFAULT_NODE_BUDGET) -> IsometryGroup:
    """Generators and exact order of O(L)."""
    n = L.rank
    if n == 0:
        return IsometryGroup(L, [], 1, [])
    ctx = _context(L)
    srch = _Search(ctx, ctx, node_budget)
    bidx = [int(i) for i in srch.bidx]
    gens: list[np.ndarray] = []
    gen_level: list[int] = []
    perms: list[np.ndarray] = []
    lengths = [1] * n
    N = len(ctx.V)
    for i in reversed(range(n)):
        level_perms = [p for p, l in zip(perms, gen_level) if l >= i]
        orbit = orbit_mask(level_perms, [bidx[i]], N)
        excluded = np.zeros(N, dtype=bool)
        for c in srch.candidates(i, bidx[:i]):
            c = int(c)
            if orbit[c] or excluded[c]:
                continue
            g = srch.extend(bidx[:i] + [c])
            if g is None:
                excluded |= orbit_mask(level_perms, [c], N)
                continue
            _check_gram(g, ctx.A)
            p = ctx.perm_of(g)
            gens.append(g)
            gen_level.append(i)
            perms.append(p)
            level_perms.append(p)
            orbit = orbit_mask(level_perms, [bidx[i]], N)
        lengths[i] = int(orbit.sum())
    return IsometryGroup(L, gens, math.prod(lengths), lengths)


def _fingerprint(L: Lattice, bound) -> tuple:
    counts = [(q, c) for q, c in _counts(L, bound)]
    return (L.rank, L.det, tuple(counts))


def _counts(L, bound):
    vl = short_vectors(L, bound)
    vals, cnt = np.unique(vl.scaled_norms, return_counts=True)
    return [(Fraction(int(v), vl.scale), int(c)) for v, c in zip(vals, cnt)]


def is_isometric(L1: Lattice, L2: Lattice, node_budget: int = DEFAULT_NODE_BUDGET):
    """An integer matrix ``T`` with ``T G2 T^t = G1``, or None."""
    if L1.rank != L2.rank or L1.det != L2.det:
        return None
    if L1.rank == 0:
        return la.to_int64(la.identity(0)).reshape(0, 0)
    if L1 == L2:
        return np.eye(L1.rank, dtype=np.int64)
    if la.denominator(L1.gram) != la.denominator(L2.gram):
        return None
    c1 = _context(L1)
    if _fingerprint(L1, c1.bound) != _fingerprint(L2, c1.bound):
        return None
    c2 = _Context(L2, bound=c1.bound)
    if c1.class_sizes() != c2.class_sizes():
        return None
    srch = _Search(c1, c2, node_budget)
    T = srch.extend([])
    if T is None:
        return None
    _check_gram(T, c1.A, c2.A)
    return T


def pair_is_isometric(p1, p2) -> bool:
    return all(is_isometric(a, b) is not None for a, b in zip(p1, p2))


@dataclass
class O0Split:
    """O(L) together with the kernel O0(L) of its action on the discriminant form."""

    full: IsometryGroup
    kernel_gens: list[np.ndarray]
    obar_order: int

    @property
    def kernel_order(self) -> int:
        return self.full.order // self.obar_order


@lru_cache(maxsize=256)
def o0_split(L: Lattice) -> O0Split:
    from .fqs import discriminant_action, discriminant_form

    full = automorphism_group(L)
    A, _ = discriminant_form(L)
    if A.size == 1 or L.rank == 0:
        return O0Split(full, list(full.gens), 1)
    ctx = full.context
    N = len(ctx.V)
    elems = A.elements()
    pos = {e: k for k, e in enumerate(elems)}
    # combined action on short vectors and on the elements of A
    perms = []
    for g in full.gens:
        pv = ctx.perm_of(g)
        img = discriminant_action(L, g)
        pa = np.array([pos[A.apply(img, e)] for e in elems], dtype=np.int64) + N
        perms.append(np.concatenate([pv, pa]))
    prefix = [N + pos[A.generator(k)] for k in range(len(A.orders))]
    idx, _ = ctx.basis
    H = PermGroup(perms, N + len(elems), base_prefix=prefix + [int(i) for i in idx])
    assert H.order() == full.order
    k = len(prefix)
    kernel = [ctx.matrix_of_perm(p[:N]) for p in H.stabilizer_gens(k)]
    obar = math.prod(H.orbit_sizes()[:k])
    return O0Split(full, kernel, obar)
