"""Finite quadratic spaces, discriminant forms and gluing of lattices."""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, InvalidGlue, NoAntiIsometry, NotEven, NotIntegral
from .lattice import Lattice, direct_sum

DEFAULT_ELEMENT_BUDGET = 10**6
DOUBLE_COSET_BUDGET = 10**7


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * math.floor(x / 2)


class FiniteQuadraticSpace:
    """Abelian group ``Z/d1 + ... + Z/dk`` with a quadratic form.

    ``qgram[i][j]`` holds b(g_i, g_j) mod 1 off the diagonal and q(g_i) mod 2
    on it, so that q(a) = sum a_i a_j qgram[i][j] mod 2.
    """

    def __init__(self, orders, qgram):
        self.orders = tuple(int(d) for d in orders)
        k = len(self.orders)
        if any(d <= 1 for d in self.orders):
            raise ValueError("orders must exceed 1")
        Q = la.rat_matrix(qgram, k) if k else la.rat_matrix([], 0)
        for i in range(k):
            for j in range(k):
                Q[i, j] = _mod2(Q[i, j]) if i == j else _mod1(Q[i, j])
        if not (Q == Q.T).all():
            raise ValueError("qgram must be symmetric")
        for i, d in enumerate(self.orders):
            if _mod2(d * d * Q[i, i]) != 0 or any(_mod1(d * Q[i, j]) != 0 for j in range(k)):
                raise ValueError("form values incompatible with the orders")
        Q.setflags(write=False)
        self.qgram = Q
        self._key = (self.orders, tuple(map(tuple, Q.tolist())))

    def __eq__(self, other):
        return isinstance(other, FiniteQuadraticSpace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<FiniteQuadraticSpace orders={list(self.orders)}>"

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return self.orders[-1] if self.orders else 1

    def negate(self) -> "FiniteQuadraticSpace":
        return FiniteQuadraticSpace(self.orders, -self.qgram)

    def generator(self, i: int) -> tuple:
        return tuple(int(j == i) for j in range(len(self.orders)))

    def elements(self) -> list[tuple]:
        return [tuple(int(x) for x in r) for r in self._coords]

    @cached_property
    def _coords(self) -> np.ndarray:
        k = len(self.orders)
        if k == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d) for d in self.orders], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    @cached_property
    def _qs(self) -> np.ndarray:
        """``2e * qgram`` as an integer matrix (e = exponent)."""
        k = len(self.orders)
        s = 2 * self.exponent
        return np.array([[int(self.qgram[i, j] * s) for j in range(k)] for i in range(k)],
                        dtype=np.int64).reshape(k, k)

    @cached_property
    def _q_scaled(self) -> np.ndarray:
        """q of every element times 2e, reduced mod 4e."""
        X = self._coords
        return np.einsum("ij,jk,ik->i", X, self._qs, X) % (4 * self.exponent)

    def q(self, a) -> Fraction:
        a = np.asarray(a, dtype=object)
        return _mod2(Fraction(a.dot(self.qgram).dot(a)))

    def b(self, a, c) -> Fraction:
        return _mod1(Fraction(np.asarray(a, dtype=object).dot(self.qgram).dot(np.asarray(c, dtype=object))))

    def index_of(self, X: np.ndarray) -> np.ndarray:
        """Mixed-radix index of coordinate rows (already reduced)."""
        idx = np.zeros(X.shape[0], dtype=np.int64)
        for i, d in enumerate(self.orders):
            idx = idx * d + X[:, i]
        return idx

    def reduce(self, X: np.ndarray) -> np.ndarray:
        return X % np.array(self.orders, dtype=np.int64) if self.orders else X

    def apply(self, images: np.ndarray, a) -> tuple:
        """Image of element ``a`` under the homomorphism with generator images ``images``."""
        if not len(a):
            return tuple(0 for _ in self.orders)
        v = (np.asarray(a, dtype=np.int64) @ images) % np.array(self.orders, dtype=np.int64)
        return tuple(int(x) for x in v)


@dataclass(frozen=True)
class FqsMap:
    """Homomorphism given by the images of the generators (rows)."""

    source: FiniteQuadraticSpace
    target: FiniteQuadraticSpace
    images: np.ndarray

    def __call__(self, a) -> tuple:
        return tuple(int(x) for x in self.target.reduce(np.asarray([a], np.int64).reshape(1, -1) @ self.images)[0]) \
            if self.source.orders else tuple(0 for _ in self.target.orders)

    def then(self, other: "FqsMap") -> "FqsMap":
        """``other`` after ``self``."""
        return FqsMap(self.source, other.target, other.target.reduce(self.images @ other.images))

    def key(self) -> bytes:
        return self.images.tobytes()


def identity_map(A: FiniteQuadraticSpace) -> FqsMap:
    return FqsMap(A, A, np.eye(len(A.orders), dtype=np.int64))


# -- discriminant forms -------------------------------------------------------

@dataclass(frozen=True)
class _DiscData:
    A: FiniteQuadraticSpace
    lift: np.ndarray      # RatMatrix, generator lifts in lattice coordinates
    G: np.ndarray         # object int Gram
    V: np.ndarray         # object, SNF right transform, kept columns only
    orders: tuple


@lru_cache(maxsize=512)
def _disc(L: Lattice) -> _DiscData:
    if not L.is_even:
        if not L.is_integral:
            raise NotIntegral("discriminant form needs an integral lattice")
        raise NotEven("discriminant form needs an even lattice")
    n = L.rank
    if n == 0:
        A = FiniteQuadraticSpace((), la.rat_matrix([], 0))
        return _DiscData(A, la.rat_matrix([], 0), la.int_matrix([], 0), la.int_matrix([], 0), ())
    G = L.int_gram
    D, U, V = la.snf(G)
    keep = [i for i in range(n) if D[i, i] != 1]
    orders = tuple(int(D[i, i]) for i in keep)
    Vinv = la.inverse(V)
    Ginv = la.inverse(G)
    lift = la.rat_matrix([list(Vinv[i].dot(Ginv)) for i in keep], n) if keep else la.rat_matrix([], n)
    k = len(keep)
    Q = la.rat_matrix([[Fraction(lift[i].dot(L.gram).dot(lift[j])) for j in range(k)] for i in range(k)], k) \
        if k else la.rat_matrix([], 0)
    A = FiniteQuadraticSpace(orders, Q)
    Vk = la.int_matrix([[V[r, c] for c in keep] for r in range(n)], k)
    return _DiscData(A, lift, G, Vk, orders)


def discriminant_form(L: Lattice) -> tuple[FiniteQuadraticSpace, np.ndarray]:
    """``(A_L, lift)``; row i of ``lift`` is a dual vector mapping to generator i."""
    d = _disc(L)
    return d.A, d.lift


def dual_coordinates(L: Lattice, y) -> tuple:
    """Coordinates in A_L of the dual vector ``y`` (lattice coordinates)."""
    d = _disc(L)
    if not d.orders:
        return ()
    z = np.asarray([Fraction(x) for x in y], dtype=object).dot(d.G)
    if not la.is_integral(z):
        raise ValueError("vector is not in the dual lattice")
    c = z.dot(d.V)
    return tuple(int(Fraction(c[i])) % m for i, m in enumerate(d.orders))


def discriminant_action(L: Lattice, g: np.ndarray) -> np.ndarray:
    """Generator images (rows) of the map induced on A_L by the isometry ``g``."""
    d = _disc(L)
    k = len(d.orders)
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    go = np.asarray(g).astype(object)
    rows = [dual_coordinates(L, d.lift[i].dot(go)) for i in range(k)]
    return np.array(rows, dtype=np.int64).reshape(k, k)


def induced_map(L: Lattice, g: np.ndarray) -> FqsMap:
    A = _disc(L).A
    return FqsMap(A, A, discriminant_action(L, g))


# -- Gauss sums --------------------------------------------------------------------

def _gauss_sum(A: FiniteQuadraticSpace) -> complex:
    """Sum of exp(pi i q(a)), with terms grouped by q so at most 4e roots are evaluated."""
    e = A.exponent
    counts = Counter(int(v) % (4 * e) for v in A._q_scaled)  # q * 2e mod 4e
    re = math.fsum(c * math.cos(math.pi * v / (2 * e)) for v, c in counts.items())
    im = math.fsum(c * math.sin(math.pi * v / (2 * e)) for v, c in counts.items())
    return complex(re, im)


def milgram_signature(A: FiniteQuadraticSpace) -> int:
    """The residue s mod 8 with Gauss sum sqrt|A| * exp(2 pi i s / 8).

    The sum is evaluated in floating point.  The eight candidates are at least
    0.76 sqrt|A| apart while the rounding error is below |A| * 1e-14, so the
    nearest candidate is the exact answer; a margin check guards the claim.
    """
    if A.size == 1:
        return 0
    g = _gauss_sum(A)
    r = math.sqrt(A.size)
    dist = [abs(g - r * cmath.exp(2j * math.pi * s / 8)) for s in range(8)]
    s = min(range(8), key=dist.__getitem__)
    if dist[s] > 0.1 * r:
        raise ValueError("Gauss sum has the wrong absolute value: the form is degenerate")
    return s


# -- isometries of finite quadratic spaces ----------------------------------------

def _isometries(A: FiniteQuadraticSpace, B: FiniteQuadraticSpace, sign: int, first: bool,
                budget: int):
    """Generator-image matrices of maps A -> B with q_B(f a) = sign * q_A(a)."""
    if A.orders != B.orders:
        return []
    k = len(A.orders)
    if k == 0:
        return [np.zeros((0, 0), dtype=np.int64)]
    if A.size > budget:
        raise BudgetExceeded(f"|A| = {A.size} exceeds element budget {budget}")
    e = B.exponent
    XB = B._coords
    qB = B._q_scaled
    qsB = B._qs
    ordB = np.array(B.orders, dtype=np.int64)
    # scaled targets from A (same exponent since the orders agree)
    QA = A._qs
    candidates_by_level = []
    for i, d in enumerate(A.orders):
        killed = ((XB * d) % ordB == 0).all(axis=1)
        want_q = (sign * int(QA[i, i])) % (4 * e)
        candidates_by_level.append(np.nonzero(killed & (qB == want_q))[0])
    found: list[np.ndarray] = []
    images = np.zeros((k, k), dtype=np.int64)

    def rec(i):
        if i == k:
            found.append(images.copy())
            if len(found) > budget:
                raise BudgetExceeded("orthogonal group larger than budget")
            return first
        cand = candidates_by_level[i]
        if i:
            # b(h, h_j) scaled by 2e, compared mod 2e
            prev = images[:i]
            ips = (XB[cand] @ qsB @ prev.T) % (2 * e)
            want = (sign * QA[i, :i]) % (2 * e)
            cand = cand[(ips == want).all(axis=1)]
        for c in cand:
            images[i] = XB[c]
            if rec(i + 1):
                return True
        return False

    rec(0)
    return found


def orthogonal_group_A(A: FiniteQuadraticSpace, element_budget: int = DEFAULT_ELEMENT_BUDGET):
    """``(gens, order)`` of O(A), found by enumerating all isometries."""
    elems = _isometries(A, A, 1, False, element_budget)
    maps = [FqsMap(A, A, m) for m in elems]
    return _generating_subset(A, maps), len(maps)


def orthogonal_group_elements(A: FiniteQuadraticSpace, element_budget: int = DEFAULT_ELEMENT_BUDGET):
    return [FqsMap(A, A, m) for m in _isometries(A, A, 1, False, element_budget)]


def _generating_subset(A, maps: list[FqsMap]) -> list[FqsMap]:
    if len(maps) <= 1:
        return []
    seen = {identity_map(A).key()}
    gens: list[FqsMap] = []
    for m in maps:
        if m.key() in seen:
            continue
        gens.append(m)
        # closure of the current generators
        frontier = [identity_map(A)]
        seen = {frontier[0].key()}
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x.then(g)
                    if y.key() not in seen:
                        seen.add(y.key())
                        nxt.append(y)
            frontier = nxt
        if len(seen) == len(maps):
            break
    return gens


def anti_isometry(A: FiniteQuadraticSpace, B: FiniteQuadraticSpace) -> FqsMap | None:
    """An isomorphism ``i`` with q_B(i a) = -q_A(a), or None."""
    if A.orders != B.orders:
        return None
    found = _isometries(A, B, -1, True, DEFAULT_ELEMENT_BUDGET)
    return FqsMap(A, B, found[0]) if found else None


# -- gluing ------------------------------------------------------------------

@dataclass(frozen=True)
class GlueClass:
    """Graph ``{(a, j(a))}`` of an anti-isometry ``j: A_K -> A_Kp``."""

    glue: FqsMap

    @property
    def generators(self) -> np.ndarray:
        """Rows (g_i, j(g_i)) over A_K + A_Kp."""
        A = self.glue.source
        k = len(A.orders)
        return np.hstack([np.eye(k, dtype=np.int64), self.glue.images]) if k else \
            np.zeros((0, len(self.glue.target.orders)), np.int64)

    @property
    def size(self) -> int:
        return self.glue.source.size


def _obar_maps(L: Lattice) -> list[FqsMap]:
    from .isometry import automorphism_group

    return [induced_map(L, g) for g in automorphism_group(L).gens]


def extension_classes(K: Lattice, Kp: Lattice, budget: int = DOUBLE_COSET_BUDGET) -> list[GlueClass]:
    """One glue per double coset Obar(K) \\ O(A_K) / i* Obar(Kp).

    Representatives are the least elements (enumeration order) of each class.
    """
    AK, _ = discriminant_form(K)
    AKp, _ = discriminant_form(Kp)
    i = anti_isometry(AK, AKp)
    if i is None:
        raise NoAntiIsometry("discriminant forms are not anti-isometric")
    if AK.size == 1:
        return [GlueClass(i)]
    elems = orthogonal_group_elements(AK, element_budget=budget)
    pos = {m.key(): t for t, m in enumerate(elems)}
    inv_i = _inverse(i)
    left = _obar_maps(K)                     # x -> x then h   (Obar(K) acting on A_K)
    right = [i.then(h).then(inv_i) for h in _obar_maps(Kp)]  # i* Obar(Kp) inside O(A_K)
    parent = list(range(len(elems)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, x in enumerate(elems):
        for h in left:
            u = pos[h.then(x).key()]
            a, b = find(t), find(u)
            if a != b:
                parent[max(a, b)] = min(a, b)
        for h in right:
            u = pos[x.then(h).key()]
            a, b = find(t), find(u)
            if a != b:
                parent[max(a, b)] = min(a, b)
    reps = sorted({find(t) for t in range(len(elems))})
    return [GlueClass(elems[r].then(i)) for r in reps]


def _inverse(f: FqsMap) -> FqsMap:
    A, B = f.source, f.target
    # find preimages of B's generators by scanning A
    X = A._coords
    imgs = B.reduce(X @ f.images)
    idx = B.index_of(imgs)
    where = {int(v): r for r, v in enumerate(idx)}
    rows = [X[where[int(B.index_of(np.array([B.generator(j)]))[0])]] for j in range(len(B.orders))]
    return FqsMap(B, A, np.array(rows, dtype=np.int64).reshape(len(B.orders), len(A.orders)))


def glue_basis(K: Lattice, Kp: Lattice, c: GlueClass) -> np.ndarray:
    """Rational basis (rows, coordinates of K + Kp) of the glued overlattice."""
    _, liftK = discriminant_form(K)
    _, liftKp = discriminant_form(Kp)
    n1, n2 = K.rank, Kp.rank
    rows = [[Fraction(int(i == j)) for j in range(n1 + n2)] for i in range(n1 + n2)]
    imgs = c.glue.images
    for t in range(liftK.shape[0]):
        right = imgs[t].astype(object).dot(liftKp) if liftKp.shape[0] else [Fraction(0)] * n2
        rows.append(list(liftK[t]) + list(right))
    return _span_basis(rows, n1 + n2)


def _span_basis(rows, n) -> np.ndarray:
    M = la.rat_matrix(rows, n)
    s = la.denominator(M)
    H = la.hnf_basis(la.int_matrix(M * s, n), n)
    return la.rat_matrix(H, n) / s


def overlattice_from_glue(K: Lattice, Kp: Lattice, c: GlueClass) -> Lattice:
    """The even unimodular lattice obtained by adjoining the glue to K + Kp."""
    if c.glue.source != discriminant_form(K)[0] or c.glue.target != discriminant_form(Kp)[0]:
        raise InvalidGlue("glue does not match the discriminant forms")
    B = glue_basis(K, Kp, c)
    S = direct_sum(K, Kp)
    G = B.dot(S.gram).dot(B.T)
    L = Lattice(G, check=False)
    if not (L.is_even and L.det == 1):
        raise InvalidGlue("glued lattice is not even unimodular")
    return L


def overlattice(L: Lattice, vectors) -> Lattice:
    """Integral lattice spanned by ``L`` and rational ``vectors`` (lattice coordinates)."""
    n = L.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)] + \
        [[Fraction(x) for x in v] for v in vectors]
    B = _span_basis(rows, n)
    G = B.dot(L.gram).dot(B.T)
    M = Lattice(G, check=False)
    if not M.is_integral:
        raise InvalidGlue("adjoined vectors do not give an integral lattice")
    return M
