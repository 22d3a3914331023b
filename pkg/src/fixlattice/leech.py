"""Golay code, Leech lattice, the monomial group 2^12:M24 and S-lattices.

Coordinates: the classical construction uses vectors of Z^24 with inner
product x.y/8.  Only the lattice basis of that construction is kept, the
Gram matrix of the lattice itself is integral.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, NotSLattice
from .groups import MatrixGroup, invariant_lattice
from .lattice import EmbeddedLattice, Lattice
from .perm import PermGroup, orbit_mask
from .shortvec import coset_short_reps

# Generator rows of the binary lexicode of length 24 and distance 8 (bit i is
# coordinate i).  Greedy construction over integers in increasing order.
GOLAY_GENERATORS = (
    0xFF, 0xF0F, 0x3333, 0x5555, 0x9669, 0x30356,
    0x50563, 0x9063A, 0x111178, 0x21121D, 0x41144E, 0x811724,
)

N = 24
FULL = (1 << N) - 1


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> list[int]:
    return [i for i in range(N) if x >> i & 1]


@dataclass(frozen=True)
class BinaryCode:
    """Binary linear code of length 24 given by generator bitmasks."""

    generators: tuple[int, ...]
    length: int = N

    @cached_property
    def words(self) -> np.ndarray:
        w = np.zeros(1, dtype=np.int64)
        for g in self.generators:
            w = np.concatenate([w, w ^ g])
        return np.sort(w)

    @cached_property
    def _wordset(self) -> frozenset:
        return frozenset(int(x) for x in self.words)

    def contains(self, mask: int) -> bool:
        return mask in self._wordset

    def weight_distribution(self) -> dict[int, int]:
        ws = [popcount(int(x)) for x in self.words]
        return dict(sorted((w, ws.count(w)) for w in set(ws)))

    def is_self_dual(self) -> bool:
        if len(self.words) != 1 << (self.length // 2):
            return False
        return all(popcount(a & b) % 2 == 0 for a in self.generators for b in self.generators)

    @cached_property
    def octads(self) -> list[int]:
        return [int(x) for x in self.words if popcount(int(x)) == 8]

    @cached_property
    def five_sets(self) -> dict[int, int]:
        """Each 5-subset (mask) to the unique octad containing it."""
        out = {}
        for o in self.octads:
            for c in itertools.combinations(bits(o), 5):
                out[sum(1 << i for i in c)] = o
        return out

    def sextet(self, tetrad: int) -> list[int]:
        """The six tetrads (masks) any two of which form an octad."""
        tets = {tetrad}
        for p in range(N):
            if not tetrad >> p & 1:
                tets.add(self.five_sets[tetrad | 1 << p] & ~tetrad)
        return sorted(tets)


def build_golay() -> BinaryCode:
    return BinaryCode(GOLAY_GENERATORS)


# -- automorphisms of the code ---------------------------------------------------

class _PermSolver:
    """Backtracking over point images, pruned by the Steiner system of octads."""

    def __init__(self, code: BinaryCode):
        self.code = code
        self.five = code.five_sets

    def solve(self, fixed: list[tuple[int, int]]):
        img = [-1] * N
        dom = [FULL] * N
        return self._search(img, dom, fixed)

    def propagate(self, fixed: list[tuple[int, int]]):
        """Domains after assigning ``fixed``; None if inconsistent."""
        img = [-1] * N
        dom = [FULL] * N
        for p, c in fixed:
            if not self._assign(img, dom, p, c):
                return None
        return img, dom

    def _assign(self, img, dom, p, c) -> bool:
        queue = [(p, c)]
        while queue:
            p, c = queue.pop()
            if img[p] == c:
                continue
            if img[p] != -1 or not dom[p] >> c & 1:
                return False
            img[p] = c
            dom[p] = 1 << c
            for q in range(N):
                if q != p and dom[q] >> c & 1:
                    dom[q] &= ~(1 << c)
                    if dom[q] == 0:
                        return False
            others = [q for q in range(N) if img[q] != -1 and q != p]
            for four in itertools.combinations(others, 4):
                src = (1 << p) | sum(1 << q for q in four)
                dst = (1 << c) | sum(1 << img[q] for q in four)
                o, o2 = self.five[src], self.five.get(dst)
                if o2 is None:
                    return False
                for q in range(N):
                    allowed = o2 if o >> q & 1 else FULL & ~o2
                    new = dom[q] & allowed
                    if new != dom[q]:
                        if new == 0:
                            return False
                        dom[q] = new
                        if img[q] == -1 and new & (new - 1) == 0:
                            queue.append((q, new.bit_length() - 1))
        return True

    def _search(self, img, dom, todo):
        img, dom = img[:], dom[:]
        for p, c in todo:
            if not self._assign(img, dom, p, c):
                return None
        free = [q for q in range(N) if img[q] == -1]
        if not free:
            perm = np.array(img, dtype=np.int64)
            return perm if self._preserves(perm) else None
        p = min(free, key=lambda q: (popcount(dom[q]), q))
        for c in bits(dom[p]):
            r = self._search(img, dom, [(p, c)])
            if r is not None:
                return r
        return None

    def _preserves(self, perm) -> bool:
        for g in self.code.generators:
            if not self.code.contains(sum(1 << int(perm[i]) for i in bits(g))):
                return False
        return True


@dataclass
class CodeAutomorphisms:
    generators: list[np.ndarray]
    order: int
    group: PermGroup


@lru_cache(maxsize=4)
def code_automorphisms(code: BinaryCode) -> CodeAutomorphisms:
    """Generators and order of the permutation automorphism group of the code.

    Built level by level like a stabilizer chain: for base points 0, 1, ...
    every image not yet in the known orbit is tried with the earlier points
    fixed; the order is then certified by Schreier-Sims on the 24 points.
    """
    solver = _PermSolver(code)
    base: list[int] = []
    while True:
        img, _ = solver.propagate([(q, q) for q in base])
        free = [q for q in range(N) if img[q] == -1]
        if not free:
            break
        base.append(free[0])
    gens: list[np.ndarray] = []
    levels: list[int] = []
    for level in reversed(range(len(base))):
        prefix = [(q, q) for q in base[:level]]
        _, dom = solver.propagate(prefix)
        lv = [g for g, l in zip(gens, levels) if l >= level]
        orbit = orbit_mask(lv, [base[level]], N)
        excluded = np.zeros(N, dtype=bool)
        for c in bits(dom[base[level]]):
            if orbit[c] or excluded[c]:
                continue
            g = solver.solve(prefix + [(base[level], c)])
            if g is None:
                excluded |= orbit_mask(lv, [c], N)
                continue
            gens.append(g)
            levels.append(level)
            lv.append(g)
            orbit = orbit_mask(lv, [base[level]], N)
    G = PermGroup(gens, N)
    return CodeAutomorphisms(gens, G.order(), G)


# -- the Leech lattice -----------------------------------------------------------

@dataclass
class LeechModel:
    """The Leech lattice with its basis in the scaled coordinates (norm = x.x/8)."""

    code: BinaryCode
    coords: np.ndarray      # object int matrix, rows = basis vectors in Z^24
    lattice: Lattice

    @cached_property
    def coords_inverse(self) -> np.ndarray:
        return la.inverse(self.coords)

    def to_coords(self, x) -> np.ndarray:
        return np.asarray(x, dtype=object).dot(self.coords)

    def from_coords(self, y) -> np.ndarray:
        c = np.asarray([Fraction(v) for v in y], dtype=object).dot(self.coords_inverse)
        if not la.is_integral(c):
            raise ValueError("vector is not in the lattice")
        return np.array([int(v) for v in c], dtype=np.int64)

    def matrix_from_coords(self, M) -> np.ndarray:
        """Lattice matrix of the coordinate map ``y -> y M``."""
        Mo = la.rat_matrix(np.asarray(M, dtype=object).tolist(), N)
        g = self.coords.dot(Mo).dot(self.coords_inverse)
        if not la.is_integral(g):
            raise ValueError("coordinate map does not preserve the lattice")
        return la.to_int64(la.int_matrix(g, N))

    @cached_property
    def frame(self) -> np.ndarray:
        """The standard frame: +-8 e_i in lattice coordinates."""
        rows = []
        for i in range(N):
            for s in (8, -8):
                y = [0] * N
                y[i] = s
                rows.append(self.from_coords(y))
        return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=1)
def leech_model() -> LeechModel:
    code = build_golay()
    span = []
    for g in code.generators:
        span.append([2 * (g >> i & 1) for i in range(N)])
    for i in range(N):
        for j in range(i + 1, N):
            for s in (1, -1):
                v = [0] * N
                v[i], v[j] = 4, 4 * s
                span.append(v)
    span.append([-3] + [1] * (N - 1))
    B = la.hnf_basis(la.int_matrix(span, N), N)
    G = la.rat_matrix(B.dot(B.T), N) / 8
    G2, T = la.lll_reduce(G)
    coords = T.dot(B)
    L = Lattice(G2, name="Leech")
    return LeechModel(code, coords, L)


def build_leech() -> Lattice:
    return leech_model().lattice


def sign_change(mask: int, model: LeechModel | None = None) -> np.ndarray:
    """Lattice matrix of the sign change on the coordinates of a codeword."""
    model = model or leech_model()
    if not model.code.contains(mask):
        raise ValueError("sign changes are only allowed on codewords")
    M = np.diag([(-1 if mask >> i & 1 else 1) for i in range(N)]).astype(object)
    return model.matrix_from_coords(M)


def permutation_matrix(perm: np.ndarray, model: LeechModel | None = None) -> np.ndarray:
    """Lattice matrix of the coordinate permutation ``e_i -> e_perm[i]``."""
    model = model or leech_model()
    M = np.zeros((N, N), dtype=object)
    for i in range(N):
        M[i, int(perm[i])] = 1
    return model.matrix_from_coords(M)


@lru_cache(maxsize=1)
def monomial_group() -> MatrixGroup:
    """2^12:M24 as a matrix group, with the standard frame as permutation domain."""
    model = leech_model()
    aut = code_automorphisms(model.code)
    gens = [permutation_matrix(p, model) for p in aut.generators]
    gens.append(sign_change(model.code.octads[0], model))
    G = MatrixGroup(model.lattice, gens, domain=model.frame, name="2^12:M24")
    frame = {r.tobytes() for r in model.frame}
    for g in G.gens:
        if {r.tobytes() for r in model.frame @ g} != frame:
            raise AssertionError("monomial generator does not preserve the frame")
    return G


@lru_cache(maxsize=1)
def extra_generator() -> np.ndarray:
    """A non-monomial isometry: +-(J - 2I)/2 on the tetrads of a sextet.

    The signs of the six blocks are chosen (first in lexicographic order) so
    that the map preserves the lattice; this is verified, not assumed.
    """
    model = leech_model()
    tets = model.code.sextet(0b1111)
    H = [[Fraction(1, 2) - (i == j) for j in range(4)] for i in range(4)]
    for signs in itertools.product((1, -1), repeat=6):
        M = np.zeros((N, N), dtype=object)
        for t, s in zip(tets, signs):
            pts = bits(t)
            for a, i in enumerate(pts):
                for b, j in enumerate(pts):
                    M[i, j] = s * H[a][b]
        # an odd number of minus blocks is needed; try them all anyway
        try:
            g = model.matrix_from_coords(M)
        except ValueError:
            continue
        A = model.lattice.gram
        if (g.astype(object).dot(A).dot(g.T.astype(object)) == A).all():
            return g
    raise AssertionError("no sign pattern gives a lattice automorphism")


def conway_generators() -> list[np.ndarray]:
    return list(monomial_group().gens) + [extra_generator()]


def conway_group_order(seed: int = 0, confidence: int = 40) -> int:
    """Order of the group generated by the monomial group and the extra generator.

    Randomized Schreier-Sims on the norm-4 vectors.
    """
    from .shortvec import short_vectors

    L = build_leech()
    V = short_vectors(L, 4).coords
    G = MatrixGroup(L, conway_generators(), domain=V, check=False)
    P = PermGroup(G.perms, V.shape[0], method="random", seed=seed, confidence=confidence)
    return P.order()


# -- S-lattices --------------------------------------------------------------------

def class_representatives(S: EmbeddedLattice):
    """Nonzero 0/1 combinations of the basis: one vector per class of S/2S."""
    B = np.asarray(S.basis.tolist(), dtype=np.int64).reshape(S.rank, S.ambient.rank)
    for mask in range(1, 1 << S.rank):
        yield sum(B[i] for i in range(S.rank) if mask >> i & 1)


def s_lattice_check(S: EmbeddedLattice) -> bool:
    """Does every u in S have a short representative v (norm <= 6) with (u - v)/2 in S?

    Changing u by 2S changes w = (u - v)/2 by S, and v = u - 2w lies in S, so
    one representative per class of S/2S decides the property.
    """
    for u in class_representatives(S):
        reps = coset_short_reps(S.ambient, u)
        if reps.zero_class:
            if not S.contains(u // 2):
                return False
            continue
        if reps.min_norm > 6:
            return False
        v = reps.vectors.coords[0]
        if not S.contains((u - v) // 2):
            return False
    return True


@dataclass(frozen=True)
class SLatticeType:
    a: int
    b: int
    rank: int

    def __str__(self):
        return f"2^{self.a} 3^{self.b}"


def s_lattice_type(S: EmbeddedLattice) -> SLatticeType:
    if not s_lattice_check(S):
        raise NotSLattice("sublattice is not an S-lattice")
    a = b = 0
    for u in class_representatives(S):
        m = coset_short_reps(S.ambient, u).min_norm
        if m == 4:
            a += 1
        elif m == 6:
            b += 1
    t = SLatticeType(a, b, S.rank)
    assert 1 + a + b == 2 ** S.rank
    return t


# -- element search --------------------------------------------------------------------

MAX_ELEMENT_ORDER = 120


def element_order(g: np.ndarray) -> int:
    n = g.shape[0]
    I = np.eye(n, dtype=np.int64)
    h = g.copy()
    for k in range(1, MAX_ELEMENT_ORDER + 1):
        if (h == I).all():
            return k
        h = h @ g
    raise ValueError("element order exceeds the search limit")


def fixed_rank(g: np.ndarray) -> int:
    n = g.shape[0]
    return n - int(np.linalg.matrix_rank((g - np.eye(n, dtype=np.int64)).astype(float)))


def exact_fixed_rank(g: np.ndarray) -> int:
    return invariant_lattice(MatrixGroup(build_leech(), [g], check=False)).rank


def matrix_power(g: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(g.shape[0], dtype=np.int64)
    while k:
        if k & 1:
            out = out @ g
        g = g @ g
        k >>= 1
    return out


def random_word(rng: random.Random, gens, length: int = 24) -> np.ndarray:
    g = gens[rng.randrange(len(gens))]
    for _ in range(length - 1):
        g = g @ gens[rng.randrange(len(gens))]
    return g


def find_element(order: int, rank: int, seed: int = 0, budget: int = 100_000):
    """A Conway group element (lattice matrix) of the given order and fixed rank.

    Random words in the monomial generators and the extra generator; a word
    of order m with ``order | m`` is replaced by its power of order ``order``.
    Returns ``(matrix, words_used)``; raises BudgetExceeded if nothing is found.
    """
    n = N
    if order == 1:
        if rank == n:
            return np.eye(n, dtype=np.int64), 0
        raise BudgetExceeded("the identity has full fixed rank")
    if order == 2 and rank == 8:
        return sign_change(FULL & ~leech_model().code.octads[0]), 0
    rng = random.Random(seed)
    gens = conway_generators()
    for t in range(1, budget + 1):
        w = random_word(rng, gens)
        m = element_order(w)
        if m % order:
            continue
        g = matrix_power(w, m // order)
        if fixed_rank(g) == rank and element_order(g) == order and exact_fixed_rank(g) == rank:
            return g, t
    raise BudgetExceeded(f"no element of order {order} and fixed rank {rank} in {budget} words")


def sample_orders_and_ranks(order: int, words: int, seed: int = 0) -> dict[int, int]:
    """Fixed ranks (with counts) of elements of the given order found in random words."""
    rng = random.Random(seed)
    gens = conway_generators()
    out: dict[int, int] = {}
    for _ in range(words):
        w = random_word(rng, gens)
        m = element_order(w)
        if m % order:
            continue
        g = matrix_power(w, m // order)
        r = fixed_rank(g)
        out[r] = out.get(r, 0) + 1
    return dict(sorted(out.items()))



