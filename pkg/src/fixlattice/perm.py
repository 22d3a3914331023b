"""Permutation groups with stabilizer chains (Schreier-Sims).

Permutations are int64 arrays of images; ``mul(p, q)`` applies ``p`` first.
Transversals are stored as Schreier trees that are only ever extended, so
previously checked Schreier generators stay valid.
"""
from __future__ import annotations

import math
import random
from functools import reduce

import numpy as np
from numba import njit


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``p`` then ``q``."""
    return q[p]


def inv(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(p.shape[0], dtype=p.dtype)
    return out


def is_identity(p: np.ndarray) -> bool:
    return bool((p == np.arange(p.shape[0])).all())


@njit(cache=True)
def _cycle_lengths(p):
    n = p.shape[0]
    seen = np.zeros(n, np.bool_)
    out = []
    for i in range(n):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                k += 1
            out.append(k)
    return out


def perm_order(p: np.ndarray) -> int:
    return reduce(math.lcm, set(_cycle_lengths(p)), 1)


def perm_power(p: np.ndarray, k: int) -> np.ndarray:
    out = identity_perm(p.shape[0])
    base = p
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def orbit_mask(gens, points, n: int) -> np.ndarray:
    """Boolean mask of the orbit of ``points`` under ``gens``."""
    seen = np.zeros(n, dtype=bool)
    frontier = np.unique(np.asarray(points, dtype=np.int64))
    seen[frontier] = True
    while frontier.size:
        nxt = np.concatenate([g[frontier] for g in gens]) if gens else np.zeros(0, np.int64)
        nxt = np.unique(nxt)
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


class _Level:
    """One level of a stabilizer chain: base point, generators, Schreier tree."""

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        self.ginv: list[np.ndarray] = []
        self.tree = np.full(n, -1, dtype=np.int64)  # generator index, -2 at root
        self.tree[point] = -2
        self.orbit = [point]

    def add_gen(self, g: np.ndarray):
        self.gens.append(g)
        self.ginv.append(inv(g))
        self._extend()

    def _extend(self):
        tree = self.tree
        frontier = np.array(self.orbit, dtype=np.int64)
        new_pts = []
        while frontier.size:
            found = []
            for k, g in enumerate(self.gens):
                img = g[frontier]
                fresh = img[tree[img] == -1]
                if fresh.size:
                    fresh = np.unique(fresh)
                    tree[fresh] = k
                    found.append(fresh)
            frontier = np.concatenate(found) if found else np.zeros(0, np.int64)
            new_pts.extend(frontier.tolist())
        self.orbit.extend(new_pts)

    def in_orbit(self, b: int) -> bool:
        return self.tree[b] != -1

    def strip(self, h: np.ndarray, b: int) -> np.ndarray:
        """Return ``h * u_b^{-1}`` where ``u_b`` maps the base point to ``b``."""
        tree, ginv = self.tree, self.ginv
        while True:
            k = tree[b]
            if k == -2:
                return h
            gi = ginv[k]
            h = gi[h]
            b = int(gi[b])

    def rep(self, b: int, n: int) -> np.ndarray:
        """Coset representative ``u_b``."""
        return inv(self.strip(identity_perm(n), b))


class PermGroup:
    """A permutation group on ``range(degree)`` with a stabilizer chain.

    ``base_prefix`` forces the first base points (useful for pointwise
    stabilizers).  ``method`` is ``"deterministic"``, ``"random"`` or
    ``"auto"`` (random above 20000 points).  The random variant stops after
    ``confidence`` consecutive random elements sift to the identity.
    """

    def __init__(self, gens, degree: int, base_prefix=(), method: str = "auto",
                 seed: int = 0, confidence: int = 40):
        self.degree = degree
        self.gens = [np.asarray(g, dtype=np.int64) for g in gens]
        self.gens = [g for g in self.gens if not is_identity(g)]
        self.levels: list[_Level] = []
        for b in base_prefix:
            self.levels.append(_Level(int(b), degree))
        if method == "auto":
            method = "random" if degree > 20000 else "deterministic"
        self.method = method
        self._rng = random.Random(seed)
        if method == "deterministic":
            self._schreier_sims()
        else:
            self._random_schreier_sims(confidence)

    # -- chain construction -------------------------------------------------

    def _new_base_point(self, g: np.ndarray) -> int:
        moved = np.nonzero(g != np.arange(self.degree))[0]
        return int(moved[0])

    def _add_strong_gen(self, g: np.ndarray, upto: int):
        """Add ``g`` (fixing base[:upto]) to every level up to ``upto``."""
        if upto == len(self.levels):
            self.levels.append(_Level(self._new_base_point(g), self.degree))
        for l in range(upto + 1):
            self.levels[l].add_gen(g)

    def sift(self, h: np.ndarray, start: int = 0):
        """Return (residue, level reached)."""
        for l in range(start, len(self.levels)):
            lv = self.levels[l]
            b = int(h[lv.point])
            if not lv.in_orbit(b):
                return h, l
            h = lv.strip(h, b)
        return h, len(self.levels)

    def _schreier_sims(self):
        n = self.degree
        for g in self.gens:
            if all(g[lv.point] == lv.point for lv in self.levels):
                self.levels.append(_Level(self._new_base_point(g), n))
        for l in range(len(self.levels)):
            for g in self.gens:
                if all(g[self.levels[t].point] == self.levels[t].point for t in range(l)):
                    self.levels[l].add_gen(g)
        checked = [set() for _ in self.levels]
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restart = None
            for b in list(lv.orbit):
                ub = None
                for k, s in enumerate(lv.gens):
                    if (b, k) in checked[i]:
                        continue
                    if ub is None:
                        ub = lv.rep(b, n)
                    c = int(s[b])
                    h = lv.strip(s[ub], c)
                    r, j = self.sift(h, i + 1)
                    checked[i].add((b, k))
                    if j < len(self.levels) or not is_identity(r):
                        if j == len(self.levels):
                            self.levels.append(_Level(self._new_base_point(r), n))
                            checked.append(set())
                        for l in range(i + 1, j + 1):
                            self.levels[l].add_gen(r)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    def random_element(self) -> np.ndarray:
        """Product-replacement random element."""
        if not hasattr(self, "_prr"):
            base = list(self.gens) or [identity_perm(self.degree)]
            state = [g.copy() for g in base]
            while len(state) < 10:
                state.append(base[len(state) % len(base)].copy())
            self._prr = state + [identity_perm(self.degree)]
            for _ in range(50):
                self._prr_step()
        return self._prr_step()

    def _prr_step(self) -> np.ndarray:
        st = self._prr
        r = len(st) - 1
        i, j = self._rng.sample(range(r), 2)
        if self._rng.random() < 0.5:
            st[i] = mul(st[i], st[j] if self._rng.random() < 0.5 else inv(st[j]))
        else:
            st[i] = mul(st[j] if self._rng.random() < 0.5 else inv(st[j]), st[i])
        st[r] = mul(st[r], st[i])
        return st[r]

    def _random_schreier_sims(self, confidence: int):
        n = self.degree
        for g in self.gens:
            r, j = self.sift(g)
            if j < len(self.levels) or not is_identity(r):
                self._add_strong_gen(r, j)
        hits = 0
        while hits < confidence:
            r, j = self.sift(self.random_element())
            if j == len(self.levels) and is_identity(r):
                hits += 1
            else:
                hits = 0
                self._add_strong_gen(r, j)

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def order(self) -> int:
        return math.prod(self.orbit_sizes())

    def contains(self, p) -> bool:
        r, j = self.sift(np.asarray(p, dtype=np.int64))
        return j == len(self.levels) and is_identity(r)

    def stabilizer_gens(self, level: int) -> list[np.ndarray]:
        """Strong generators of the pointwise stabilizer of ``base[:level]``."""
        if level >= len(self.levels):
            return []
        return list(self.levels[level].gens)

    def stabilizer_order(self, level: int) -> int:
        return math.prod(self.orbit_sizes()[level:])

    def strong_gens(self) -> list[np.ndarray]:
        seen, out = set(), []
        for lv in self.levels:
            for g in lv.gens:
                key = g.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out
