"""Fincke-Pohst enumeration of short and close vectors.

The search tree is pruned with a floating-point Cholesky decomposition of an
LLL-reduced Gram matrix, widened by a safety margin; every leaf is accepted
only after its norm has been recomputed exactly in integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numba import njit

from . import linalg as la
from .errors import NotLeechLike, RankZero
from .lattice import Lattice

_SLACK = 1e-7


@dataclass(frozen=True)
class VectorList:
    """Vectors (rows, lattice coordinates) with exact norms ``scaled_norms / scale``.

    Sorted by norm, then lexicographically by coordinates.
    """

    coords: np.ndarray
    scaled_norms: np.ndarray
    scale: int = 1

    def __len__(self):
        return self.coords.shape[0]

    @property
    def norms(self) -> list[Fraction]:
        return [Fraction(int(q), self.scale) for q in self.scaled_norms]


@dataclass(frozen=True)
class CosetShortReps:
    """Short representatives (norm <= 8) of a class ``u + 2*ambient``."""

    vectors: VectorList
    zero_class: bool
    min_norm: Fraction


@njit(cache=True)
def _fp_kernel(d, U, t, bound, Gi, a, b, Bi, skip_zero, out, norms):
    n = d.shape[0]
    cap = out.shape[0]
    x = np.zeros(n, np.int64)
    ub = np.zeros(n, np.int64)
    ctr = np.zeros(n)
    P = np.zeros(n + 1)
    z = np.zeros(n, np.int64)
    count = 0
    i = n - 1
    ctr[i] = t[i]
    r = math.sqrt(bound / d[i])
    x[i] = math.ceil(ctr[i] - r)
    ub[i] = math.floor(ctr[i] + r)
    while True:
        if x[i] > ub[i]:
            i += 1
            if i == n:
                break
            x[i] += 1
            continue
        diff = x[i] - ctr[i]
        P[i] = P[i + 1] + d[i] * diff * diff
        if P[i] > bound:
            x[i] += 1
            continue
        if i == 0:
            nz = False
            for k in range(n):
                z[k] = a * x[k] + b[k]
                if z[k] != 0:
                    nz = True
            if nz or not skip_zero:
                q = 0
                for k in range(n):
                    if z[k] != 0:
                        s = 0
                        for m in range(n):
                            s += Gi[k, m] * z[m]
                        q += z[k] * s
                if q <= Bi:
                    if count < cap:
                        for k in range(n):
                            out[count, k] = z[k]
                        norms[count] = q
                    count += 1
            x[0] += 1
            continue
        i -= 1
        s = 0.0
        for j in range(i + 1, n):
            s += U[i, j] * (x[j] - t[j])
        ctr[i] = t[i] - s
        rem = bound - P[i + 1]
        if rem < 0.0:
            rem = 0.0
        r = math.sqrt(rem / d[i])
        x[i] = math.ceil(ctr[i] - r)
        ub[i] = math.floor(ctr[i] + r)
    return count


@dataclass(frozen=True)
class _Reduced:
    T: np.ndarray         # int64, rows = reduced basis in original coordinates
    Tinv: np.ndarray      # int64
    Gi: np.ndarray        # int64 scaled reduced Gram
    scale: int
    d: np.ndarray         # float pivots
    U: np.ndarray         # float unit upper-triangular factor


@lru_cache(maxsize=512)
def _reduced(L: Lattice) -> _Reduced:
    G2, T = la.lll_reduce(L.gram)
    s = la.denominator(G2)
    Gi = la.to_int64(la.int_matrix(G2 * s, L.rank))
    n = L.rank
    Gf = Gi.astype(float)
    d = np.zeros(n)
    U = np.zeros((n, n))
    for i in range(n):
        d[i] = Gf[i, i] - sum(d[k] * U[k, i] ** 2 for k in range(i))
        U[i, i] = 1.0
        for j in range(i + 1, n):
            U[i, j] = (Gf[i, j] - sum(d[k] * U[k, i] * U[k, j] for k in range(i))) / d[i]
    Tinv = la.inverse(T)
    return _Reduced(la.to_int64(T), la.to_int64(la.int_matrix(Tinv, n)), Gi, s, d, U)


def _canonical(coords: np.ndarray, norms: np.ndarray):
    if coords.shape[0] == 0:
        return coords, norms
    keys = tuple(coords[:, k] for k in range(coords.shape[1] - 1, -1, -1)) + (norms,)
    order = np.lexsort(keys)
    return coords[order], norms[order]


def _enumerate(L: Lattice, bound, a: int = 1, b=None, skip_zero: bool = True):
    """Exact list of ``z = a*x + b`` (x integral) with ``(z, z) <= bound``.

    Returns coordinates in the basis of ``L`` and scaled norms.
    """
    n = L.rank
    red = _reduced(L)
    bound = Fraction(bound)
    Bi = math.floor(bound * red.scale)
    if b is None:
        b = np.zeros(n, np.int64)
    b_red = np.asarray(b, dtype=np.int64) @ red.Tinv
    t = -b_red.astype(float) / a
    fb = Bi / (a * a)  # pivots come from the scaled Gram
    fbound = fb * (1 + _SLACK) + _SLACK
    cap = 1024
    while True:
        out = np.zeros((cap, n), np.int64)
        norms = np.zeros(cap, np.int64)
        cnt = _fp_kernel(red.d, red.U, t, fbound, red.Gi, a, b_red, Bi, skip_zero, out, norms)
        if cnt <= cap:
            break
        cap = cnt
    coords = out[:cnt] @ red.T
    return _canonical(coords, norms[:cnt]) + (red.scale,)


def short_vectors(L: Lattice, bound) -> VectorList:
    """All nonzero vectors of norm at most ``bound`` (both signs), canonically sorted."""
    if L.rank == 0:
        return VectorList(np.zeros((0, 0), np.int64), np.zeros(0, np.int64), 1)
    coords, norms, s = _enumerate(L, bound)
    return VectorList(coords, norms, s)


@lru_cache(maxsize=512)
def minimum(L: Lattice) -> Fraction:
    """Least nonzero norm."""
    if L.rank == 0:
        raise RankZero("minimum of the zero lattice")
    red = _reduced(L)
    b = Fraction(int(red.Gi.diagonal().min()), red.scale)
    vl = short_vectors(L, b)
    return Fraction(int(vl.scaled_norms.min()), vl.scale)


def vector_count_by_norm(L: Lattice, nmax) -> list[tuple[Fraction, int]]:
    """Theta-series style counts ``(norm, count)`` for ``0 < norm <= nmax``."""
    if L.rank == 0:
        return []
    vl = short_vectors(L, nmax)
    vals, counts = np.unique(vl.scaled_norms, return_counts=True)
    return [(Fraction(int(v), vl.scale), int(c)) for v, c in zip(vals, counts)]


def close_vectors(L: Lattice, target, bound) -> VectorList:
    """Lattice vectors ``y`` with ``(y - target, y - target) <= bound``.

    ``target`` is a rational coordinate vector.
    """
    target = [Fraction(x) for x in target]
    den = math.lcm(*[x.denominator for x in target]) if target else 1
    b = np.array([-int(x * den) for x in target], np.int64)
    coords, norms, s = _enumerate(L, Fraction(bound) * den * den, a=den, b=b, skip_zero=False)
    # z = den*y - den*target -> y = (z - b) / den
    ys = (coords - b) // den
    return VectorList(*_canonical(ys, norms), s * den * den)


def _check_leech_like(ambient: Lattice):
    if not (ambient.rank == 24 and ambient.is_even and ambient.det == 1 and minimum(ambient) == 4):
        raise NotLeechLike("ambient must be even unimodular of rank 24 with minimum 4")


def coset_short_reps(ambient: Lattice, u) -> CosetShortReps:
    """Vectors of norm <= 8 in ``u + 2*ambient`` for a Leech-type ambient.

    The zero class is reported with ``zero_class=True`` and no vectors.
    Raises AssertionError if the short-vector dichotomy fails (it cannot for
    a genuine Leech lattice).
    """
    _check_leech_like(ambient)
    u = np.asarray([int(x) for x in u], np.int64)
    coords, norms, s = _enumerate(ambient, 8, a=2, b=u, skip_zero=False)
    if coords.shape[0] and not coords[0].any():
        empty = VectorList(np.zeros((0, 24), np.int64), np.zeros(0, np.int64), 1)
        return CosetShortReps(empty, True, Fraction(0))
    vl = VectorList(coords, norms, s)
    m = int(norms.min())
    if m <= 6:
        assert len(vl) == 2 and (coords[0] == -coords[1]).all(), "short class must be {+v, -v}"
    else:
        G = ambient.int_gram
        Gf = la.to_int64(G)
        ip = coords @ Gf @ coords.T
        assert len(vl) == 48, "norm-8 class must be a coordinate frame"
        assert np.all((ip == 0) | (np.abs(ip) == 8)), "frame vectors must be orthogonal up to sign"
    return CosetShortReps(vl, False, Fraction(m))
