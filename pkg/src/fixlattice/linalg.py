"""Exact integer and rational matrix algebra.

Matrices are numpy arrays of ``dtype=object`` holding Python ``int`` (an
IntMatrix) or ``fractions.Fraction`` (a RatMatrix).  All routines are exact;
vectors are rows, and a basis matrix ``B`` of a sublattice of a lattice with
Gram ``A`` has Gram ``B @ A @ B.T``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .errors import NotPositiveDefinite

LLL_DELTA = Fraction(99, 100)


def int_matrix(data, ncols: int | None = None) -> np.ndarray:
    """Coerce ``data`` into a 2-d object array of Python ints.

    ``ncols`` fixes the column count when ``data`` has no rows.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        rows = data.tolist()
        ncols = data.shape[1]
    else:
        rows = [list(r) for r in data]
    if not rows:
        return np.empty((0, ncols or 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != out.shape[1]:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x}")
                x = x.numerator
            out[i, j] = int(x)
    return out


def rat_matrix(data, ncols: int | None = None) -> np.ndarray:
    """Coerce ``data`` into a 2-d object array of Fractions."""
    if isinstance(data, np.ndarray) and data.ndim == 2:
        rows = data.tolist()
        ncols = data.shape[1]
    else:
        rows = [list(r) for r in data]
    if not rows:
        return np.empty((0, ncols or 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != out.shape[1]:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = Fraction(x)
    return out


def identity(n: int) -> np.ndarray:
    return int_matrix([[int(i == j) for j in range(n)] for i in range(n)], n)


def zeros(r: int, c: int) -> np.ndarray:
    return int_matrix([[0] * c for _ in range(r)], c)


def is_integral(M) -> bool:
    return all(Fraction(x).denominator == 1 for x in np.asarray(M).flat)


def denominator(M) -> int:
    d = 1
    for x in np.asarray(M).flat:
        q = Fraction(x).denominator
        d = d * q // gcd(d, q)
    return d


def to_int64(M) -> np.ndarray:
    """Convert an integral matrix to int64, refusing silent overflow."""
    M = np.asarray(M)
    if M.size and max(abs(int(x)) for x in M.flat) >= 2**62:
        raise OverflowError("entries too large for int64")
    return np.array(M.tolist(), dtype=np.int64).reshape(M.shape)


def _xgcd(a: int, b: int):
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _rows(M) -> list[list[int]]:
    return [[int(x) for x in r] for r in np.asarray(M).tolist()]


def hnf(M) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ M == H``, ``U`` unimodular, ``H`` upper
    echelon with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows trailing.
    """
    M = int_matrix(M, np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else None)
    m, n = M.shape
    A = _rows(M)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            g, x, y = _xgcd(a, b)
            p, q = -b // g, a // g
            for T in (A, U):
                Rr, Ri = T[r], T[i]
                T[r] = [x * s + y * t for s, t in zip(Rr, Ri)]
                T[i] = [p * s + q * t for s, t in zip(Rr, Ri)]
        piv = A[r][c]
        if piv == 0:
            continue
        if piv < 0:
            A[r] = [-s for s in A[r]]
            U[r] = [-s for s in U[r]]
            piv = -piv
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [s - q * t for s, t in zip(A[i], A[r])]
                U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        r += 1
    return int_matrix(A, n), int_matrix(U, m)


def hnf_basis(M, ncols: int | None = None) -> np.ndarray:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    M = int_matrix(M, ncols)
    if M.shape[0] == 0:
        return M
    H, _ = hnf(M)
    keep = [i for i in range(H.shape[0]) if any(H[i, j] != 0 for j in range(H.shape[1]))]
    return int_matrix([H[i].tolist() for i in keep], M.shape[1])


def snf(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``D = U @ M @ V`` with d1 | d2 | ... and d_i >= 0."""
    M = int_matrix(M, np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else None)
    m, n = M.shape
    A = _rows(M)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [s + q * t for s, t in zip(A[dst], A[src])]
        U[dst] = [s + q * t for s, t in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for R in A:
            R[dst] += q * R[src]
        for R in V:
            R[dst] += q * R[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best][t])):
                        best = i
                swap_rows(t, best)
                bestc = None
                for j in range(t, n):
                    if A[t][j] and (bestc is None or abs(A[t][j]) < abs(A[t][bestc])):
                        bestc = j
                swap_cols(t, bestc)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-s for s in A[t]]
            U[t] = [-s for s in U[t]]
        t += 1
    return int_matrix(A, n), int_matrix(U, m), int_matrix(V, n)


def elementary_divisors(M) -> list[int]:
    D, _, _ = snf(M)
    return [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]


def kernel_saturated(M) -> np.ndarray:
    """HNF basis of the integer left kernel ``{x : x @ M == 0}``.

    The rows come from a unimodular transform, so the kernel lattice returned
    is saturated (its quotient is torsion free).
    """
    M = int_matrix(M, np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else None)
    m = M.shape[0]
    if m == 0:
        return zeros(0, 0)
    H, U = hnf(M)
    rows = [U[i].tolist() for i in range(m) if all(H[i, j] == 0 for j in range(H.shape[1]))]
    if not rows:
        return zeros(0, m)
    return hnf_basis(rows, m)


def det(M) -> Fraction | int:
    """Exact determinant (fraction-free Bareiss on the scaled matrix)."""
    M = np.asarray(M)
    n = M.shape[0]
    if n == 0:
        return 1
    d = denominator(M)
    A = [[int(Fraction(x) * d) for x in r] for r in M.tolist()]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    val = Fraction(sign * A[n - 1][n - 1], d**n)
    return val.numerator if val.denominator == 1 else val


def _echelon(rows: list[list[Fraction]]):
    """Reduced row echelon form in place; returns pivot columns."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


def rank(M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    rows = [[Fraction(x) for x in r] for r in M.tolist()]
    return len(_echelon(rows))


def inverse(M) -> np.ndarray:
    """Exact inverse as a RatMatrix; raises ZeroDivisionError if singular."""
    M = np.asarray(M)
    n = M.shape[0]
    if n == 0:
        return rat_matrix([], 0)
    rows = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
            for i, r in enumerate(M.tolist())]
    piv = _echelon(rows)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return rat_matrix([r[n:] for r in rows], n)


def solve_left(A, B) -> np.ndarray:
    """Unique ``X`` with ``X @ A == B`` for square invertible ``A``."""
    B = rat_matrix(B, np.asarray(A).shape[0])
    if B.shape[0] == 0:
        return B
    return B.dot(inverse(A))


def ldl_pivots(G) -> list[Fraction]:
    """Pivots d_i of the exact decomposition G = U^T diag(d) U (U unit upper)."""
    G = rat_matrix(G, np.asarray(G).shape[1] if np.asarray(G).ndim == 2 else 0)
    n = G.shape[0]
    A = [[G[i, j] for j in range(n)] for i in range(n)]
    out = []
    for k in range(n):
        p = A[k][k]
        out.append(p)
        if p == 0:
            return out
        for i in range(k + 1, n):
            f = A[i][k] / p
            if f:
                for j in range(k + 1, n):
                    A[i][j] -= f * A[k][j]
    return out


def is_positive_definite(G) -> bool:
    return all(p > 0 for p in ldl_pivots(G))


def lll_reduce(G, delta: Fraction = LLL_DELTA) -> tuple[np.ndarray, np.ndarray]:
    """LLL-reduce a positive-definite Gram matrix.

    Returns ``(G2, T)`` with ``G2 == T @ G @ T.T`` (rows of ``T`` are the new
    basis vectors in old coordinates) and ``T`` unimodular.  Uses the
    integral (fraction-free) variant on the Gram matrix scaled to integers.
    """
    G = rat_matrix(G, np.asarray(G).shape[1] if np.asarray(G).ndim == 2 else 0)
    n = G.shape[0]
    if n == 0:
        return G, identity(0)
    if not is_positive_definite(G):
        raise NotPositiveDefinite("Gram matrix is not positive definite")
    s = denominator(G)
    G0 = [[int(G[i, j] * s) for j in range(n)] for i in range(n)]
    dp, dq = delta.numerator, delta.denominator
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    # 1-based bookkeeping: d[0] = 1, lam[k][j] for j < k
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def ip(a, b):  # inner product of current basis rows a, b (1-based)
        ha, hb = H[a - 1], H[b - 1]
        return sum(ha[i] * sum(G0[i][j] * hb[j] for j in range(n) if hb[j]) for i in range(n) if ha[i])

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            H[k - 1] = [a - q * b for a, b in zip(H[k - 1], H[l - 1])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        H[k - 1], H[k - 2] = H[k - 2], H[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        la = lam[k][k - 1]
        B = (d[k - 2] * d[k] + la * la) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - la * t) // d[k - 1]
            lam[i][k - 1] = (B * t + la * lam[i][k]) // d[k]
        d[k - 1] = B

    d[1] = G0[0][0]
    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = ip(k, j)
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k] = u
        while True:
            red(k, k - 1)
            if dq * d[k] * d[k - 2] < dp * d[k - 1] ** 2 - dq * lam[k][k - 1] ** 2:
                swap(k, kmax)
                k = max(2, k - 1)
            else:
                for l in range(k - 2, 0, -1):
                    red(k, l)
                k += 1
                break
    T = int_matrix(H, n)
    G2 = T.dot(G).dot(T.T)
    return rat_matrix(G2, n), T
