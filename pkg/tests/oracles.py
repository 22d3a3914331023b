"""Brute-force reference implementations, independent of the package algorithms."""
import cmath
import itertools
import math
from fractions import Fraction


def det(G):
    """Leibniz expansion (small ranks only)."""
    n = len(G)
    total = Fraction(0)
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= G[i][p[i]]
        total += term
    return total


def inverse(G):
    """Adjugate over the determinant."""
    n = len(G)
    d = det(G)

    def minor(i, j):
        return [[G[r][c] for c in range(n) if c != j] for r in range(n) if r != i]

    return [[Fraction((-1) ** (i + j)) * det(minor(j, i)) / d if n > 1 else 1 / d
             for j in range(n)] for i in range(n)]


def norm(G, x):
    n = len(x)
    return sum(x[i] * G[i][j] * x[j] for i in range(n) for j in range(n))


def box_bounds(G, bound):
    """|x_i| <= sqrt(bound * (G^-1)_ii) on the ellipsoid x G x^t <= bound."""
    Gi = inverse(G)
    return [math.isqrt(int(Fraction(bound) * Gi[i][i])) + 1 for i in range(len(G))]


def short_vectors(G, bound):
    """All nonzero x with x G x^t <= bound, as a sorted list of (norm, tuple)."""
    G = [[Fraction(x) for x in row] for row in G]
    r = box_bounds(G, bound)
    out = []
    for x in itertools.product(*[range(-k, k + 1) for k in r]):
        if any(x):
            q = norm(G, x)
            if q <= bound:
                out.append((q, x))
    return sorted(out)


def automorphism_count(G):
    """Count integer g with g G g^t = G by choosing rows among vectors of the right norm."""
    n = len(G)
    cands = [[x for q, x in short_vectors(G, G[i][i]) if q == G[i][i]] for i in range(n)]
    count = 0

    def rec(rows):
        nonlocal count
        k = len(rows)
        if k == n:
            count += 1
            return
        for v in cands[k]:
            if all(sum(v[a] * G[a][b] * w[b] for a in range(n) for b in range(n)) == G[k][j]
                   for j, w in enumerate(rows)):
                rec(rows + [v])

    rec([])
    return count


def _hnf_diagonal(G):
    """Diagonal of an upper triangular row echelon form of the integer matrix G."""
    M = [[int(x) for x in row] for row in G]
    n = len(M)
    for c in range(n):
        while True:
            rows = [r for r in range(c, n) if M[r][c]]
            p = min(rows, key=lambda r: abs(M[r][c]))
            M[c], M[p] = M[p], M[c]
            done = True
            for r in range(c + 1, n):
                k = M[r][c] // M[c][c]
                M[r] = [a - k * b for a, b in zip(M[r], M[c])]
                done &= M[r][c] == 0
            if done:
                break
    return [abs(M[i][i]) for i in range(n)]


def discriminant_values(G):
    """Multiset of q-values of L*/L for an even Gram matrix G (by coset enumeration)."""
    n = len(G)
    G = [[Fraction(x) for x in row] for row in G]
    Gi = inverse(G)
    seen = {}
    for y in itertools.product(*(range(h) for h in _hnf_diagonal(G))):
        v = tuple(sum(y[i] * Gi[i][j] for i in range(n)) % 1 for j in range(n))
        if v not in seen:
            seen[v] = sum(y[i] * Gi[i][j] * y[j] for i in range(n) for j in range(n)) % 2
    return sorted(seen.values())


def gauss_sum_signature(values):
    """sigma mod 8 from sum exp(pi i q) = sqrt(|A|) exp(2 pi i sigma/8), numerically."""
    s = sum(cmath.exp(1j * math.pi * float(q)) for q in values)
    ang = cmath.phase(s) / (2 * math.pi) * 8
    sigma = round(ang) % 8
    assert abs(ang - round(ang)) < 1e-6 and abs(abs(s) - math.sqrt(len(values))) < 1e-6
    return sigma


def perm_closure_order(gens, n):
    """Order of a permutation group by breadth-first closure (small groups)."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    return len(seen)


def matrix_group_order(gens, n, limit=100000):
    """Order of a finite integer matrix group by closure."""
    import numpy as np
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p @ g
                k = q.tobytes()
                if k not in seen:
                    seen.add(k)
                    new.append(q)
                    if len(seen) > limit:
                        raise RuntimeError("group too large for closure")
        frontier = new
    return len(seen)
