"""Simply-laced root systems: Cartan matrices, Weyl group orders, type detection."""
from __future__ import annotations

import math
import re
from collections import Counter

import numpy as np

from .lattice import Lattice

E_WEYL = {6: 51840, 7: 2903040, 8: 696729600}


def cartan(kind: str, n: int) -> list[list[int]]:
    """Cartan (= Gram) matrix of A_n, D_n or E_n, Bourbaki numbering."""
    G = [[2 * (i == j) for j in range(n)] for i in range(n)]

    def bond(i, j):
        G[i][j] = G[j][i] = -1

    if kind == "A":
        for i in range(n - 1):
            bond(i, i + 1)
    elif kind == "D":
        if n < 2:
            raise ValueError("D_n needs n >= 2")
        for i in range(n - 2):
            bond(i, i + 1)
        if n >= 3:
            bond(n - 3, n - 1)
    elif kind == "E":
        if n not in E_WEYL:
            raise ValueError("E_n needs n in 6..8")
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    else:
        raise ValueError(f"unknown root system {kind!r}")
    return G


def root_lattice(name: str) -> Lattice:
    """``Lattice`` for a name like ``"E8"`` or ``"A2"``."""
    m = re.fullmatch(r"([ADE])(\d+)", name)
    if not m:
        raise ValueError(f"bad root lattice name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return Lattice(cartan(kind, n), name=name)


def weyl_order(kind: str, n: int) -> int:
    if kind == "A":
        return math.factorial(n + 1)
    if kind == "D":
        return 2 ** (n - 1) * math.factorial(n)
    if kind == "E":
        return E_WEYL[n]
    raise ValueError(kind)


def parse_type(t: str) -> list[tuple[str, int]]:
    """``"A2 A1^2"`` -> [("A", 2), ("A", 1), ("A", 1)]."""
    out = []
    for tok in t.split():
        m = re.fullmatch(r"([ADE])(\d+)(?:\^(\d+))?", tok)
        if not m:
            raise ValueError(f"bad root type token {tok!r}")
        out += [(m.group(1), int(m.group(2)))] * int(m.group(3) or 1)
    return out


def format_type(components) -> str:
    """Canonical string, components ordered E, D, A then by rank descending."""
    if not components:
        return "0"
    rankkey = {"E": 0, "D": 1, "A": 2}
    c = Counter(components)
    items = sorted(c.items(), key=lambda kv: (rankkey[kv[0][0]], -kv[0][1]))
    return " ".join(f"{k}{n}" + (f"^{m}" if m > 1 else "") for (k, n), m in items)


def group_order_of_type(t) -> int:
    comps = parse_type(t) if isinstance(t, str) else t
    return math.prod(weyl_order(k, n) for k, n in comps)


def diagram_type(adj: dict[int, set[int]]) -> list[tuple[str, int]]:
    """Types of the connected components of a simply-laced Dynkin diagram."""
    seen: set[int] = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(_component_type(comp, adj))
    return comps


def _component_type(comp, adj) -> tuple[str, int]:
    n = len(comp)
    edges = sum(len(adj[v]) for v in comp) // 2
    if edges != n - 1:
        raise ValueError("diagram component is not a tree")
    branch = [v for v in comp if len(adj[v]) >= 3]
    if not branch:
        if any(len(adj[v]) > 2 for v in comp):
            raise ValueError("not a Dynkin diagram")
        return ("A", n)
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        raise ValueError("not a Dynkin diagram")
    b = branch[0]
    legs = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [y for y in adj[cur] if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return ("D", n)
    if legs[0] == 1 and legs[1] == 2 and legs[2] in (2, 3, 4):
        return ("E", n)
    raise ValueError("not a Dynkin diagram")


def simple_roots(roots: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """A base of the root system given by ``roots`` (rows, coordinates w.r.t. ``gram``).

    Positivity is decided by a generic integral functional.
    """
    if roots.shape[0] == 0:
        return roots
    G = np.asarray(gram, dtype=np.int64)
    n = G.shape[0]
    rng = np.random.default_rng(12345)
    while True:
        w = rng.integers(-10**6, 10**6, size=n)
        f = roots @ (G @ w)
        if (f != 0).all():
            break
    pos = roots[f > 0]
    posset = {tuple(r) for r in pos.tolist()}
    simple = []
    for a in pos:
        if not any(tuple((a - b).tolist()) in posset for b in pos):
            simple.append(a)
    return np.array(simple, dtype=np.int64)


def root_system_type(roots: np.ndarray, gram) -> list[tuple[str, int]]:
    """Components of the root system formed by the norm-2 vectors ``roots``."""
    S = simple_roots(roots, gram)
    if S.shape[0] == 0:
        return []
    G = np.asarray(gram, dtype=np.int64)
    C = S @ G @ S.T
    k = S.shape[0]
    adj = {i: {j for j in range(k) if j != i and C[i, j] != 0} for i in range(k)}
    return diagram_type(adj)
