"""Orbits of fixed-point sublattices: the parabolic driver and the saturation loop."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, NonNormalizingCandidate
from .fqs import discriminant_form, extension_classes, overlattice_from_glue
from .groups import (MatrixGroup, invariant_lattice, normalizes, o2_subgroup,
                     pointwise_stabilizer, trivial_group)
from .isometry import pair_is_isometric
from .lattice import EmbeddedLattice, Lattice, orthogonal_complement
from .roots import (cartan, diagram_type, format_type, group_order_of_type,
                    root_lattice, root_system_type)
from .shortvec import minimum, short_vectors, vector_count_by_norm

log = logging.getLogger(__name__)

FINGERPRINT_NORM = 8


def alpha(L: Lattice) -> int:
    """Rank minus the number of invariant factors of the discriminant group."""
    A, _ = discriminant_form(L)
    return L.rank - len(A.orders)


# -- Coxeter diagrams --------------------------------------------------------------

@dataclass(frozen=True)
class CoxeterDiagram:
    """Simply-laced diagram: nodes ``0..n-1`` and simple bonds."""

    nodes: int
    edges: frozenset

    @classmethod
    def from_gram(cls, G) -> "CoxeterDiagram":
        G = np.asarray(G, dtype=object)
        n = G.shape[0]
        edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if G[i, j] != 0)
        return cls(n, edges)

    def graph(self, subset=None) -> nx.Graph:
        sub = range(self.nodes) if subset is None else subset
        g = nx.Graph()
        g.add_nodes_from(sub)
        g.add_edges_from(e for e in self.edges if e[0] in g and e[1] in g)
        return g

    def adjacency(self, subset) -> dict[int, set[int]]:
        g = self.graph(subset)
        return {v: set(g.neighbors(v)) for v in g.nodes}


@dataclass
class SubdiagramTypes:
    count: int
    representatives: list[tuple[int, ...]]


def subdiagram_types(D: CoxeterDiagram) -> SubdiagramTypes:
    """Isomorphism classes of induced subdiagrams (the empty one included)."""
    reps: list[tuple[int, ...]] = []
    graphs: dict[str, list[nx.Graph]] = {}
    for k in range(D.nodes + 1):
        for sub in itertools.combinations(range(D.nodes), k):
            g = D.graph(sub)
            h = nx.weisfeiler_lehman_graph_hash(g)
            bucket = graphs.setdefault(h, [])
            if any(nx.is_isomorphic(g, o) for o in bucket):
                continue
            bucket.append(g)
            reps.append(sub)
    return SubdiagramTypes(len(reps), reps)


def e8_diagram() -> CoxeterDiagram:
    return CoxeterDiagram.from_gram(cartan("E", 8))


# -- records ------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    """One class of (stabilizer, fixed lattice, coinvariant lattice)."""

    stabilizer: MatrixGroup
    invariant: EmbeddedLattice
    coinvariant: EmbeddedLattice
    group_order: int
    alpha: int
    det: int
    fingerprint: tuple
    root_type: str
    extension_class_count: int | None = None
    subset: tuple | None = None
    number: int | None = None
    checks: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.invariant.rank

    @property
    def invariant_gram(self):
        return self.invariant.gram

    @property
    def coinvariant_gram(self):
        return self.coinvariant.gram

    @property
    def pair(self) -> tuple[Lattice, Lattice]:
        return (self.invariant.lattice, self.coinvariant.lattice)

    def sort_key(self):
        return (-self.rank, self.group_order, self.fingerprint)


def lattice_fingerprint(L: Lattice, nmax=FINGERPRINT_NORM) -> tuple:
    return (L.rank, L.det, tuple(vector_count_by_norm(L, nmax)))


def pair_fingerprint(F: EmbeddedLattice, C: EmbeddedLattice) -> tuple:
    return (lattice_fingerprint(F.lattice), lattice_fingerprint(C.lattice))


def roots_of(L: Lattice) -> np.ndarray:
    if L.rank == 0 or minimum(L) > 2:
        return np.zeros((0, L.rank), dtype=np.int64)
    vl = short_vectors(L, 2)
    return vl.coords[vl.scaled_norms == 2 * vl.scale]


def coinvariant_root_type(C: EmbeddedLattice) -> str:
    L = C.lattice
    R = roots_of(L)
    if R.shape[0] == 0:
        return "0"
    return format_type(root_system_type(R, la.to_int64(L.int_gram)))


def reflection(ambient: Lattice, r) -> np.ndarray:
    """Matrix of the reflection in the norm-2 vector ``r`` (row action)."""
    G = la.to_int64(ambient.int_gram)
    r = np.asarray(r, dtype=np.int64)
    return np.eye(ambient.rank, dtype=np.int64) - np.outer(G @ r, r)


def make_record(ambient: Lattice, G: MatrixGroup, subset=None) -> OrbitRecord:
    F = invariant_lattice(G)
    C = orthogonal_complement(F)
    det = int(F.lattice.det) if F.rank else 1
    return OrbitRecord(
        stabilizer=G, invariant=F, coinvariant=C, group_order=G.order,
        alpha=alpha(F.lattice), det=det, fingerprint=pair_fingerprint(F, C),
        root_type=coinvariant_root_type(C), subset=subset)


def classify_parabolics(ambient: Lattice | None = None, simple_roots=None,
                        run_checks: bool = True) -> list[OrbitRecord]:
    """Classes of pointwise stabilizers of fixed lattices of parabolic subgroups.

    ``simple_roots`` are rows in ambient coordinates (default: the basis of
    the ambient, which must then be a Cartan Gram matrix).
    """
    ambient = ambient or root_lattice("E8")
    n = ambient.rank
    S = np.eye(n, dtype=np.int64) if simple_roots is None else np.asarray(simple_roots, dtype=np.int64)
    refl = [reflection(ambient, r) for r in S]
    diagram = CoxeterDiagram.from_gram(S @ la.to_int64(ambient.int_gram) @ S.T)
    # group subsets by fixed/coinvariant fingerprint, then by pair isometry
    candidates: list[OrbitRecord] = []
    seen: dict[tuple, list[tuple]] = {}
    for k in range(S.shape[0] + 1):
        for sub in itertools.combinations(range(S.shape[0]), k):
            W = MatrixGroup(ambient, [refl[i] for i in sub], check=False) if sub else trivial_group(ambient)
            F = invariant_lattice(W)
            C = orthogonal_complement(F)
            fp = pair_fingerprint(F, C)
            pairs = seen.setdefault(fp, [])
            pair = (F.lattice, C.lattice)
            if any(pair_is_isometric(p, pair) for p in pairs):
                continue
            pairs.append(pair)
            candidates.append(_parabolic_record(ambient, W, F, C, sub, diagram, run_checks))
    records = sorted(candidates, key=OrbitRecord.sort_key)
    for i, r in enumerate(records, 1):
        r.number = i
    return records


def _parabolic_record(ambient, W, F, C, sub, diagram, run_checks) -> OrbitRecord:
    stab = pointwise_stabilizer(ambient, F)
    rec = make_record(ambient, stab, subset=sub)
    if not run_checks:
        return rec
    sub_type = format_type(diagram_type(diagram.adjacency(sub))) if sub else "0"
    roots_C = roots_of(C.lattice)
    rank_roots = int(np.linalg.matrix_rank(roots_C.astype(float))) if roots_C.size else 0
    amb_roots = roots_C @ np.asarray(C.basis.tolist(), dtype=np.int64).reshape(C.rank, -1) \
        if C.rank else np.zeros((0, ambient.rank), dtype=np.int64)
    R = MatrixGroup(ambient, [reflection(ambient, r) for r in amb_roots], check=False) \
        if amb_roots.shape[0] else trivial_group(ambient)
    rec.checks = {
        "parabolic_order": W.order == stab.order,
        "parabolic_fixed_lattice": invariant_lattice(stab) == F,
        "steinberg": R.order == stab.order,
        "full_rank_roots": rank_roots == C.rank,
        "weyl_order": group_order_of_type(rec.root_type) == stab.order if rec.root_type != "0" else stab.order == 1,
        "subdiagram_type": sub_type == rec.root_type,
    }
    try:
        classes = extension_classes(F.lattice, C.lattice)
    except BudgetExceeded as e:
        log.warning("record %s: %s", sub, e)
        rec.checks["orbit_determination"] = False
        return rec
    rec.extension_class_count = len(classes)
    rec.checks["orbit_determination"] = verify_orbit_determination(rec, classes)
    return rec


def verify_orbit_determination(r: OrbitRecord, classes=None) -> bool:
    """Exactly one glue class yields an overlattice with the ambient's minimum.

    In a rank-8 ambient every class gives E8, so this is "exactly one class".
    """
    K, Kp = r.pair
    amb_min = minimum(r.invariant.ambient)
    if classes is None:
        classes = extension_classes(K, Kp)
    good = 0
    for c in classes:
        M = overlattice_from_glue(K, Kp, c)
        if minimum(M) == amb_min:
            good += 1
    return good == 1


# -- saturation loop -------------------------------------------------------------------

@dataclass
class SaturationResult:
    records: list[OrbitRecord]
    extensions: list[tuple[int, int]]   # (from record, to record) index pairs
    skipped: int


def chain_holds(G: MatrixGroup) -> bool:
    """For G saturated: O2(G) is normal in the stabilizer of its fixed lattice, which is normal in G."""
    O2 = o2_subgroup(G)
    P = pointwise_stabilizer(G.ambient, invariant_lattice(O2))
    return (all(P.contains(g) for g in O2.gens) and all(G.contains(g) for g in P.gens)
            and all(normalizes(h, O2) for h in P.gens) and all(normalizes(h, P) for h in G.gens))


def saturate_and_extend(seed: MatrixGroup, candidates=None, normalizer_oracle=None,
                        max_records: int = 500, check_chain: bool = True) -> SaturationResult:
    """Repeat: saturate to the pointwise stabilizer, extend by normalizing elements.

    Extension elements come from ``normalizer_oracle(G)`` when given, else from
    ``candidates``.  Each accepted ``g`` normalizes ``G`` with ``g^2`` in ``G``,
    so ``<G, g>`` has index at most 2 over ``G``.
    """
    ambient = seed.ambient
    records: list[OrbitRecord] = []
    extensions: list[tuple[int, int]] = []
    skipped = 0
    queue: list[tuple[MatrixGroup, int | None]] = [(seed, None)]
    while queue:
        G, parent = queue.pop(0)
        Gt = pointwise_stabilizer(ambient, invariant_lattice(G))
        if not all(Gt.contains(g) for g in G.gens):
            raise AssertionError("group is not contained in its pointwise stabilizer")
        rec = make_record(ambient, Gt)
        idx = next((i for i, o in enumerate(records)
                    if o.fingerprint == rec.fingerprint and pair_is_isometric(o.pair, rec.pair)), None)
        if parent is not None and idx is not None:
            extensions.append((parent, idx))
        if idx is not None:
            continue
        if check_chain and not chain_holds(Gt):
            raise AssertionError("normal chain through O2 fails for a saturated group")
        records.append(rec)
        idx = len(records) - 1
        if parent is not None:
            extensions.append((parent, idx))
        if len(records) > max_records:
            raise BudgetExceeded("saturation produced too many records")
        pool = normalizer_oracle(Gt) if normalizer_oracle is not None else (candidates or [])
        for g in pool:
            g = np.asarray(g, dtype=np.int64)
            if Gt.contains(g):
                continue
            if not normalizes(g, Gt):
                skipped += 1
                log.debug("%s", NonNormalizingCandidate("candidate does not normalize the group"))
                continue
            if not Gt.contains(g @ g):
                skipped += 1
                continue
            H = MatrixGroup(ambient, list(Gt.gens) + [g], check=False)
            if H.order > 2 * Gt.order:
                raise AssertionError("extension index exceeds 2")
            queue.append((H, idx))
    return SaturationResult(records, extensions, skipped)


def all_reflections(ambient: Lattice) -> list[np.ndarray]:
    """One reflection per pair of roots of the ambient lattice."""
    R = roots_of(ambient)
    out, seen = [], set()
    for r in R:
        key = min(r.tobytes(), (-r).tobytes())
        if key not in seen:
            seen.add(key)
            out.append(reflection(ambient, r))
    return out


def records_match(a: list[OrbitRecord], b: list[OrbitRecord]) -> bool:
    """Every record of ``a`` is pair-isometric to one of ``b``."""
    return all(any(x.fingerprint == y.fingerprint and pair_is_isometric(x.pair, y.pair) for y in b)
               for x in a)



