"""Command-line entry point: ``fixlat <group> <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or invalid input,
3 a budget was exceeded.  Budgets may be overridden through the
environment (see ``BUDGET_VARS``).
"""
from __future__ import annotations

import argparse
import logging
import os
import resource
import signal
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .errors import BudgetExceeded, FixLatError, ParseError

log = logging.getLogger("fixlattice")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

BUDGET_VARS = {
    "node": "FIXLAT_NODE_BUDGET",          # backtracking nodes for isometry searches
    "coset": "FIXLAT_COSET_BUDGET",        # work for double coset enumeration
    "words": "FIXLAT_SEARCH_BUDGET",       # random words for element searches
    "time": "FIXLAT_TIME_BUDGET",          # seconds of wall time
    "memory": "FIXLAT_MEMORY_BUDGET",      # megabytes of address space
}

RANDOMIZED = {("element", "find"), ("group", "o2")}


@dataclass
class RunConfig:
    command: tuple[str, str]
    inputs: list[str]
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "text"

    def budget(self, name, default):
        return self.budgets.get(name, default)


def _budgets_from_env() -> dict:
    out = {}
    for name, var in BUDGET_VARS.items():
        v = os.environ.get(var)
        if v is None:
            continue
        try:
            n = int(float(v))
        except ValueError:
            raise ValueError(f"{var} must be a number, got {v!r}") from None
        if n <= 0:
            raise ValueError(f"{var} must be positive")
        out[name] = n
    return out


# -- output helpers ------------------------------------------------------------------

class Report:
    """Collects key/value lines for text mode and a dict for machine mode."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.data = {"format": io.FORMAT, "command": " ".join(cfg.command)}
        self.lines: list[str] = []
        self.failed: list[str] = []

    def put(self, key, value, text=None):
        self.data[key] = _jsonable(value)
        self.lines.append(f"{key}: {value if text is None else text}")

    def text(self, line):
        self.lines.append(line)

    def check(self, name, ok: bool, detail=""):
        self.data.setdefault("checks", {})[name] = bool(ok)
        self.lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + str(detail) if detail else ''}")
        if not ok:
            self.failed.append(name)

    def emit(self, stream):
        if self.cfg.fmt == "json":
            text = io.dumps(self.data) + "\n"
        else:
            text = "\n".join(self.lines) + "\n"
        if self.cfg.output:
            Path(self.cfg.output).write_text(text)
        else:
            stream.write(text)


def _jsonable(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        v = int(v)
        return v if abs(v) < 2 ** 53 else str(v)
    if isinstance(v, Fraction):
        return io.rational_to_json(v)
    if isinstance(v, np.ndarray):
        return io.matrix_to_json(v) if v.ndim == 2 else [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def _fmt_matrix(M) -> str:
    return "\n".join("  " + " ".join(str(x) for x in row) for row in np.asarray(M, dtype=object).tolist())


# -- lattice ----------------------------------------------------------------------------

def cmd_lattice_info(cfg, rep):
    from .fqs import discriminant_form, milgram_signature
    from .shortvec import minimum
    L = io.load(cfg.inputs[0], "lattice")
    rep.put("rank", L.rank)
    rep.put("det", L.det)
    rep.put("integral", L.is_integral)
    rep.put("even", L.is_even)
    rep.put("minimum", minimum(L) if L.rank else None)
    if L.is_even:
        A, _ = discriminant_form(L)
        rep.put("invariant_factors", list(A.orders))
        rep.put("alpha", L.rank - len(A.orders))
        rep.put("milgram", milgram_signature(A))


def cmd_lattice_shortvec(cfg, rep, bound: str, vectors: bool):
    from .shortvec import short_vectors
    L = io.load(cfg.inputs[0], "lattice")
    b = io.rational_from_json(bound, "--bound")
    vl = short_vectors(L, b)
    counts: dict[Fraction, int] = {}
    for q in vl.norms:
        counts[q] = counts.get(q, 0) + 1
    rep.put("bound", b)
    rep.put("count", len(vl))
    rep.data["counts"] = [[io.rational_to_json(q), c] for q, c in counts.items()]
    for q, c in counts.items():
        rep.text(f"  norm {q}: {c}")
    if vectors:
        rep.data["vectors"] = io.matrix_to_json(vl.coords)
        for row in vl.coords.tolist():
            rep.text("  " + " ".join(map(str, row)))


def cmd_lattice_aut(cfg, rep):
    from .isometry import automorphism_group
    L = io.load(cfg.inputs[0], "lattice")
    G = automorphism_group(L, node_budget=cfg.budget("node", 5_000_000))
    rep.put("order", G.order)
    rep.put("orbit_lengths", list(G.orbit_lengths))
    rep.data["generators"] = [io.matrix_to_json(g) for g in G.gens]
    rep.text(f"generators: {len(G.gens)}")
    for g in G.gens:
        rep.text(_fmt_matrix(g))
        rep.text("")


def cmd_lattice_isom(cfg, rep):
    from .isometry import is_isometric
    L1 = io.load(cfg.inputs[0], "lattice")
    L2 = io.load(cfg.inputs[1], "lattice")
    T = is_isometric(L1, L2, node_budget=cfg.budget("node", 5_000_000))
    rep.put("isometric", T is not None)
    if T is not None:
        rep.data["map"] = io.matrix_to_json(T)
        rep.text("map (T G2 T^t = G1):")
        rep.text(_fmt_matrix(T))


# -- fqs -------------------------------------------------------------------------------------

def _load_space(path):
    from .fqs import FiniteQuadraticSpace, discriminant_form
    obj = io.load(path)
    if isinstance(obj, FiniteQuadraticSpace):
        return obj
    L = obj.lattice if hasattr(obj, "lattice") else obj
    return discriminant_form(L)[0]


def cmd_fqs_milgram(cfg, rep):
    from .fqs import milgram_signature
    A = _load_space(cfg.inputs[0])
    rep.put("orders", list(A.orders))
    rep.put("milgram", milgram_signature(A))


def _glue_inputs(cfg):
    K = io.load(cfg.inputs[0], "lattice")
    Kp = io.load(cfg.inputs[1], "lattice")
    return K, Kp


def cmd_fqs_classes(cfg, rep):
    from .fqs import extension_classes
    K, Kp = _glue_inputs(cfg)
    classes = extension_classes(K, Kp, budget=cfg.budget("coset", 10_000_000))
    rep.put("classes", len(classes))
    rep.put("class_sizes", [c.size for c in classes])


def cmd_fqs_glue(cfg, rep, out_dir):
    from .fqs import extension_classes, overlattice_from_glue
    from .shortvec import minimum
    K, Kp = _glue_inputs(cfg)
    classes = extension_classes(K, Kp, budget=cfg.budget("coset", 10_000_000))
    rep.put("classes", len(classes))
    found = []
    for i, c in enumerate(classes):
        M = overlattice_from_glue(K, Kp, c)
        m = minimum(M)
        found.append({"det": io.rational_to_json(M.det), "minimum": io.rational_to_json(m),
                      "even": M.is_even})
        rep.text(f"  class {i}: det {M.det}, minimum {m}, even {M.is_even}")
        if out_dir:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            io.save(M, Path(out_dir) / f"overlattice_{i}.json")
    rep.data["overlattices"] = found


# -- groups ------------------------------------------------------------------------------------

def cmd_group_fixlat(cfg, rep, out_dir):
    from .groups import fixed_data
    G = io.load(cfg.inputs[0], "group")
    fd = fixed_data(G)
    rep.put("invariant_rank", fd.invariant.rank)
    rep.put("invariant_gram", fd.invariant.gram, "\n" + _fmt_matrix(fd.invariant.gram))
    rep.put("coinvariant_rank", fd.coinvariant.rank)
    rep.put("coinvariant_gram", fd.coinvariant.gram, "\n" + _fmt_matrix(fd.coinvariant.gram))
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        io.save(fd.invariant, Path(out_dir) / "invariant.json")
        io.save(fd.coinvariant, Path(out_dir) / "coinvariant.json")


def cmd_group_order(cfg, rep):
    G = io.load(cfg.inputs[0], "group")
    rep.put("order", G.order)


def cmd_group_o2(cfg, rep):
    from .groups import o2_subgroup
    G = io.load(cfg.inputs[0], "group")
    H = o2_subgroup(G, seed=cfg.seed)
    rep.put("order", G.order)
    rep.put("o2_order", H.order)
    rep.put("index", G.order // H.order)


def cmd_group_stab(cfg, rep):
    from .groups import invariant_lattice, pointwise_stabilizer
    from .lattice import EmbeddedLattice
    S = io.load(cfg.inputs[0])
    if not isinstance(S, EmbeddedLattice):
        raise FixLatError("group stab needs an embedded lattice document")
    G = pointwise_stabilizer(S.ambient, S)
    rep.put("order", G.order)
    rep.put("fixed_rank", invariant_lattice(G).rank)
    rep.data["generators"] = [io.matrix_to_json(g) for g in G.gens]


# -- leech ---------------------------------------------------------------------------------------

def cmd_leech_build(cfg, rep):
    from .leech import build_leech
    L = build_leech()
    rep.data.update({k: v for k, v in io.lattice_to_dict(L).items() if k not in ("format",)})
    rep.text(io.to_text(L).rstrip())


def cmd_leech_verify(cfg, rep, co0: bool):
    from .leech import build_golay, code_automorphisms, leech_model, monomial_group
    from .shortvec import minimum, short_vectors
    model = leech_model()
    L = model.lattice
    rep.check("det", L.det == 1, f"det {L.det}")
    rep.check("even", L.is_even)
    m = minimum(L)
    rep.check("minimum", m == 4, f"minimum {m}")
    vl = short_vectors(L, 4)
    n4 = int((vl.scaled_norms == 4 * vl.scale).sum())
    rep.check("norm4_count", n4 == 196560, f"{n4} vectors of norm 4")
    frame = model.frame
    gram = frame @ np.asarray(L.int_gram.tolist(), dtype=np.int64) @ frame.T
    pairs_ok = all(((gram[i] != 0).sum() == 2) for i in range(len(frame)))
    rep.check("frame", len(frame) == 48 and pairs_ok, f"{len(frame)} frame vectors")
    code = build_golay()
    wd = code.weight_distribution()
    rep.check("golay_weights", wd == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}, wd)
    aut = code_automorphisms(code)
    rep.check("m24_order", aut.order == 244823040, aut.order)
    mono = monomial_group().order
    rep.check("monomial_order", mono == 4096 * 244823040, mono)
    if co0:
        from .leech import conway_group_order
        o = conway_group_order(seed=cfg.seed)
        rep.check("co0_order", o == 8315553613086720000, o)


def _embedded_in_leech(path):
    from .lattice import EmbeddedLattice
    S = io.load(path)
    if isinstance(S, EmbeddedLattice):
        return S
    raise FixLatError(f"{path}: expected an embedded lattice in the Leech lattice")


def cmd_slattice_check(cfg, rep):
    from .leech import s_lattice_check
    S = _embedded_in_leech(cfg.inputs[0])
    rep.check("s_lattice", s_lattice_check(S))


def cmd_slattice_type(cfg, rep):
    from .leech import s_lattice_type
    S = _embedded_in_leech(cfg.inputs[0])
    t = s_lattice_type(S)
    rep.put("type", str(t))
    rep.put("a", t.a)
    rep.put("b", t.b)
    rep.check("curtis_count", 1 + t.a + t.b == 2 ** t.rank)


def cmd_element_find(cfg, rep, order, rank, out_dir):
    from .groups import MatrixGroup, invariant_lattice
    from .leech import build_leech, find_element, s_lattice_check, s_lattice_type
    g, words = find_element(order, rank, seed=cfg.seed, budget=cfg.budget("words", 100_000))
    L = build_leech()
    F = invariant_lattice(MatrixGroup(L, [g], check=True))
    rep.put("order", order)
    rep.put("fixed_rank", F.rank)
    rep.put("seed", cfg.seed)
    rep.put("words", words)
    rep.data["element"] = io.matrix_to_json(g)
    if F.rank <= 12 and s_lattice_check(F):
        rep.put("s_lattice_type", str(s_lattice_type(F)))
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        io.save(F, Path(out_dir) / "fixed.json")


# -- classify --------------------------------------------------------------------------------

def _record_dict(r) -> dict:
    return {"number": r.number, "rank": r.rank, "order": str(r.group_order), "det": r.det,
            "alpha": r.alpha, "extension_classes": r.extension_class_count,
            "root_type": r.root_type,
            "invariant": io.embedded_to_dict(r.invariant),
            "coinvariant_gram": io.matrix_to_json(r.coinvariant.gram),
            "generators": [io.matrix_to_json(g) for g in r.stabilizer.gens],
            "checks": _jsonable({k: bool(v) for k, v in r.checks.items()})}


def _table(rep, records):
    rep.text(f"{'no':>3} {'rank':>4} {'order':>10} {'det':>4} {'alpha':>5} {'ext':>3}  root type")
    for r in records:
        rep.text(f"{r.number:>3} {r.rank:>4} {r.group_order:>10} {r.det:>4} {r.alpha:>5} "
                 f"{r.extension_class_count if r.extension_class_count is not None else '-':>3}  {r.root_type}")


def cmd_classify_e8(cfg, rep, remove, out_dir):
    from .classify import (CoxeterDiagram, classify_parabolics, subdiagram_types)
    from .roots import root_lattice
    E8 = root_lattice("E8")
    keep = [i for i in range(8) if remove is None or i != remove]
    S = np.eye(8, dtype=np.int64)[keep]
    records = classify_parabolics(E8, S)
    diagram = CoxeterDiagram.from_gram(S @ np.asarray(E8.int_gram.tolist(), dtype=np.int64) @ S.T)
    expected = subdiagram_types(diagram).count
    rep.put("orbits", len(records), f"{len(records)} orbits")
    rep.put("subdiagram_types", expected)
    _table(rep, records)
    rep.data["records"] = [{k: v for k, v in _record_dict(r).items()
                            if k in ("number", "rank", "order", "det", "alpha",
                                     "extension_classes", "root_type")} for r in records]
    rep.check("record_count", len(records) == expected, f"{len(records)} records, {expected} types")
    types = [r.root_type for r in records]
    rep.check("subdiagram_bijection", len(set(types)) == len(types)
              and all(r.checks.get("subdiagram_type") for r in records))
    for name, label in (("steinberg", "steinberg"), ("full_rank_roots", "full_rank_roots"),
                        ("weyl_order", "weyl_order"), ("parabolic_order", "parabolic_order"),
                        ("parabolic_fixed_lattice", "parabolic_fixed_lattice"),
                        ("orbit_determination", "unique_glue")):
        bad = [r.number for r in records if not r.checks.get(name)]
        rep.check(label, not bad, f"failing records {bad}" if bad else "")
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        for r in records:
            (Path(out_dir) / f"record_{r.number:03d}.json").write_text(io.dumps(
                {"format": io.FORMAT, "kind": "record", **_record_dict(r)}) + "\n")


def cmd_classify_run(cfg, rep, seeds_dir, candidates, out_dir):
    from .classify import all_reflections, saturate_and_extend
    files = sorted(Path(seeds_dir).glob("*.json"))
    if not files:
        raise FixLatError(f"{seeds_dir}: no seed group files (*.json)")
    cand = io.load(candidates, "group").gens if candidates else None
    results = []
    for f in files:
        G = io.load(f, "group")
        pool = cand if cand is not None else all_reflections(G.ambient)
        res = saturate_and_extend(G, pool)
        rep.text(f"{f.name}: {len(res.records)} records")
        for i, r in enumerate(res.records, 1):
            r.number = i
        _table(rep, res.records)
        results.append({"seed": f.name, "records": [
            {k: v for k, v in _record_dict(r).items()
             if k in ("number", "rank", "order", "det", "alpha", "root_type")} for r in res.records],
            "extensions": [list(e) for e in res.extensions]})
        if out_dir:
            d = Path(out_dir) / f.stem
            d.mkdir(parents=True, exist_ok=True)
            for r in res.records:
                (d / f"record_{r.number:03d}.json").write_text(io.dumps(
                    {"format": io.FORMAT, "kind": "record", **_record_dict(r)}) + "\n")
    rep.data["runs"] = results


# -- parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker count; results do not depend on it")
    common.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="fixlat", description="Exact lattice and Leech-lattice tools.")
    top = p.add_subparsers(dest="group", required=True)

    def sub(group, name, help_):
        return group.add_parser(name, parents=[common], help=help_)

    g = top.add_parser("lattice", help="single lattices").add_subparsers(dest="cmd", required=True)
    s = sub(g, "info", "rank, det, minimum, discriminant data")
    s.add_argument("file")
    s = sub(g, "shortvec", "vectors up to a norm bound")
    s.add_argument("file")
    s.add_argument("--bound", required=True)
    s.add_argument("--vectors", action="store_true", help="also print the vectors")
    s = sub(g, "aut", "automorphism group generators and order")
    s.add_argument("file")
    s = sub(g, "isom", "test two lattices for isometry")
    s.add_argument("file")
    s.add_argument("other")

    g = top.add_parser("fqs", help="discriminant forms and gluing").add_subparsers(dest="cmd", required=True)
    s = sub(g, "milgram", "signature mod 8 of a discriminant form")
    s.add_argument("file")
    s = sub(g, "classes", "count gluing classes of K and its complement")
    s.add_argument("file")
    s.add_argument("other")
    s = sub(g, "glue", "build the overlattice of every gluing class")
    s.add_argument("file")
    s.add_argument("other")
    s.add_argument("--out-dir")

    g = top.add_parser("group", help="finite matrix groups").add_subparsers(dest="cmd", required=True)
    s = sub(g, "fixlat", "invariant and coinvariant lattices")
    s.add_argument("file")
    s.add_argument("--out-dir")
    s = sub(g, "order", "exact order")
    s.add_argument("file")
    s = sub(g, "o2", "subgroup generated by elements of odd order")
    s.add_argument("file")
    s = sub(g, "stab", "pointwise stabilizer of an embedded sublattice")
    s.add_argument("file")

    g = top.add_parser("leech", help="the Leech lattice").add_subparsers(dest="cmd", required=True)
    sub(g, "build", "print the Leech Gram matrix")
    s = sub(g, "verify", "determinant, minimum, kissing number, code and monomial group")
    s.add_argument("--co0", action="store_true", help="also certify the Conway group order")

    g = top.add_parser("slattice", help="S-lattices in the Leech lattice").add_subparsers(dest="cmd", required=True)
    s = sub(g, "check", "S-lattice property")
    s.add_argument("file")
    s = sub(g, "type", "type 2^a3^b")
    s.add_argument("file")

    g = top.add_parser("element", help="Conway group elements").add_subparsers(dest="cmd", required=True)
    s = sub(g, "find", "random search for an element of given order and fixed rank")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--out-dir")

    g = top.add_parser("classify", help="orbits of fixed-point sublattices").add_subparsers(dest="cmd", required=True)
    s = sub(g, "e8", "parabolic classification in E8")
    s.add_argument("--remove-root", type=int, choices=range(8), default=None,
                   help="drop one simple root (sub-diagram run)")
    s.add_argument("--out-dir")
    s = sub(g, "run", "saturate-and-extend from seed groups")
    s.add_argument("--seeds", required=True, help="directory of seed group files")
    s.add_argument("--candidates", help="group file whose generators are the extension candidates")
    s.add_argument("--out-dir")
    return p


def _dispatch(args, cfg, rep):
    key = (args.group, args.cmd)
    if key == ("lattice", "info"):
        return cmd_lattice_info(cfg, rep)
    if key == ("lattice", "shortvec"):
        return cmd_lattice_shortvec(cfg, rep, args.bound, args.vectors)
    if key == ("lattice", "aut"):
        return cmd_lattice_aut(cfg, rep)
    if key == ("lattice", "isom"):
        return cmd_lattice_isom(cfg, rep)
    if key == ("fqs", "milgram"):
        return cmd_fqs_milgram(cfg, rep)
    if key == ("fqs", "classes"):
        return cmd_fqs_classes(cfg, rep)
    if key == ("fqs", "glue"):
        return cmd_fqs_glue(cfg, rep, args.out_dir)
    if key == ("group", "fixlat"):
        return cmd_group_fixlat(cfg, rep, args.out_dir)
    if key == ("group", "order"):
        return cmd_group_order(cfg, rep)
    if key == ("group", "o2"):
        return cmd_group_o2(cfg, rep)
    if key == ("group", "stab"):
        return cmd_group_stab(cfg, rep)
    if key == ("leech", "build"):
        return cmd_leech_build(cfg, rep)
    if key == ("leech", "verify"):
        return cmd_leech_verify(cfg, rep, args.co0)
    if key == ("slattice", "check"):
        return cmd_slattice_check(cfg, rep)
    if key == ("slattice", "type"):
        return cmd_slattice_type(cfg, rep)
    if key == ("element", "find"):
        return cmd_element_find(cfg, rep, args.order, args.rank, args.out_dir)
    if key == ("classify", "e8"):
        return cmd_classify_e8(cfg, rep, args.remove_root, args.out_dir)
    if key == ("classify", "run"):
        return cmd_classify_run(cfg, rep, args.seeds, args.candidates, args.out_dir)
    raise ValueError(f"unknown command {key}")


def _on_alarm(signum, frame):
    raise BudgetExceeded("time budget exceeded")


def _apply_limits(budgets):
    if "time" in budgets:
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.alarm(budgets["time"])
    if "memory" in budgets:
        b = budgets["memory"] * 2 ** 20
        resource.setrlimit(resource.RLIMIT_AS, (b, b))


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=stderr)
    key = (args.group, args.cmd)
    if args.threads < 1:
        stderr.write("error: --threads must be at least 1\n")
        return EXIT_USAGE
    randomized = key in RANDOMIZED or getattr(args, "co0", False)
    if args.seed is None and args.fmt == "json" and randomized:
        stderr.write(f"error: '{' '.join(key)}' is randomized; machine-readable output needs --seed\n")
        return EXIT_USAGE
    try:
        budgets = _budgets_from_env()
    except ValueError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    inputs = [getattr(args, a) for a in ("file", "other") if getattr(args, a, None)]
    cfg = RunConfig(key, inputs, args.seed or 0, budgets, args.output, args.fmt)
    rep = Report(cfg)
    _apply_limits(budgets)
    try:
        _dispatch(args, cfg, rep)
    except ParseError as e:
        stderr.write(f"error: ParseError: {e}\n")
        return EXIT_USAGE
    except (BudgetExceeded, MemoryError) as e:
        stderr.write(f"error: {type(e).__name__}: {e or 'memory budget exceeded'}\n")
        return EXIT_BUDGET
    except FixLatError as e:
        stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE
    finally:
        if "time" in budgets:
            signal.alarm(0)
    rep.emit(stdout)
    if rep.failed:
        stderr.write(f"check failed: {rep.failed[0]}\n")
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
