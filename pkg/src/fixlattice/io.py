"""JSON documents for lattices, embedded lattices, matrix groups and quadratic spaces.

Rationals are written as integers when integral and as ``"p/q"`` strings
otherwise.  Matrices put one row per line so files diff cleanly.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParseError
from .fqs import FiniteQuadraticSpace
from .groups import MatrixGroup
from .lattice import EmbeddedLattice, Lattice

FORMAT = "fixlattice/1"

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


# -- scalars ---------------------------------------------------------------------

def rational_to_json(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(v, where="value") -> Fraction:
    if isinstance(v, bool):
        raise ValueError(f"{where}: expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        m = _RAT.match(v)
        if m and (m.group(2) is None or int(m.group(2)) != 0):
            return Fraction(int(m.group(1)), int(m.group(2) or 1))
    raise ValueError(f"{where}: expected an integer or a 'p/q' string, got {v!r}")


def matrix_to_json(M) -> list:
    return [[rational_to_json(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]


def _int_rows(v, where) -> list[list[int]]:
    rows = [[rational_from_json(x, where) for x in r] for r in v]
    if any(x.denominator != 1 for r in rows for x in r):
        raise ValueError(f"{where}: entries must be integers")
    return [[int(x) for x in r] for r in rows]


# -- text layout -------------------------------------------------------------------

def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with flat lists kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and not _is_flat(obj):
        items = [pad + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if isinstance(obj, list):
        return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
    return json.dumps(obj)


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    i = text.find(json.dumps(key))
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


def _parse(text: str, path=None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, path) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1, path)
    return doc


class _Reader:
    def __init__(self, text, path):
        self.text, self.path = text, path

    def fail(self, msg, key):
        line, col = _locate(self.text, key)
        raise ParseError(msg, line, col, self.path)

    def field(self, doc, key):
        if key not in doc:
            raise ParseError(f"missing field '{key}'", 1, 1, self.path)
        return doc[key]

    def call(self, key, fn, *args):
        try:
            return fn(*args)
        except ParseError:
            raise
        except (ValueError, TypeError, IndexError) as e:
            self.fail(str(e), key)


# -- lattices ----------------------------------------------------------------------

def lattice_to_dict(L: Lattice) -> dict:
    d = {"format": FORMAT, "kind": "lattice"}
    if L.name:
        d["name"] = L.name
    d["rank"] = L.rank
    d["gram"] = matrix_to_json(L.gram)
    return d


def embedded_to_dict(S: EmbeddedLattice) -> dict:
    d = {"format": FORMAT, "kind": "embedded", "rank": S.rank,
         "gram": matrix_to_json(S.gram),
         "ambient": lattice_to_dict(S.ambient),
         "basis": matrix_to_json(S.basis)}
    return d


def group_to_dict(G: MatrixGroup, order: int | None = None) -> dict:
    d = {"format": FORMAT, "kind": "group"}
    if G.name:
        d["name"] = G.name
    d["ambient"] = lattice_to_dict(G.ambient)
    d["generators"] = [matrix_to_json(g) for g in G.gens]
    if order is not None:
        d["order"] = str(order)
    return d


def fqs_to_dict(A: FiniteQuadraticSpace) -> dict:
    return {"format": FORMAT, "kind": "fqs", "orders": list(A.orders),
            "qgram": matrix_to_json(A.qgram) if A.orders else []}


def _lattice_from(doc: dict, r: _Reader) -> Lattice:
    rank = r.field(doc, "rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        r.fail("rank must be a non-negative integer", "rank")
    gram = r.field(doc, "gram")
    if not isinstance(gram, list) or len(gram) != rank or any(
            not isinstance(row, list) or len(row) != rank for row in gram):
        r.fail(f"gram must be a {rank}x{rank} array", "gram")
    G = r.call("gram", lambda: [[rational_from_json(x, "gram") for x in row] for row in gram])
    return r.call("gram", Lattice, G, doc.get("name"))


def _embedded_from(doc: dict, r: _Reader) -> EmbeddedLattice:
    amb = r.field(doc, "ambient")
    if not isinstance(amb, dict):
        r.fail("ambient must be a lattice object", "ambient")
    A = _lattice_from(amb, r)
    basis = r.field(doc, "basis")
    rows = r.call("basis", _int_rows, basis, "basis")
    if any(len(row) != A.rank for row in rows):
        r.fail("basis rows must have the ambient rank", "basis")
    S = r.call("basis", EmbeddedLattice, A, np.array(rows, dtype=object).reshape(len(rows), A.rank))
    if "gram" in doc:
        G = r.call("gram", lambda: [[rational_from_json(x, "gram") for x in row] for row in doc["gram"]])
        if [list(map(Fraction, row)) for row in S.gram.tolist()] != G:
            r.fail("gram does not match the basis", "gram")
    return S


def _group_from(doc: dict, r: _Reader) -> MatrixGroup:
    amb = r.field(doc, "ambient")
    if not isinstance(amb, dict):
        r.fail("ambient must be a lattice object", "ambient")
    A = _lattice_from(amb, r)
    gens = r.field(doc, "generators")
    if not isinstance(gens, list):
        r.fail("generators must be a list of matrices", "generators")
    mats = []
    for g in gens:
        rows = r.call("generators", _int_rows, g, "generators")
        if len(rows) != A.rank or any(len(row) != A.rank for row in rows):
            r.fail("generators must be square of the ambient rank", "generators")
        mats.append(np.array(rows, dtype=np.int64).reshape(A.rank, A.rank))
    order = doc.get("order")
    order = r.call("order", int, order) if order is not None else None
    return r.call("generators", MatrixGroup, A, mats, None, order, True, doc.get("name"))


def _fqs_from(doc: dict, r: _Reader) -> FiniteQuadraticSpace:
    orders = r.field(doc, "orders")
    qgram = r.field(doc, "qgram")
    if not isinstance(orders, list) or not all(isinstance(d, int) for d in orders):
        r.fail("orders must be a list of integers", "orders")
    Q = r.call("qgram", lambda: [[rational_from_json(x, "qgram") for x in row] for row in qgram])
    return r.call("qgram", FiniteQuadraticSpace, orders, Q)


_READERS = {"lattice": _lattice_from, "embedded": _embedded_from,
            "group": _group_from, "fqs": _fqs_from}


def loads(text: str, path=None, kind: str | None = None):
    """Parse a document; ``kind`` restricts what is accepted."""
    doc = _parse(text, path)
    r = _Reader(text, path)
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        r.fail(f"unsupported format {fmt!r}", "format")
    k = doc.get("kind", "embedded" if "basis" in doc else "lattice")
    if k not in _READERS:
        r.fail(f"unknown kind {k!r}", "kind")
    if kind is not None and k != kind:
        if not (kind == "lattice" and k == "embedded"):
            r.fail(f"expected a {kind} document, got {k}", "kind")
        return _embedded_from(doc, r).lattice
    return _READERS[k](doc, r)


def load(path, kind: str | None = None):
    p = Path(path)
    return loads(p.read_text(), str(p), kind)


def to_dict(obj) -> dict:
    if isinstance(obj, Lattice):
        return lattice_to_dict(obj)
    if isinstance(obj, EmbeddedLattice):
        return embedded_to_dict(obj)
    if isinstance(obj, MatrixGroup):
        return group_to_dict(obj)
    if isinstance(obj, FiniteQuadraticSpace):
        return fqs_to_dict(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def save(obj, path) -> None:
    Path(path).write_text(dumps(to_dict(obj)) + "\n")


def to_text(obj) -> str:
    return dumps(to_dict(obj)) + "\n"
