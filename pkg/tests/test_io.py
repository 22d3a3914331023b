from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from fixlattice import io
from fixlattice.errors import NotPositiveDefinite, ParseError
from fixlattice.fqs import discriminant_form
from fixlattice.groups import MatrixGroup
from fixlattice.lattice import Lattice, sublattice, zero_lattice
from fixlattice.roots import root_lattice

from .conftest import even_grams


def test_rationals():
    assert io.rational_to_json(Fraction(3, 4)) == "3/4"
    assert io.rational_to_json(Fraction(-6, 3)) == -2
    assert io.rational_from_json("-3/4") == Fraction(-3, 4)
    assert io.rational_from_json(5) == 5
    for bad in ("1/0", "x", 1.5, True):
        with pytest.raises(ValueError):
            io.rational_from_json(bad)


@pytest.mark.parametrize("make", [
    lambda: root_lattice("E8"),
    lambda: Lattice([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), 3]]),
    zero_lattice,
    lambda: sublattice(root_lattice("E8"), [[1, 0, 0, 0, 0, 0, 0, 0], [0, 2, 0, 0, 0, 0, 0, 0]]),
    lambda: discriminant_form(root_lattice("D4"))[0],
    lambda: MatrixGroup(root_lattice("A2"), [[[0, 1], [1, 0]]], name="swap"),
])
def test_round_trip(make):
    obj = make()
    text = io.to_text(obj)
    again = io.loads(text)
    assert io.to_text(again) == text


@settings(max_examples=100)
@given(even_grams())
def test_round_trip_random(G):
    L = Lattice(G)
    assert io.loads(io.to_text(L)) == L


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        io.loads('{"rank": 1, "gram": [[2]')
    assert e.value.line == 1 and e.value.column is not None
    with pytest.raises(ParseError) as e:
        io.loads('{"rank": 2,\n "gram": [[2, 1], [1, "z"]]}')
    assert e.value.line == 2
    with pytest.raises(ParseError):
        io.loads('{"gram": [[2]]}')
    with pytest.raises(ParseError):
        io.loads('[1, 2]')
    with pytest.raises(ParseError):
        io.loads('{"kind": "group", "ambient": {"rank": 1, "gram": [[2]]}, "generators": [[[2]]]}')


def test_semantic_errors_pass_through():
    with pytest.raises(NotPositiveDefinite):
        io.loads('{"rank": 1, "gram": [[-2]]}')


def test_embedded_gram_consistency():
    S = sublattice(root_lattice("A2"), [[1, 0]])
    text = io.to_text(S).replace('"gram": [\n    [2]\n  ]', '"gram": [\n    [4]\n  ]')
    assert '[4]' in text
    with pytest.raises(ParseError):
        io.loads(text)


def test_file_io(tmp_path):
    p = tmp_path / "e8.json"
    io.save(root_lattice("E8"), p)
    assert io.load(p) == root_lattice("E8")
    assert io.load(p, "lattice") == root_lattice("E8")
    with pytest.raises(ParseError):
        io.load(p, "group")
