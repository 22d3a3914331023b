import numpy as np
import pytest

from fixlattice.roots import (diagram_type, format_type, group_order_of_type, parse_type,
                              root_lattice, root_system_type, weyl_order)
from fixlattice.shortvec import short_vectors

ROOT_COUNTS = {"A1": 2, "A2": 6, "A3": 12, "D4": 24, "D5": 40, "E6": 72, "E7": 126, "E8": 240}


@pytest.mark.parametrize("name,count", ROOT_COUNTS.items())
def test_root_lattices(name, count):
    L = root_lattice(name)
    vl = short_vectors(L, 2)
    assert len(vl) == count
    R = vl.coords
    assert format_type(root_system_type(R, np.asarray(L.int_gram.tolist(), dtype=np.int64))) == name


def test_weyl_orders():
    assert weyl_order("A", 4) == 120
    assert weyl_order("D", 4) == 192
    assert weyl_order("E", 6) == 51840
    assert weyl_order("E", 7) == 2903040
    assert weyl_order("E", 8) == 696729600


def test_type_strings():
    assert format_type(parse_type("A1 A2 A1")) == "A2 A1^2"
    assert format_type(parse_type("A1^2 D4 E6")) == "E6 D4 A1^2"
    assert format_type([]) == "0"
    assert group_order_of_type("A2 A1^2") == 24


def test_diagram_types():
    path = {0: {1}, 1: {0, 2}, 2: {1}}
    assert format_type(diagram_type(path)) == "A3"
    star = {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}}
    assert format_type(diagram_type(star)) == "D4"
    assert format_type(diagram_type({0: set(), 1: set()})) == "A1^2"
