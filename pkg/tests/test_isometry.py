import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixlattice import linalg as la
from fixlattice.groups import MatrixGroup
from fixlattice.isometry import automorphism_group, is_isometric, o0_split, pair_is_isometric
from fixlattice.lattice import Lattice, rescale
from fixlattice.roots import root_lattice

from . import oracles
from .conftest import even_grams, unimodular

AUT_ORDERS = {"A1": 2, "A2": 12, "A3": 48, "D4": 1152, "A4": 240, "D5": 3840, "E6": 103680,
              "E7": 2903040, "E8": 696729600}


def _transform(T, L):
    T = la.int_matrix(T.tolist())
    return Lattice(T.dot(L.gram).dot(T.T))


@pytest.mark.parametrize("name,order", AUT_ORDERS.items())
def test_automorphism_orders(name, order):
    L = root_lattice(name)
    G = automorphism_group(L)
    assert G.order == order
    A = np.asarray(L.int_gram.tolist(), dtype=np.int64)
    for g in G.gens:
        assert (g @ A @ g.T == A).all()


def test_e8_order_cross_check(e8):
    refl = []
    A = np.asarray(e8.int_gram.tolist(), dtype=np.int64)
    for i in range(8):
        r = np.eye(8, dtype=np.int64)[i]
        refl.append(np.eye(8, dtype=np.int64) - np.outer(A @ r, r))
    assert MatrixGroup(e8, refl).order == automorphism_group(e8).order


@settings(max_examples=150)
@given(even_grams(max_rank=3, max_entry=6))
def test_automorphism_count_brute_force(G):
    L = Lattice(G)
    assert automorphism_group(L).order == oracles.automorphism_count(G)


def test_is_isometric_examples():
    A2 = root_lattice("A2")
    assert (is_isometric(A2, A2) == np.eye(2, dtype=np.int64)).all()
    assert is_isometric(A2, rescale(A2, 2)) is None
    assert pair_is_isometric((A2, root_lattice("A1")), (A2, root_lattice("A1")))
    assert not pair_is_isometric((A2, root_lattice("A3")), (root_lattice("A3"), A2))


@settings(max_examples=200)
@given(st.data())
def test_is_isometric_scrambled(data):
    L1 = Lattice(data.draw(even_grams()))
    T0 = data.draw(unimodular(L1.rank))
    L2 = _transform(T0, L1)
    T = is_isometric(L1, L2)
    assert T is not None
    T = la.int_matrix(T.tolist())
    assert (T.dot(L2.gram).dot(T.T) == L1.gram).all()
    assert is_isometric(L2, L1) is not None


def test_o0_split_examples(e8):
    s = o0_split(e8)
    assert s.kernel_order == s.full.order and s.obar_order == 1
    s = o0_split(root_lattice("A1"))
    assert s.kernel_order == 2
    s = o0_split(root_lattice("A2"))
    assert s.kernel_order == 6 and s.obar_order == 2


@pytest.mark.parametrize("name", ["A2", "A3", "D4", "A4", "D5", "E6", "E7"])
def test_o0_split_product(name):
    s = o0_split(root_lattice(name))
    assert s.full.order == s.kernel_order * s.obar_order
