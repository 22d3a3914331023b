from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixlattice import linalg as la
from fixlattice.isometry import is_isometric
from fixlattice.errors import NotContained, NotIntegral, NotPositiveDefinite, RankMismatch
from fixlattice.lattice import (EmbeddedLattice, Lattice, direct_sum, dual, orthogonal_complement,
                                rescale, saturate, sublattice, sublattice_index, whole, zero_lattice)
from fixlattice.roots import root_lattice
from fixlattice.shortvec import minimum, vector_count_by_norm

from .conftest import even_lattices

A1 = Lattice([[2]])


def test_flags_recomputed():
    L = Lattice([[Fraction(1, 2), 0], [0, 2]])
    assert not L.is_integral and not L.is_even
    assert Lattice([[1]]).is_integral and not Lattice([[1]]).is_even
    assert root_lattice("E8").is_even


def test_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        Lattice([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        Lattice([[2, 1], [0, 2]])


def test_rank_zero():
    Z = zero_lattice()
    assert Z.rank == 0 and Z.det == 1 and Z.is_even


def test_dual_examples(e8):
    assert dual(e8).index == 1
    assert is_isometric(Lattice(dual(e8).dual_gram), e8) is not None
    d = dual(A1)
    assert d.dual_gram.tolist() == [[Fraction(1, 2)]] and d.index == 2
    with pytest.raises(NotIntegral):
        dual(Lattice([[Fraction(1, 2)]]))


def test_saturate_examples():
    Z2 = Lattice([[1, 0], [0, 1]])
    assert saturate(sublattice(Z2, [[2, 0]])).basis.tolist() == [[1, 0]]
    S = sublattice(Z2, [[1, 2]])
    assert saturate(S) == S
    v = [1, 2, 3]
    Z3 = Lattice(np.eye(3, dtype=int).tolist())
    T = sublattice(Z3, [[2 * x for x in v], [3 * x for x in v]])
    assert T == sublattice(Z3, [v])


def test_complement_examples(e8):
    assert orthogonal_complement(whole(e8)).rank == 0
    assert orthogonal_complement(sublattice(e8, np.zeros((0, 8), dtype=int))) == whole(e8)
    C = orthogonal_complement(sublattice(e8, [[1, 0, 0, 0, 0, 0, 0, 0]]))
    assert C.rank == 7 and C.lattice.det == 2
    assert vector_count_by_norm(C.lattice, 2) == [(2, 126)]


def test_direct_sum_and_rescale(e8):
    assert direct_sum(A1, zero_lattice()) == A1
    assert direct_sum(A1, A1).gram.tolist() == [[2, 0], [0, 2]]
    assert direct_sum(root_lattice("E6"), root_lattice("A2")).det == 9
    assert rescale(A1, 1) == A1
    assert minimum(rescale(e8, 2)) == 4
    half = rescale(root_lattice("A2"), Fraction(1, 2))
    assert not half.is_integral


def test_sublattice_index():
    Z = Lattice([[1]])
    assert sublattice_index(whole(Z), whole(Z)) == 1
    assert sublattice_index(sublattice(Z, [[2]]), whole(Z)) == 2
    Z2 = Lattice([[1, 0], [0, 1]])
    with pytest.raises(RankMismatch):
        sublattice_index(sublattice(Z2, [[1, 0]]), whole(Z2))
    with pytest.raises(NotContained):
        sublattice_index(sublattice(Z2, [[1, 0]]), sublattice(Z2, [[2, 0]]))


def test_embedded_equality_is_basis_equality(e8):
    a = sublattice(e8, [[1, 1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]])
    b = sublattice(e8, [[1, 0, 0, 0, 0, 0, 0, 0], [0, -1, 0, 0, 0, 0, 0, 0]])
    assert a == b and hash(a) == hash(b)


def _rows(draw, n, k):
    return [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(k)]


@settings(max_examples=200)
@given(st.data())
def test_double_complement_random_ambient(data):
    L = data.draw(even_lattices())
    k = data.draw(st.integers(0, L.rank))
    S = sublattice(L, _rows(data.draw, L.rank, k))
    assert orthogonal_complement(orthogonal_complement(S)) == saturate(S)
    C = orthogonal_complement(S)
    assert C.rank + saturate(S).rank == L.rank
