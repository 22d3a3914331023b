from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixlattice.errors import NotLeechLike, RankZero
from fixlattice.lattice import Lattice, rescale, zero_lattice
from fixlattice.roots import root_lattice
from fixlattice.shortvec import (close_vectors, coset_short_reps, minimum, short_vectors,
                                 vector_count_by_norm)

from . import oracles
from .conftest import even_grams


def _as_pairs(vl):
    return sorted((q, tuple(int(x) for x in v)) for q, v in zip(vl.norms, vl.coords))


def test_examples(e8):
    A2 = root_lattice("A2")
    assert len(short_vectors(A2, 2)) == 6
    assert len(short_vectors(e8, 2)) == 240
    assert minimum(Lattice([[2]])) == 2
    assert minimum(rescale(e8, 2)) == 4
    assert vector_count_by_norm(Lattice([[2]]), 8) == [(2, 2), (8, 2)]
    assert vector_count_by_norm(e8, 4) == [(2, 240), (4, 2160)]
    assert vector_count_by_norm(zero_lattice(), 4) == []
    with pytest.raises(RankZero):
        minimum(zero_lattice())


def test_canonical_order(e8):
    vl = short_vectors(e8, 4)
    keys = [(q, tuple(v)) for q, v in zip(vl.norms, vl.coords.tolist())]
    assert keys == sorted(keys)


@settings(max_examples=300)
@given(even_grams(), st.integers(1, 12))
def test_matches_box_search(G, bound):
    vl = short_vectors(Lattice(G), bound)
    assert _as_pairs(vl) == oracles.short_vectors(G, bound)


@settings(max_examples=100)
@given(even_grams(max_rank=3), st.integers(1, 8), st.sampled_from([2, 3, Fraction(1, 2)]))
def test_rescale_invariance(G, b, n):
    L = Lattice(G)
    assert len(short_vectors(L, b)) == len(short_vectors(rescale(L, n), n * b))


def test_close_vectors():
    L = Lattice([[2, 0], [0, 2]])
    vl = close_vectors(L, [Fraction(1, 2), 0], 1)
    assert len(vl) >= 2


def test_coset_rejects_non_leech(e8):
    with pytest.raises(NotLeechLike):
        coset_short_reps(e8, [0] * 8)


@pytest.mark.slow
def test_leech_counts(leech):
    assert minimum(leech) == 4
    vl = short_vectors(leech, 4)
    assert len(vl) == 196560


def test_coset_dichotomy_samples(leech):
    rng = np.random.default_rng(7)
    assert coset_short_reps(leech, np.zeros(24, dtype=int)).zero_class
    assert coset_short_reps(leech, 2 * np.eye(24, dtype=int)[3]).zero_class
    seen = set()
    for _ in range(50):
        u = rng.integers(-3, 4, size=24)
        r = coset_short_reps(leech, u)
        if r.zero_class:
            continue
        seen.add(int(r.min_norm))
        if r.min_norm <= 6:
            assert len(r.vectors) == 2
            assert (r.vectors.coords[0] == -r.vectors.coords[1]).all()
        else:
            assert r.min_norm == 8 and len(r.vectors) == 48
            G = np.asarray(leech.int_gram.tolist(), dtype=np.int64)
            F = r.vectors.coords
            ips = F @ G @ F.T
            assert ((ips != 0).sum(axis=1) == 2).all()
    assert seen


def test_coset_norm4_vector(leech):
    v = short_vectors(leech, 4).coords[0]
    r = coset_short_reps(leech, v)
    assert r.min_norm == 4 and len(r.vectors) == 2
    assert {tuple(x) for x in r.vectors.coords} == {tuple(v), tuple(-v)}
