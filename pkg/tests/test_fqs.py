from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from fixlattice.errors import InvalidGlue, NoAntiIsometry, NotEven
from fixlattice.fqs import (FiniteQuadraticSpace, FqsMap, GlueClass, anti_isometry, discriminant_form,
                            extension_classes, milgram_signature, orthogonal_group_A,
                            overlattice, overlattice_from_glue)
from fixlattice.isometry import is_isometric
from fixlattice.lattice import Lattice, zero_lattice
from fixlattice.roots import root_lattice
from fixlattice.shortvec import short_vectors

from . import oracles
from .conftest import even_grams

TRIVIAL = FiniteQuadraticSpace([], [])


def test_discriminant_examples(e8):
    A, _ = discriminant_form(e8)
    assert A.size == 1
    A, lift = discriminant_form(root_lattice("A1"))
    assert A.orders == (2,) and A.q((1,)) == Fraction(1, 2)
    A, _ = discriminant_form(root_lattice("A2"))
    assert A.orders == (3,)
    assert A.q((1,)) == A.q((2,)) == Fraction(2, 3)
    with pytest.raises(NotEven):
        discriminant_form(Lattice([[1]]))


def test_milgram_examples():
    assert milgram_signature(TRIVIAL) == 0
    assert milgram_signature(discriminant_form(root_lattice("A1"))[0]) == 1
    assert milgram_signature(discriminant_form(root_lattice("A2"))[0]) == 2


def test_orthogonal_group_examples():
    assert orthogonal_group_A(TRIVIAL)[1] == 1
    assert orthogonal_group_A(discriminant_form(root_lattice("A1"))[0])[1] == 1
    assert orthogonal_group_A(discriminant_form(root_lattice("A2"))[0])[1] == 2
    assert orthogonal_group_A(discriminant_form(root_lattice("D4"))[0])[1] == 6


def test_anti_isometry_examples():
    assert anti_isometry(TRIVIAL, TRIVIAL) is not None
    A1 = discriminant_form(root_lattice("A1"))[0]
    # q = 1/2 and -q = 3/2 differ mod 2, so Z/2 is not anti-isometric to itself
    assert anti_isometry(A1, A1) is None
    E6 = discriminant_form(root_lattice("E6"))[0]
    A2 = discriminant_form(root_lattice("A2"))[0]
    i = anti_isometry(E6, A2)
    assert i is not None
    for a in E6.elements():
        assert (A2.q(i(a)) + E6.q(a)) % 2 == 0


def test_extension_class_examples(e8):
    assert len(extension_classes(e8, zero_lattice())) == 1
    assert len(extension_classes(root_lattice("A1"), root_lattice("E7"))) == 1
    cls = extension_classes(root_lattice("E6"), root_lattice("A2"))
    assert len(cls) == 1
    M = overlattice_from_glue(root_lattice("E6"), root_lattice("A2"), cls[0])
    assert M.det == 1 and M.is_even
    assert is_isometric(M, e8) is not None
    with pytest.raises(NoAntiIsometry):
        extension_classes(root_lattice("A1"), root_lattice("A1"))


def test_extension_classes_symmetric():
    for K, Kp in [("E6", "A2"), ("A1", "E7"), ("D4", "D4")]:
        a = extension_classes(root_lattice(K), root_lattice(Kp))
        b = extension_classes(root_lattice(Kp), root_lattice(K))
        assert len(a) == len(b)


def test_overlattice_trivial_glue(e8):
    c = extension_classes(e8, zero_lattice())[0]
    assert overlattice_from_glue(e8, zero_lattice(), c) == e8


def test_d8_spinor_glue(e8):
    D8 = root_lattice("D8")
    A, lift = discriminant_form(D8)
    iso = [a for a in A.elements() if any(a) and A.q(a) == 0]
    assert iso
    hits = 0
    for a in iso:
        v = np.asarray(a, dtype=object).dot(lift)
        M = overlattice(D8, [v])
        if M.det == 1:
            hits += 1
            assert len(short_vectors(M, 2)) == 240
    assert hits == 2


def test_invalid_glue():
    K, Kp = root_lattice("E6"), root_lattice("A2")
    c = extension_classes(K, Kp)[0]
    bad = GlueClass(FqsMap(c.glue.source, c.glue.target, np.zeros_like(c.glue.images)))
    with pytest.raises(InvalidGlue):
        overlattice_from_glue(K, Kp, bad)
    with pytest.raises(InvalidGlue):
        overlattice_from_glue(Kp, K, c)


@settings(max_examples=200)
@given(even_grams(max_rank=3, max_entry=6))
def test_discriminant_values_match_enumeration(G):
    A, _ = discriminant_form(Lattice(G))
    assert sorted(A.q(a) for a in A.elements()) == oracles.discriminant_values(G)


@settings(max_examples=200)
@given(even_grams(max_rank=3, max_entry=8))
def test_milgram_matches_numeric_gauss_sum(G):
    A, _ = discriminant_form(Lattice(G))
    values = [A.q(a) for a in A.elements()]
    assert milgram_signature(A) == oracles.gauss_sum_signature(values)
