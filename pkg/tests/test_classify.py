import numpy as np
import pytest

from fixlattice.classify import (CoxeterDiagram, all_reflections, alpha, chain_holds,
                                 classify_parabolics, e8_diagram, records_match, reflection,
                                 saturate_and_extend, subdiagram_types, verify_orbit_determination)
from fixlattice.errors import NotEven
from fixlattice.groups import MatrixGroup, pointwise_stabilizer, invariant_lattice
from fixlattice.lattice import Lattice
from fixlattice.roots import cartan, root_lattice

I8 = np.eye(8, dtype=np.int64)


@pytest.fixture(scope="module")
def e8_records():
    return classify_parabolics()


def test_alpha():
    assert alpha(root_lattice("E8")) == 8
    assert alpha(root_lattice("A1")) == 0
    assert alpha(root_lattice("D4")) == 2
    with pytest.raises(NotEven):
        alpha(Lattice([[1]]))


def test_subdiagram_counts():
    assert subdiagram_types(CoxeterDiagram.from_gram([[2]])).count == 2
    assert subdiagram_types(CoxeterDiagram.from_gram(cartan("A", 2))).count == 3
    assert subdiagram_types(e8_diagram()).count == 41


def test_subdiagram_brute_force_small():
    # A4 path: induced subgraphs are disjoint unions of paths with total size <= 4
    # types: 0, A1, A2, A1^2, A3, A2A1, A1^3? (no: needs 5 nodes), A4
    assert subdiagram_types(CoxeterDiagram.from_gram(cartan("A", 4))).count == 7


def test_e8_records(e8_records):
    assert len(e8_records) == 41
    first, last = e8_records[0], e8_records[-1]
    assert first.rank == 8 and first.group_order == 1 and first.subset == ()
    assert last.rank == 0 and last.group_order == 696729600 and last.root_type == "E8"
    assert [r.number for r in e8_records] == list(range(1, 42))
    keys = [r.sort_key() for r in e8_records]
    assert keys == sorted(keys)


def test_e8_record_checks(e8_records):
    for r in e8_records:
        assert all(r.checks.values()), (r.number, r.checks)
        assert r.extension_class_count == 1
        assert r.alpha == r.rank - len(__import__("fixlattice.fqs", fromlist=["x"])
                                       .discriminant_form(r.invariant.lattice)[0].orders)


def test_records_pairwise_distinct(e8_records):
    from fixlattice.isometry import pair_is_isometric
    for a in range(len(e8_records)):
        for b in range(a):
            x, y = e8_records[a], e8_records[b]
            if x.fingerprint == y.fingerprint:
                assert not pair_is_isometric(x.pair, y.pair)


def test_e7_subrun():
    records = classify_parabolics(root_lattice("E8"), I8[:7], run_checks=False)
    e7 = CoxeterDiagram.from_gram(cartan("E", 7))
    assert len(records) == subdiagram_types(e7).count


def test_conjugate_parabolics_share_a_record(e8_records):
    from fixlattice.isometry import pair_is_isometric
    e8 = root_lattice("E8")
    a = invariant_lattice(MatrixGroup(e8, [reflection(e8, I8[0])]))
    b = invariant_lattice(MatrixGroup(e8, [reflection(e8, I8[5])]))
    from fixlattice.lattice import orthogonal_complement
    assert pair_is_isometric((a.lattice, orthogonal_complement(a).lattice),
                             (b.lattice, orthogonal_complement(b).lattice))


def test_orbit_determination_examples(e8_records):
    assert verify_orbit_determination(e8_records[-1])
    assert verify_orbit_determination(e8_records[1])   # the A1 record


def test_saturation_from_w_e8():
    e8 = root_lattice("E8")
    W = MatrixGroup(e8, [reflection(e8, I8[i]) for i in range(8)])
    res = saturate_and_extend(W, all_reflections(e8))
    assert len(res.records) == 1 and res.records[0].rank == 0


def test_saturation_from_d4(e8_records):
    e8 = root_lattice("E8")
    seed = MatrixGroup(e8, [reflection(e8, I8[i]) for i in (1, 2, 3, 4)])
    res = saturate_and_extend(seed, all_reflections(e8))
    assert res.records[0].root_type == "D4"
    assert records_match(res.records, e8_records)
    # closed under 2-extension: every extension lands on a record
    assert all(0 <= b < len(res.records) for _, b in res.extensions)


@pytest.mark.slow
def test_saturation_from_a1(e8_records):
    e8 = root_lattice("E8")
    seed = MatrixGroup(e8, [reflection(e8, I8[0])])
    res = saturate_and_extend(seed, all_reflections(e8))
    assert records_match(res.records, e8_records)
    assert len(res.records) == 9


def test_chain_on_parabolic():
    e8 = root_lattice("E8")
    G = MatrixGroup(e8, [reflection(e8, I8[i]) for i in (0, 2, 3)])
    assert chain_holds(pointwise_stabilizer(e8, invariant_lattice(G)))
