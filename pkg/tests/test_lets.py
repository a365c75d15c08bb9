import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclets.lets import (
    Expansion,
    LetsStructure,
    NormalGraph,
    StructureDb,
    admissibility_table,
    apply_dot,
    apply_pa,
    brute_force_structures,
    canonical_certificate,
    certificate_from_edges,
    chromatic_index,
    class_of,
    enumerate_structures,
    is_overfull,
)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return NormalGraph.from_edges(10, outer + spokes + inner)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return NormalGraph.from_edges(n, chosen)


@given(graphs(), st.randoms())
def test_certificate_is_relabel_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_certificate(g.relabel(perm)) == canonical_certificate(g)


@given(graphs())
def test_certificate_from_edges_agrees(g):
    assert certificate_from_edges(g.n, g.edges) == canonical_certificate(g)


def test_certificate_separates_non_isomorphic():
    c6 = NormalGraph.cycle(6)
    two_triangles = NormalGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_certificate(c6) != canonical_certificate(two_triangles)


def test_normal_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        NormalGraph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        NormalGraph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        NormalGraph.from_edges(3, [(0, 5)])


@pytest.mark.parametrize(
    "graph,expected",
    [
        (NormalGraph.cycle(4), 2),
        (NormalGraph.cycle(5), 3),
        (NormalGraph.from_edges(4, list(itertools.combinations(range(4), 2))), 3),  # K4
        (NormalGraph.from_edges(5, list(itertools.combinations(range(5), 2))), 5),  # K5, overfull
        (petersen(), 4),
    ],
)
def test_chromatic_index_known(graph, expected):
    assert chromatic_index(graph) == expected


def _brute_colorable(g, k):
    for colours in itertools.product(range(k), repeat=len(g.edges)):
        ok = True
        for v in range(g.n):
            seen = [colours[i] for i, e in enumerate(g.edges) if v in e]
            if len(seen) != len(set(seen)):
                ok = False
                break
        if ok:
            return True
    return False


@settings(max_examples=40)
@given(graphs(max_n=6))
def test_chromatic_index_vizing_and_brute(g):
    if not g.edges:
        return
    delta = max(g.degrees)
    chi = chromatic_index(g)
    assert chi in (delta, delta + 1)
    if len(g.edges) <= 9:
        assert _brute_colorable(g, chi) and not _brute_colorable(g, chi - 1)
    if is_overfull(g):
        assert chi == delta + 1


def test_class_of():
    # a k-cycle in a dv-regular code: each node leaves dv-2 unsatisfied checks
    assert class_of(NormalGraph.cycle(4), 3) == (4, 4)
    assert class_of(NormalGraph.cycle(3), 4) == (3, 6)


def test_expansion_parse_round_trip():
    for e in [Expansion("dot", 2), Expansion("pa", 3), Expansion("lo", 4, 4), Expansion("lo", 4, 3)]:
        assert Expansion.parse(str(e)) == e
    with pytest.raises(ValueError):
        Expansion("lo", 3, 4)
    with pytest.raises(ValueError):
        Expansion.parse("zz2")


def test_expansion_child_class():
    assert Expansion("dot", 2).child_class(10, 4, 3) == (11, 3)
    assert Expansion("pa", 2).child_class(4, 4, 3) == (6, 4)
    assert Expansion("dot", 3).child_class(4, 4, 4) == (5, 2)


def test_dot_and_pa_on_cycle():
    s = LetsStructure.from_graph(NormalGraph.cycle(4), 3)
    dots = apply_dot(s, 2, 8)
    # dot2 on an 8-cycle root (4 nodes) needs the two ends at distance >= 2 for girth 8
    assert {c.cls for c in dots} == {(5, 3)}
    pas = apply_pa(s, 2, 8)
    assert all(c.cls == (6, 4) for c in pas)


@pytest.mark.parametrize("dv,g,a_max", [(3, 6, 8), (3, 8, 10), (4, 6, 6), (4, 8, 8), (5, 6, 6)])
def test_closure_matches_brute_force(dv, g, a_max):
    db = enumerate_structures(dv, g, a_max, a_max * dv)
    bf = brute_force_structures(dv, g, a_max)
    got = {}
    for s in db.structures.values():
        got.setdefault(s.cls, set()).add(s.certificate)
    want = {k: v for k, v in bf.items() if k[0] >= g // 2}
    assert got == want


def test_universe_example_counts():
    db = enumerate_structures(3, 8, 10, 9)
    assert len(db.by_class(5, 3)) == 1
    assert len(db.by_class(10, 4)) == 63


def test_table1_spot_checks():
    t = admissibility_table(enumerate_structures(3, 6, 9, 9), b_max=3)
    assert t[(8, 2)][3] == (13, 14)
    assert t[(5, 1)] == {3: (0, 1)}
    assert t[(7, 1)] == {3: (0, 3), 4: (0, 1)}
    assert t[(9, 1)] == {3: (0, 15), 4: (0, 4)}


def test_dv4_g8_eleven_zero_not_admissible():
    t = admissibility_table(enumerate_structures(4, 8, 11, 8), b_max=2, missing_only=True)
    assert t[(11, 0)] == {4: (0, 2)}
    assert t[(9, 2)] == {4: (0, 2)}
    assert t[(11, 2)] == {4: (0, 19)}


def test_qc_view_drops_class2():
    db = enumerate_structures(3, 6, 7, 3)
    view = db.qc_view()
    assert all(chromatic_index(s.graph) <= 3 for s in view.structures.values())
    assert (5, 1) not in {s.cls for s in view.structures.values()}
    for p, kids in view.children.items():
        assert p in view and all(c in view for c in kids)


def test_db_text_round_trip():
    db = enumerate_structures(3, 8, 9, 6)
    back = StructureDb.from_text(db.to_text())
    assert set(back.structures) == set(db.structures)
    assert back.class_counts(qc_only=True) == db.class_counts(qc_only=True)
    assert {p: {c: e for c, e in k.items()} for p, k in back.children.items()} == {
        p: {c: e for c, e in k.items()} for p, k in db.children.items() if k
    }


def test_db_from_text_rejects_version():
    with pytest.raises(ValueError):
        StructureDb.from_text("structuredb v99 dv=3 g=8 a_max=5 b_max_search=3\n")


def test_labels_are_stable():
    db = enumerate_structures(3, 8, 8, 6)
    labels = sorted(db.label(c) for c in db.structures)
    again = enumerate_structures(3, 8, 8, 6)
    assert labels == sorted(again.label(c) for c in again.structures)
    assert db.label(db.by_class(4, 4)[0].certificate) == "(4,4){1}"


def test_parents_of_admissible_are_admissible():
    db = enumerate_structures(3, 6, 9, 6)
    for child, parents in db.parents.items():
        if db[child].qc_admissible:
            # subgraphs of a dv-edge-colourable graph are colourable
            assert all(db[p].qc_admissible for p in parents)
