import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclets.known_codes import P2
from qclets.lets import BudgetExceeded, Expansion, enumerate_structures
from qclets.plan import in_ranges, plan_for
from qclets.qcgraph import ExponentMatrix, cycle_spectrum, girth, lift
from qclets.search import (
    ClassCounts,
    SearchBudget,
    SearchContext,
    brute_force_counts,
    enumerate_cycles,
    exhaustive_enumerate,
    grow,
    layered_find,
    structure_db,
)

from conftest import random_matrix


def _lift(seed, m=3, n=4, N_lo=7, N_hi=13, g=6):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(N_lo, N_hi + 1))
    return lift(random_matrix(rng, m, n, N, min_girth=g))


@settings(max_examples=8)
@given(st.integers(0, 2**31), st.booleans())
def test_exhaustive_matches_brute_force(seed, symmetric):
    T = _lift(seed)
    got = exhaustive_enumerate(T, 5, 5, symmetric=symmetric).nonzero()
    assert got == brute_force_counts(T, 5, 5).nonzero()


def test_brute_force_orbit_weighting_is_exact():
    for seed in range(3):
        T = _lift(seed, n=5, N_lo=9, N_hi=12)
        assert brute_force_counts(T, 5, symmetric=True).nonzero() == brute_force_counts(T, 5).nonzero()


def test_composite_N_short_orbits():
    # N = 12 admits instances fixed by a nontrivial shift; orbit sizes must follow the stabilizer
    rng = np.random.default_rng(7)
    P = random_matrix(rng, 3, 4, 12, min_girth=6)
    T = lift(P)
    assert exhaustive_enumerate(T, 6, 6, symmetric=True).nonzero() == brute_force_counts(T, 6, 6).nonzero()


def test_canonical_orbit_size():
    T = lift(ExponentMatrix.from_rows([[0, 0, 0], [0, 1, 3], [0, 2, 5]], 6))
    ctx = SearchContext(T, symmetric=True)
    nodes = (0, 3, 7, 10)  # invariant under a shift by 3
    rep, size = ctx.canonical(nodes)
    orbit = {ctx.shift(nodes, k) for k in range(6)}
    assert size == len(orbit) == 3
    assert rep == min(orbit)
    for k in range(6):
        assert ctx.canonical(ctx.shift(nodes, k)) == (rep, size)


def test_context_without_symmetry_is_identity():
    ctx = SearchContext(lift(P2.matrix), symmetric=False)
    assert ctx.canonical((5, 1, 3)) == ((1, 3, 5), 1)


def test_context_rejects_irregular():
    T = lift(ExponentMatrix.from_rows([[0, 0], [0, None]], 5))
    with pytest.raises(ValueError):
        SearchContext(T)


def test_cycles_match_cycle_spectrum():
    rng = np.random.default_rng(3)
    P = random_matrix(rng, 3, 4, 9, min_girth=6)
    T = lift(P)
    g = girth(P, 12)
    k = g // 2
    spec = cycle_spectrum(T, max_len=g)
    for symmetric in (False, True):
        cycles = enumerate_cycles(SearchContext(T, symmetric), k)
        assert sum(cycles.values()) == spec[g]


def test_grow_children_contain_parent_and_classify():
    T = lift(P2.matrix)
    ctx = SearchContext(T, symmetric=True)
    rep = next(iter(enumerate_cycles(ctx, 4)))
    kids = list(grow(ctx, rep, [Expansion("dot", 2), Expansion("pa", 2)]))
    assert kids
    for child, exp in kids:
        assert set(rep) < set(child)
        assert len(child) == len(rep) + (1 if exp.kind == "dot" else exp.m)
        info = ctx.classify(child)
        assert info is not None
        assert info[0] == exp.child_class(4, 4, 3)


def test_classify_rejects_non_lets():
    T = lift(P2.matrix)
    ctx = SearchContext(T)
    assert ctx.classify([0, 1]) is None  # two unconnected nodes of one column block
    cyc = next(iter(enumerate_cycles(ctx, 4)))
    assert ctx.classify(cyc)[0] == (4, 4)
    assert ctx.classify(cyc[:3]) is None  # a path is not leafless


def test_class_counts_csv_round_trip():
    c = ClassCounts({(4, 4): 558, (9, 3): 465, (5, 3): 0})
    assert ClassCounts.from_csv(c.to_csv()) == c
    assert c[(7, 3)] == 0
    assert c.nonzero() == {(4, 4): 558, (9, 3): 465}


def test_budget_exceeded():
    T = lift(P2.matrix)
    with pytest.raises(BudgetExceeded):
        exhaustive_enumerate(T, 8, 4, symmetric=False, budget=SearchBudget(max_instances=10))


@settings(max_examples=6)
@given(st.integers(0, 2**31))
def test_layered_find_agrees_with_enumeration(seed):
    T = _lift(seed, n=5, N_lo=8, N_hi=14)
    ranges = [(5, 3), (6, 2)]
    db = structure_db(3, 6, 6, 9)
    plan = plan_for(db, ranges)
    verdict = layered_find(T, plan)
    counts = exhaustive_enumerate(T, 6, 3, symmetric=True)
    dirty = any(n for cls, n in counts.nonzero().items() if in_ranges(cls, ranges))
    assert verdict.clean == (not dirty)
    if not verdict.clean:
        info = SearchContext(T).classify(verdict.witness)
        assert info is not None and in_ranges(info[0], ranges)


def test_layered_find_on_p2():
    db = structure_db(3, 8, 12, 9)
    assert layered_find(lift(P2.matrix), plan_for(db, [(8, 3), (10, 2)])).clean
    v = layered_find(lift(P2.matrix), plan_for(db, (12, 3)))
    assert not v.clean and v.label.startswith("(9,3)")


def test_layered_find_checks_dv():
    plan = plan_for(enumerate_structures(4, 6, 5, 8), (5, 4))
    with pytest.raises(ValueError):
        layered_find(lift(P2.matrix), plan)
