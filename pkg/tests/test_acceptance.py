"""Acceptance criteria 1-9.

Each test records one pass/fail line per criterion (see conftest), printed in
the terminal summary.  Slow tests reproduce published multiplicities on the
full-size codes and take minutes each.
"""

from collections import Counter, defaultdict

import numpy as np
import pytest

from conftest import random_matrix, record_criterion

from qclets.decoder import DecoderConfig, MinSumDecoder, code_rate, fer_point
from qclets.designer import DesignSpec, construct_fixed_N, verify
from qclets.known_codes import (
    C1_COUNTS,
    C2_COUNTS,
    C4_COUNTS,
    C5_COUNTS,
    P1,
    P2,
    P4,
    P5,
    TABLE_II_BOTTOM,
    TABLE_II_TOP,
    TABLE_III_DV3_G8,
    TABLES,
    char_table,
)
from qclets.lets import admissibility_table, brute_force_structures, enumerate_structures
from qclets.plan import build_plan, compute_target_set, cost_report, parent_cover
from qclets.qcgraph import bfs_girth, girth, lift
from qclets.search import brute_force_counts, default_b_search, exhaustive_enumerate, structure_db

GIRTH_FIXTURES = [c for t in TABLES.values() for c in t] + [P1, P2, P4, P5]


def _check(number, ok, detail):
    record_criterion(number, ok, detail)
    assert ok, detail


# -- 1 ----------------------------------------------------------------------


@pytest.mark.parametrize("code", GIRTH_FIXTURES, ids=lambda c: c.name)
def test_criterion1_girth(code):
    g_dp = girth(code.matrix, code.girth)
    g_bfs = bfs_girth(lift(code.matrix))
    ok = g_dp >= code.girth and g_bfs is not None and g_bfs >= code.girth
    _check(1, ok, f"{code.name} dp>={g_dp} bfs={g_bfs} stated>={code.girth}")


# -- 2 ----------------------------------------------------------------------


def _compare(published, counts):
    diff = {cls: (n, counts[cls]) for cls, n in published.items() if counts[cls] != n}
    return not diff, diff


@pytest.mark.slow
def test_criterion2_c2():
    T = lift(P2.matrix)
    counts = exhaustive_enumerate(T, 12, 3, symmetric=True)
    # (4,4) has b = 4, outside b <= 3; it comes from its own rectangle
    counts.counts[(4, 4)] = exhaustive_enumerate(T, 4, 4, symmetric=True)[(4, 4)]
    ok, diff = _compare(C2_COUNTS, counts)
    _check(2, ok, f"C2 on P2 a<=12 b<=3 mismatches={diff}")


@pytest.mark.slow
def test_criterion2_c1():
    counts = exhaustive_enumerate(lift(P1.matrix), 12, 4, symmetric=True)
    ok, diff = _compare(C1_COUNTS, counts)
    _check(2, ok, f"C1 on P1 a<=12 b<=4 mismatches={diff}")


@pytest.mark.slow
def test_criterion2_c4():
    counts = exhaustive_enumerate(lift(P4.matrix), 8, 6, symmetric=True)
    ok, diff = _compare(C4_COUNTS, counts)
    _check(2, ok, f"C4 on P4 a<=8 b<=6 mismatches (published, ours)={diff}")


@pytest.mark.slow
def test_criterion2_c5():
    counts = exhaustive_enumerate(lift(P5.matrix), 8, 5, symmetric=True)
    ok = counts.nonzero() == C5_COUNTS
    _check(2, ok, f"C5 on P5 a<=8 b<=5 nonzero={counts.nonzero()}")


# -- 3 ----------------------------------------------------------------------


CLEAN_FIXTURES = [c for t in TABLES.values() for c in t] + [P1]


@pytest.mark.slow
@pytest.mark.parametrize("code", CLEAN_FIXTURES, ids=lambda c: c.name)
def test_criterion3_clean(code):
    audit = verify(code.matrix, code.clean, code.girth)
    _check(3, audit.clean, f"{code.name} over {list(code.clean)}: dirty={audit.dirty_classes}")


# -- 4 ----------------------------------------------------------------------


def test_criterion4_structure_universe():
    db = structure_db(3, 8, 12, default_b_search(3, 3))
    n53 = len(db.by_class(5, 3))
    n104 = len(db.by_class(10, 4))
    qc = compute_target_set(db, (12, 3), qc_only=True)
    gen = compute_target_set(db, (12, 3), qc_only=False)
    # oracle: the closure equals brute-force vertex augmentation on every class with a <= 10
    bf = brute_force_structures(3, 8, 10)
    closure = defaultdict(set)
    for s in enumerate_structures(3, 8, 10, 30).structures.values():
        closure[s.cls].add(s.certificate)
    oracle_ok = dict(closure) == {k: v for k, v in bf.items() if k[0] >= 4}
    universe = (len(qc.in_range), len(gen.in_range))
    # 392 matches neither universe (QC-admissible or general); see the decisions ledger
    ok = n53 == 1 and n104 == 63 and len(gen) == 74 and 392 in universe and oracle_ok
    _check(
        4,
        ok,
        f"(5,3)={n53} (10,4)={n104}; |L|/|L_t| QC={universe[0]}/{len(qc)} general={universe[1]}/{len(gen)} "
        f"vs published 392/74; closure equals brute-force oracle for a<=10: {oracle_ok}",
    )


# boldfaced classes of Table I: every structure is absent from QC codes
BOLD = {
    (3, 6, 11, 3): [(5, 1), (7, 1), (9, 1), (11, 1)],
    (3, 8, 11, 3): [(7, 1), (9, 1), (11, 1)],
    (4, 6, 9, 2): [(5, 0), (5, 2), (7, 0), (7, 2), (9, 0), (9, 2)],
    (4, 8, 11, 2): [(9, 2), (11, 0), (11, 2)],
    (5, 6, 9, 3): [(7, 1), (7, 3), (9, 1), (9, 3)],
}


def test_criterion4_table1_spots():
    tables = {
        key: admissibility_table(enumerate_structures(dv, g, a, default_b_search(b, dv)), b_max=b)
        for key in BOLD
        for dv, g, a, b in [key]
    }
    s82 = tables[(3, 6, 11, 3)][(8, 2)][3]
    s110 = tables[(4, 8, 11, 2)][(11, 0)]
    bad = []
    for key, classes in BOLD.items():
        for cls in classes:
            row = tables[key].get(cls)
            if not row or any(q for q, _ in row.values()):
                bad.append((key[:2], cls, row))
    ok = s82 == (13, 14) and s110 == {4: (0, 2)} and not bad
    _check(4, ok, f"Table I: dv3g6 (8,2) s3 {s82}, dv4g8 (11,0) {s110}, bold classes with QC structures={bad}")


# -- 5 and 6 -----------------------------------------------------------------


@pytest.fixture(scope="module")
def cover38():
    db = structure_db(3, 8, 12, default_b_search(3, 3))
    ts = compute_target_set(db, (12, 3), qc_only=True)
    return db, ts, parent_cover(db, ts, qc_only=True)


def test_criterion5_algorithm1_trace(cover38):
    db, ts, steps = cover38
    n113 = sum(1 for c in ts.members if db[c].cls == (11, 3))
    first = Counter(db[p].cls for p in steps[0].chosen)
    second = Counter(db[p].cls for p in steps[1].chosen)
    roots = sorted({2 * db[c].a for s in steps for c in s.roots} | {2 * db[p].a for p in steps[-1].chosen})
    ok = (
        n113 == 62
        and dict(first) == {(10, 4): 22}
        and second[(8, 4)] == 7
        and second[(9, 5)] == 5
        and roots == [8, 10]
    )
    _check(
        5,
        ok,
        f"(11,3) targets={n113}, first step {dict(first)}, second step {dict(second)}, root cycle lengths {roots}"
        " (published 62 / 22 (10,4) / 7 (8,4) + 5 (9,5) / 8,10)",
    )


def test_criterion6_cost_report(cover38):
    db, ts, steps = cover38
    plan = build_plan(db, ts, steps)
    ours = cost_report(plan)
    want = TABLE_III_DV3_G8["proposed_qc"]
    top = cost_report(char_table(TABLE_II_TOP))
    bottom = cost_report(char_table(TABLE_II_BOTTOM))
    planner_ok = all(ours.get(k, 0) == v for k, v in want.items()) and set(ours) <= set(want)
    table_ok = all(top.get(k, 0) == v for k, v in want.items()) and bottom.get("pa3") == 14
    _check(
        6,
        planner_ok and table_ok,
        f"planner cost {ours} vs published {want}; "
        f"transcribed Table II top {top}, bottom pa3={bottom.get('pa3')}",
    )


# -- 7 ----------------------------------------------------------------------


def test_criterion7_oracle_equivalence():
    rng = np.random.default_rng(20240607)
    mismatches = []
    for i in range(20):
        n = 4 if i % 2 == 0 else 5
        N = int(rng.integers(7, 16))
        T = lift(random_matrix(rng, 3, n, N, min_girth=6))
        got = exhaustive_enumerate(T, 6, 3 * 6, symmetric=bool(i % 3)).nonzero()
        want = brute_force_counts(T, 6).nonzero()
        if got != want:
            mismatches.append((i, n, N))
    _check(7, not mismatches, f"20 random lifts, a<=6: mismatches={mismatches}")


# -- 8 ----------------------------------------------------------------------


@pytest.mark.slow
def test_criterion8_constructor_smoke():
    spec = DesignSpec(3, 5, 8, ((8, 3), (10, 2)), N=31, seed=3, time_budget=3600)
    res = construct_fixed_N(spec)
    ok = res.ok
    detail = res.summary()
    if ok:
        audit = verify(res.matrix, spec.ranges, 8)
        ok = audit.clean
        detail += f"; verify {'clean' if audit.clean else audit.dirty_classes}"
    _check(8, ok, detail)


# -- 9 ----------------------------------------------------------------------


@pytest.mark.slow
def test_criterion9_simulation():
    r3 = fer_point(P2.matrix, 3.0, min_errors=100, max_frames=2_000_000, seed=3, strict=True)
    r4 = fer_point(P2.matrix, 4.0, min_errors=100, max_frames=2_000_000, seed=4, strict=True)
    ordered = r4.fer < r3.fer

    T = lift(P2.matrix)
    dec = MinSumDecoder(T)
    cfg = DecoderConfig()
    rng = np.random.default_rng(99)
    sigma = np.sqrt(1 / (2 * code_rate(P2.matrix) * 10 ** (2.0 / 10)))
    H = T.dense_h().astype(np.int64)
    bad_syndrome = 0
    frames = 0
    while frames < 100_000:
        y = 1 + sigma * rng.standard_normal((2000, T.n_var))
        hard, ok, _ = dec.decode(y)
        syn = (hard[ok].astype(np.int64) @ H.T) % 2
        bad_syndrome += int(syn.any(axis=1).sum())
        frames += y.shape[0]
    x = rng.normal(0, 3, size=100_000)
    q = cfg.quantize(x)
    symmetric = bool((cfg.quantize(-x) == -q).all()) and int(np.abs(q).max()) <= cfg.levels
    ok = ordered and bad_syndrome == 0 and symmetric
    _check(
        9,
        ok,
        f"FER 3dB={r3.fer:.3e} ({r3.errors}/{r3.frames}), 4dB={r4.fer:.3e} ({r4.errors}/{r4.frames}); "
        f"converged-but-unsatisfied={bad_syndrome} of {frames}; quantizer symmetric={symmetric}",
    )
