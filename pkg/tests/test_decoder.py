import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclets.decoder import (
    DecoderConfig,
    MinSumDecoder,
    StopCriterionUnreachable,
    classify_failure,
    code_rate,
    failure_csv,
    fer_point,
    fer_point_parallel,
    min_sum_decode,
    results_csv,
)
from qclets.known_codes import P2, TANNER_155
from qclets.plan import plan_for
from qclets.qcgraph import ExponentMatrix, lift
from qclets.search import layered_find, structure_db


@pytest.fixture(scope="module")
def p2_graph():
    return lift(P2.matrix)


def test_config_defaults():
    cfg = DecoderConfig()
    assert cfg.levels == 15
    assert cfg.step == pytest.approx(4 / 31)
    with pytest.raises(ValueError):
        DecoderConfig(bits=1)
    with pytest.raises(ValueError):
        DecoderConfig(clip=0)


@given(st.floats(-50, 50, allow_nan=False))
def test_quantizer_symmetric_and_bounded(x):
    cfg = DecoderConfig()
    q = cfg.quantize(x)
    assert cfg.quantize(-x) == -q
    assert abs(int(q)) <= cfg.levels
    assert abs(float(cfg.dequantize(q))) <= cfg.clip + 1e-12


def test_quantizer_has_zero_level():
    cfg = DecoderConfig()
    assert cfg.quantize(0.01) == 0
    assert cfg.quantize(cfg.step) == 1


def test_zero_noise_converges_immediately(p2_graph):
    hard, ok, iters = MinSumDecoder(p2_graph).decode(np.ones((2, p2_graph.n_var)))
    assert ok.all() and not hard.any() and (iters <= 1).all()


def test_single_flip_is_corrected(p2_graph):
    y = np.full(p2_graph.n_var, 2.0)
    y[17] = -2.0
    hard, ok = min_sum_decode(p2_graph, y)
    assert ok and not hard.any()


def test_converged_words_satisfy_parity(p2_graph):
    rng = np.random.default_rng(1)
    sigma = np.sqrt(1 / (2 * code_rate(P2.matrix) * 10 ** (1.5 / 10)))
    y = 1 + sigma * rng.standard_normal((400, p2_graph.n_var))
    hard, ok, _ = MinSumDecoder(p2_graph).decode(y)
    H = p2_graph.dense_h().astype(int)
    syn = (hard.astype(int) @ H.T) % 2
    assert not syn[ok].any()
    assert (syn[~ok].any(axis=1)).all()


def test_irregular_graph_rejected():
    T = lift(ExponentMatrix.from_rows([[0, 0], [0, None]], 5))
    with pytest.raises(ValueError):
        MinSumDecoder(T)


def test_code_rate():
    assert code_rate(P2.matrix) == pytest.approx(64 / 155)


def test_seeded_determinism():
    a = fer_point(P2.matrix, 2.0, min_errors=20, max_frames=2000, seed=9)
    b = fer_point(P2.matrix, 2.0, min_errors=20, max_frames=2000, seed=9)
    assert (a.frames, a.errors, a.failure_classes) == (b.frames, b.errors, b.failure_classes)


def test_parallel_matches_serial_for_one_thread():
    a = fer_point_parallel(P2.matrix, 1.0, 1, min_errors=10, max_frames=1000, seed=3)
    b = fer_point(P2.matrix, 1.0, min_errors=10, max_frames=1000, seed=3)
    assert (a.frames, a.errors) == (b.frames, b.errors)


def test_fer_below_threshold():
    r = fer_point(P2.matrix, 0.0, min_errors=50, max_frames=5000, seed=0)
    assert r.fer > 0.5
    lo, hi = r.confidence()
    assert lo <= r.fer <= hi


def test_stop_criterion_unreachable():
    with pytest.raises(StopCriterionUnreachable):
        fer_point(P2.matrix, 8.0, min_errors=5, max_frames=256, seed=0, strict=True)


def test_failure_classification_recount(p2_graph):
    rng = np.random.default_rng(4)
    H = p2_graph.dense_h().astype(int)
    for _ in range(20):
        support = rng.choice(p2_graph.n_var, size=int(rng.integers(1, 10)), replace=False)
        x = np.zeros(p2_graph.n_var, dtype=int)
        x[support] = 1
        a, b = classify_failure(p2_graph, support)
        assert a == len(support)
        assert b == int(((H @ x) % 2).sum())


def test_csv_outputs():
    r = fer_point(P2.matrix, 1.0, min_errors=10, max_frames=512, seed=2)
    text = results_csv([r])
    assert text.splitlines()[0] == "ebn0_db,frames,errors,fer"
    assert text.splitlines()[1].startswith("1.0,")
    side = failure_csv([r])
    assert side.splitlines()[0] == "a,b,count"
    assert sum(int(l.split(",")[2]) for l in side.splitlines()[1:]) == sum(r.failure_classes.values())


def test_lets_error_pattern_traps_decoder():
    """Bits of a (5,3) LETS received wrong at high SNR: the decoder usually cannot escape."""
    P = TANNER_155.matrix
    T = lift(P)
    plan = plan_for(structure_db(3, 8, 5, 9), (5, 3))
    verdict = layered_find(T, plan)
    assert not verdict.clean
    rng = np.random.default_rng(0)
    sigma = np.sqrt(1 / (2 * code_rate(P) * 10 ** (8 / 10)))
    y = 1 + sigma * rng.standard_normal((200, T.n_var))
    y[:, list(verdict.witness)] = -1 + sigma * rng.standard_normal((200, 5))
    hard, ok, _ = MinSumDecoder(T).decode(y)
    failed = hard.any(axis=1)
    rate = failed.mean()
    assert rate > 0.5, f"observed failure rate {rate:.2f}"
