"""Quantized min-sum decoding of lifted codes over BPSK/AWGN and FER estimation."""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .qcgraph import ExponentMatrix, TannerGraph, binary_rank, lift


@dataclass(frozen=True)
class DecoderConfig:
    bits: int = 5
    clip: float = 2.0
    max_iter: int = 100

    def __post_init__(self):
        if self.bits < 2:
            raise ValueError("quantizer needs at least 2 bits")
        if self.clip <= 0:
            raise ValueError("clipping threshold must be positive")

    @property
    def levels(self) -> int:
        """Largest integer level; values run over -levels..levels."""
        return 2 ** (self.bits - 1) - 1

    @property
    def step(self) -> float:
        return 2 * self.clip / (2**self.bits - 1)

    def quantize(self, x) -> np.ndarray:
        """Mid-tread uniform quantizer to integer levels, symmetric about zero."""
        q = np.round(np.asarray(x, dtype=float) / self.step)
        return np.clip(q, -self.levels, self.levels).astype(np.int16)

    def dequantize(self, q) -> np.ndarray:
        return np.asarray(q, dtype=float) * self.step


class MinSumDecoder:
    """Flooding min-sum on a Tanner graph with constant variable and check degrees."""

    def __init__(self, graph: TannerGraph, cfg: DecoderConfig | None = None):
        self.cfg = cfg or DecoderConfig()
        self.graph = graph
        vdeg = {len(a) for a in graph.var_adj}
        cdeg = {len(a) for a in graph.chk_adj}
        if len(vdeg) != 1 or len(cdeg) != 1:
            raise ValueError("decoder expects constant variable and check degrees")
        self.dv, self.dc = vdeg.pop(), cdeg.pop()
        ev, ec = graph.edge_var, graph.edge_chk
        self.var_perm = np.lexsort((ec, ev))
        self.chk_perm = np.lexsort((ev, ec))
        self.edge_var = ev
        self.n, self.m = graph.n_var, graph.n_chk
        self.chk_rows = ev[self.chk_perm].reshape(self.m, self.dc)

    def syndrome_ok(self, hard: np.ndarray) -> np.ndarray:
        return ~(hard[:, self.chk_rows].sum(axis=2) & 1).astype(bool).any(axis=1)

    def decode(self, channel: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Decode a batch of channel values (B, n).

        Returns hard decisions (B, n) as uint8, a converged flag per frame and
        the iteration count at which each frame stopped.
        """
        cfg = self.cfg
        y = np.atleast_2d(np.asarray(channel, dtype=float))
        B = y.shape[0]
        L = cfg.quantize(y).astype(np.int32)
        lim = cfg.levels
        E = self.edge_var.size
        # a zero posterior decides 1, so ties never favour the transmitted all-zero word
        hard = (L <= 0).astype(np.uint8)
        converged = self.syndrome_ok(hard)
        iters = np.zeros(B, dtype=np.int32)
        active = np.flatnonzero(~converged)
        c2v = np.zeros((active.size, E), dtype=np.int32)
        inv_chk = np.argsort(self.chk_perm)
        for it in range(1, cfg.max_iter + 1):
            if active.size == 0:
                break
            La = L[active]
            vsum = La + c2v[:, self.var_perm].reshape(active.size, self.n, self.dv).sum(axis=2)
            v2c = np.clip(vsum[:, self.edge_var] - c2v, -lim, lim)
            M = v2c[:, self.chk_perm].reshape(active.size, self.m, self.dc)
            neg = M < 0
            parity = np.logical_xor.reduce(neg, axis=2)
            mag = np.abs(M)
            order = np.argsort(mag, axis=2, kind="stable")
            min1 = np.take_along_axis(mag, order[:, :, :1], axis=2)
            min2 = np.take_along_axis(mag, order[:, :, 1:2], axis=2)
            out_mag = np.where(np.arange(self.dc)[None, None, :] == order[:, :, :1], min2, min1)
            out_neg = np.logical_xor(parity[:, :, None], neg)
            out = np.where(out_neg, -out_mag, out_mag).reshape(active.size, E)
            c2v = out[:, inv_chk]
            post = La + c2v[:, self.var_perm].reshape(active.size, self.n, self.dv).sum(axis=2)
            h = (post <= 0).astype(np.uint8)
            ok = self.syndrome_ok(h)
            hard[active] = h
            iters[active] = it
            done = ok
            converged[active[done]] = True
            active = active[~done]
            c2v = c2v[~done]
        return hard, converged, iters


def min_sum_decode(graph: TannerGraph, channel, cfg: DecoderConfig | None = None) -> tuple[np.ndarray, bool]:
    hard, conv, _ = MinSumDecoder(graph, cfg).decode(np.asarray(channel)[None, :])
    return hard[0], bool(conv[0])


@dataclass
class SimResult:
    ebn0_db: float
    frames: int
    errors: int
    undetected: int = 0
    failure_classes: Counter = field(default_factory=Counter)
    seed: int | None = None

    @property
    def fer(self) -> float:
        return self.errors / self.frames if self.frames else float("nan")

    def confidence(self, z: float = 1.96) -> tuple[float, float]:
        """Wilson interval for the FER."""
        n, p = self.frames, self.fer
        if n == 0:
            return 0.0, 1.0
        denom = 1 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
        return max(0.0, centre - half), min(1.0, centre + half)


class StopCriterionUnreachable(RuntimeError):
    """The frame cap was reached before the requested number of errors."""


def code_rate(P: ExponentMatrix) -> float:
    n = P.n * P.N
    return (n - binary_rank(P)) / n


def classify_failure(graph: TannerGraph, support) -> tuple[int, int]:
    """(a, b): size of the wrong-bit set and number of checks it touches an odd number of times."""
    touch: Counter = Counter()
    for v in support:
        for c in graph.var_adj[v]:
            touch[c] += 1
    return len(support), sum(1 for k in touch.values() if k % 2)


def fer_point(
    P: ExponentMatrix,
    ebn0_db: float,
    min_errors: int = 100,
    max_frames: int = 1_000_000,
    cfg: DecoderConfig | None = None,
    seed: int = 0,
    batch: int = 256,
    a_cap: int = 12,
    strict: bool = False,
) -> SimResult:
    """Monte-Carlo frame error rate with the all-zero codeword."""
    graph = lift(P)
    dec = MinSumDecoder(graph, cfg)
    rate = code_rate(P)
    sigma = np.sqrt(1.0 / (2 * rate * 10 ** (ebn0_db / 10)))
    rng = np.random.default_rng(seed)
    res = SimResult(ebn0_db, 0, 0, seed=seed)
    while res.errors < min_errors and res.frames < max_frames:
        b = min(batch, max_frames - res.frames)
        y = 1.0 + sigma * rng.standard_normal((b, graph.n_var))
        hard, conv, _ = dec.decode(y)
        wrong = hard.any(axis=1)
        res.frames += b
        res.errors += int(wrong.sum())
        res.undetected += int((wrong & conv).sum())
        for row in hard[wrong]:
            support = np.flatnonzero(row)
            if support.size <= a_cap:
                res.failure_classes[classify_failure(graph, support)] += 1
    if strict and res.errors < min_errors:
        raise StopCriterionUnreachable(f"{res.errors} errors in {res.frames} frames at {ebn0_db} dB")
    return res


def fer_point_parallel(
    P: ExponentMatrix,
    ebn0_db: float,
    threads: int,
    min_errors: int = 100,
    max_frames: int = 1_000_000,
    cfg: DecoderConfig | None = None,
    seed: int = 0,
    **kw,
) -> SimResult:
    """Split the run over worker processes with seed streams spawned from the master seed.

    Each worker gets an equal share of the error and frame targets; the merged
    result depends only on (seed, threads).
    """
    if threads <= 1:
        return fer_point(P, ebn0_db, min_errors, max_frames, cfg, seed, **kw)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(threads)]
    per_err = -(-min_errors // threads)
    per_frames = -(-max_frames // threads)
    with ProcessPoolExecutor(threads) as pool:
        parts = list(pool.map(_worker, [(P, ebn0_db, per_err, per_frames, cfg, s, kw) for s in seeds]))
    out = SimResult(ebn0_db, 0, 0, seed=seed)
    for r in parts:
        out.frames += r.frames
        out.errors += r.errors
        out.undetected += r.undetected
        out.failure_classes.update(r.failure_classes)
    return out


def _worker(args) -> SimResult:
    P, ebn0_db, err, frames, cfg, seed, kw = args
    return fer_point(P, ebn0_db, err, frames, cfg, seed, **kw)


def results_csv(results: list[SimResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ebn0_db", "frames", "errors", "fer"])
    for r in results:
        w.writerow([r.ebn0_db, r.frames, r.errors, f"{r.fer:.6g}"])
    return buf.getvalue()


def failure_csv(results: list[SimResult]) -> str:
    total: Counter = Counter()
    for r in results:
        total.update(r.failure_classes)
    lines = ["a,b,count"] + [f"{a},{b},{n}" for (a, b), n in sorted(total.items())]
    return "\n".join(lines) + "\n"
