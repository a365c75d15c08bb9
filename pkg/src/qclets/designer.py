"""Column-by-column construction of exponent matrices free of targeted LETSs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .lets import BudgetExceeded
from .plan import SearchPlan, normalize_ranges, plan_for
from .qcgraph import ExponentMatrix, bfs_girth, canonicalize, girth, lift
from .search import ClassCounts, SearchBudget, default_b_search, exhaustive_enumerate, layered_find, structure_db

Range = tuple[int, int]


@dataclass
class DesignSpec:
    m: int
    n: int
    g0: int
    ranges: tuple[Range, ...]
    N: int | None = None
    N_min: int | None = None
    N_max: int | None = None
    time_budget: float = 3 * 3600.0  # seconds per lifting degree
    seed: int | None = None
    ascending_row1: bool = True
    retry_cap: int | None = None  # candidates per column visit, None = exhaust

    def __post_init__(self):
        if self.g0 % 2 or self.g0 < 6:
            raise ValueError("g0 must be even and at least 6")
        self.ranges = normalize_ranges(self.ranges)

    @property
    def dv(self) -> int:
        return self.m

    def to_text(self) -> str:
        rng = ";".join(f"{a},{b}" for a, b in self.ranges)
        fields = [f"m={self.m}", f"n={self.n}", f"g0={self.g0}", f"ranges={rng}"]
        for key in ("N", "N_min", "N_max", "seed", "retry_cap"):
            val = getattr(self, key)
            if val is not None:
                fields.append(f"{key}={val}")
        fields.append(f"time_budget={self.time_budget}")
        fields.append(f"ascending_row1={int(self.ascending_row1)}")
        return "\n".join(fields) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DesignSpec:
        kv = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"expected key=value, got {line!r}")
            k, v = (x.strip() for x in line.split("=", 1))
            kv[k] = v
        try:
            ranges = tuple(tuple(int(x) for x in r.split(",")) for r in kv.pop("ranges").split(";"))
            spec = cls(int(kv.pop("m")), int(kv.pop("n")), int(kv.pop("g0")), ranges)  # type: ignore[arg-type]
        except KeyError as exc:
            raise ValueError(f"missing field {exc}") from exc
        for key in ("N", "N_min", "N_max", "seed", "retry_cap"):
            if key in kv:
                setattr(spec, key, int(kv.pop(key)))
        if "time_budget" in kv:
            spec.time_budget = float(kv.pop("time_budget"))
        if "ascending_row1" in kv:
            spec.ascending_row1 = bool(int(kv.pop("ascending_row1")))
        if kv:
            raise ValueError(f"unknown fields {sorted(kv)}")
        return spec


@dataclass
class DesignStats:
    candidates: int = 0
    girth_rejects: int = 0
    lets_rejects: int = 0
    backtracks: int = 0
    wall_time: float = 0.0


@dataclass
class DesignResult:
    ok: bool
    N: int
    matrix: ExponentMatrix | None
    reason: str  # "found", "exhausted" or "timeout"
    seed: int
    girth: int | None = None
    clean: dict[Range, bool] = field(default_factory=dict)
    stats: DesignStats = field(default_factory=DesignStats)
    exhaustive: bool = False  # True when failure covered the whole candidate space
    seen_set_cleared_on_reentry: bool = True

    def summary(self) -> str:
        head = f"N={self.N} {self.reason} seed={self.seed}"
        st = self.stats
        return (
            f"{head} candidates={st.candidates} girth_rejects={st.girth_rejects} "
            f"lets_rejects={st.lets_rejects} backtracks={st.backtracks} time={st.wall_time:.1f}s"
        )


def _plan(spec: DesignSpec) -> SearchPlan:
    a_max = max(a for a, _ in spec.ranges)
    b_max = max(b for _, b in spec.ranges)
    db = structure_db(spec.dv, spec.g0, a_max, default_b_search(b_max, spec.dv))
    return plan_for(db, spec.ranges, qc_only=True)


def _candidates(rng: np.random.Generator, N: int, m: int, low: int) -> Iterator[tuple[int, ...]]:
    """Uniform order over untried shift tuples for rows 1..m-1, each visited once."""
    free = m - 1
    size = N**free
    for idx in rng.permutation(size):
        idx = int(idx)
        digits = []
        for _ in range(free):
            digits.append(idx % N)
            idx //= N
        if digits[0] >= low:
            yield tuple(digits)


def construct_fixed_N(spec: DesignSpec, N: int | None = None, plan: SearchPlan | None = None, seed: int | None = None) -> DesignResult:
    """Greedy random column assignment with single-step backtracking."""
    N = N if N is not None else spec.N
    if N is None:
        raise ValueError("lifting degree required")
    if seed is None:
        seed = spec.seed if spec.seed is not None else int(np.random.SeedSequence().entropy % 2**32)
    rng = np.random.default_rng(seed)
    plan = plan if plan is not None else _plan(spec)
    m, n = spec.m, spec.n
    stats = DesignStats()
    t0 = time.monotonic()
    deadline = t0 + spec.time_budget
    cols: list[tuple[int, ...]] = [(0,) * (m - 1)]

    def matrix(columns: list[tuple[int, ...]]) -> ExponentMatrix:
        rows = [[0] * len(columns)] + [[c[i] for c in columns] for i in range(m - 1)]
        return ExponentMatrix.from_rows(rows, N)

    def low_for(j: int) -> int:
        return cols[j - 1][0] if spec.ascending_row1 else 0

    def result(ok: bool, reason: str, exhaustive: bool = False) -> DesignResult:
        stats.wall_time = time.monotonic() - t0
        P = canonicalize(matrix(cols)) if ok else None
        return DesignResult(ok, N, P, reason, seed, girth(P, spec.g0 + 2) if ok else None, stats=stats, exhaustive=exhaustive)

    if n == 1:
        return result(True, "found")
    iters: list[Iterator[tuple[int, ...]]] = [iter(())]
    tried = [0]
    iters.append(_candidates(rng, N, m, low_for(1)))
    tried.append(0)
    remaining = lambda: deadline - time.monotonic()  # noqa: E731
    while True:
        j = len(cols)
        if j == n:
            return result(True, "found")
        if remaining() <= 0:
            return result(False, "timeout")
        cand = None
        capped = spec.retry_cap is not None and tried[j] >= spec.retry_cap
        if not capped:
            for c in iters[j]:
                tried[j] += 1
                stats.candidates += 1
                P = matrix(cols + [c])
                if girth(P, spec.g0) < spec.g0:
                    stats.girth_rejects += 1
                else:
                    try:
                        verdict = layered_find(lift(P), plan, budget=SearchBudget(time_limit=max(remaining(), 1e-3)))
                    except BudgetExceeded:
                        return result(False, "timeout")
                    if verdict.clean:
                        cand = c
                        break
                    stats.lets_rejects += 1
                if remaining() <= 0:
                    return result(False, "timeout")
                if spec.retry_cap is not None and tried[j] >= spec.retry_cap:
                    break
        if cand is not None:
            cols.append(cand)
            if len(cols) < n:
                # fresh random stream for the next column: its seen-set starts empty
                iters.append(_candidates(rng, N, m, low_for(len(cols))))
                tried.append(0)
            continue
        # column j exhausted: back up one column and try its next candidate
        stats.backtracks += 1
        iters.pop()
        tried.pop()
        if len(cols) == 1:
            return result(False, "exhausted", exhaustive=spec.retry_cap is None)
        cols.pop()


def solve_problem_a(spec: DesignSpec) -> tuple[int | None, DesignResult, list[DesignResult]]:
    """Smallest N in [N_min, N_max] for which the constructor succeeds."""
    if spec.N_min is None or spec.N_max is None:
        raise ValueError("N_min and N_max are required")
    plan = _plan(spec)
    history = []
    base_seed = spec.seed if spec.seed is not None else int(np.random.SeedSequence().entropy % 2**32)
    for N in range(spec.N_min, spec.N_max + 1):
        res = construct_fixed_N(spec, N, plan, seed=base_seed + N)
        history.append(res)
        if res.ok:
            return N, res, history
    return None, history[-1], history


def solve_problem_b(spec: DesignSpec, b_max: int, a_cap: int = 14) -> tuple[int, DesignResult | None]:
    """Largest a_max at fixed N such that the constructor clears (a <= a_max, b <= b_max)."""
    if spec.N is None:
        raise ValueError("fixed N required")
    best: tuple[int, DesignResult | None] = (spec.g0 // 2 - 1, None)
    for a_max in range(spec.g0 // 2, a_cap + 1):
        sub = DesignSpec(spec.m, spec.n, spec.g0, ((a_max, b_max),), N=spec.N, time_budget=spec.time_budget, seed=spec.seed)
        plan = _plan(sub)
        if not plan.targets:
            best = (a_max, None)
            continue
        res = construct_fixed_N(sub, plan=plan)
        if not res.ok:
            break
        best = (a_max, res)
    return best


@dataclass
class Audit:
    girth_dp: int
    girth_bfs: int | None
    g0: int
    counts: dict[Range, ClassCounts]
    ranges: tuple[Range, ...]
    cap: int

    @property
    def methods_agree(self) -> bool:
        # the DP reports the cap when no shorter cycle exists
        if self.girth_bfs is None:
            return True
        return self.girth_bfs == self.girth_dp or (self.girth_bfs > self.girth_dp and self.girth_dp == self.cap)

    @property
    def girth_ok(self) -> bool:
        return self.methods_agree and self.girth_dp >= self.g0

    @property
    def dirty_classes(self) -> dict[tuple[int, int], int]:
        out = {}
        for (a_max, b_max), cc in self.counts.items():
            for (a, b), n in cc.nonzero().items():
                if a <= a_max and b <= b_max:
                    out[(a, b)] = n
        return dict(sorted(out.items()))

    @property
    def clean(self) -> bool:
        return self.girth_ok and not self.dirty_classes

    def report(self) -> str:
        bfs = "none" if self.girth_bfs is None else str(self.girth_bfs)
        lines = [f"girth dp>={self.girth_dp} bfs={bfs} required>={self.g0}"]
        for r, cc in self.counts.items():
            lines.append(f"range a<={r[0]} b<={r[1]}: " + (", ".join(f"({a},{b})={n}" for (a, b), n in cc.nonzero().items()) or "none"))
        lines.append("verdict: " + ("clean" if self.clean else "dirty"))
        return "\n".join(lines) + "\n"


def verify(P: ExponentMatrix, ranges, g0: int, budget: SearchBudget | None = None, symmetric: bool = True) -> Audit:
    """Independent re-check: girth two ways, then exhaustive multiplicities per rectangle."""
    ranges = normalize_ranges(ranges)
    T = lift(P)
    cap = max(2 * max(a for a, _ in ranges) + 2, g0 + 2)
    g_dp = girth(P, cap)
    g_bfs = bfs_girth(T)
    counts = {}
    if g_dp >= g0:
        for r in ranges:
            counts[r] = exhaustive_enumerate(T, r[0], r[1], symmetric=symmetric, budget=budget)
    return Audit(g_dp, g_bfs, g0, counts, ranges, cap)
