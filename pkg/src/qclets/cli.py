"""Command-line entry point.

Exit statuses (stable, scripts depend on them):

    0  success; for verify/enumerate/find-style commands the code is clean
    1  a targeted LETS (or a short cycle) was found
    2  construction failed: candidate space exhausted
    3  search or time budget exceeded
    4  parse or usage error (no result file is written)
    5  missing or unreadable input file

Every command prints a human-readable summary on stdout; ``--out`` writes the
machine-readable result.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import decoder as dec
from .designer import DesignSpec, construct_fixed_N, solve_problem_a, verify
from .lets import BudgetExceeded, StructureDb, admissibility_table, enumerate_structures
from .plan import SearchPlan, compute_target_set, cost_report, plan_for, render_table
from .qcgraph import ExponentMatrix, bfs_girth, girth, lift
from .search import SearchBudget, default_b_search, exhaustive_enumerate, layered_find

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_FAILURE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4
EXIT_MISSING = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means something else here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _range(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like 'a,b', got {text!r}")
    return a, b


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileNotFoundError(str(exc)) from exc


def _matrix(path: str) -> ExponentMatrix:
    text = _read(path)
    try:
        return ExponentMatrix.from_text(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % 2**32)
        print(f"seed={args.seed}")
    return args.seed


def _budget(args) -> SearchBudget:
    b = SearchBudget(time_limit=args.time_limit)
    if getattr(args, "max_instances", None):
        b.max_instances = args.max_instances
    return b


# -- subcommands -------------------------------------------------------------


def cmd_db_build(args) -> int:
    bs = args.b_max_search if args.b_max_search is not None else default_b_search(args.b_max, args.dv)
    db = enumerate_structures(args.dv, args.g, args.a_max, bs)
    counts = db.class_counts()
    qc = db.class_counts(qc_only=True)
    for cls, n in counts.items():
        if cls[1] <= args.b_max:
            print(f"({cls[0]},{cls[1]}): {qc.get(cls, 0)}/{n}")
    print(f"{len(db)} structures, b searched up to {bs}")
    _emit(args, db.to_text())
    return EXIT_OK


def _load_db(args) -> StructureDb:
    if args.db:
        try:
            return StructureDb.from_text(_read(args.db))
        except ValueError as exc:
            raise UsageError(f"{args.db}: {exc}") from exc
    a_max = max(a for a, _ in args.range)
    b_max = max(b for _, b in args.range)
    return enumerate_structures(args.dv, args.g, a_max, default_b_search(b_max, args.dv))


def cmd_plan(args) -> int:
    db = _load_db(args)
    ts = compute_target_set(db, args.range, qc_only=not args.general)
    plan = plan_for(db, args.range, qc_only=not args.general)
    print(f"|L|={len(ts.in_range)} |L_t|={len(ts.members)}")
    print(render_table(plan), end="")
    print("cost: " + " ".join(f"{k}={v}" for k, v in cost_report(plan).items()))
    _emit(args, plan.to_text())
    return EXIT_OK


def _spec_from_args(args) -> DesignSpec:
    if args.config:
        try:
            spec = DesignSpec.from_text(_read(args.config))
        except ValueError as exc:
            raise UsageError(f"{args.config}: {exc}") from exc
    else:
        if None in (args.m, args.n, args.g0) or not args.range:
            raise UsageError("construct needs --config or all of --m --n --g0 --range")
        spec = DesignSpec(args.m, args.n, args.g0, tuple(args.range))
    for key in ("N", "N_min", "N_max", "time_budget", "retry_cap"):
        val = getattr(args, key)
        if val is not None:
            setattr(spec, key, val)
    if args.seed is not None or spec.seed is None:
        spec.seed = _seed(args)
    if spec.N is None and (spec.N_min is None or spec.N_max is None):
        raise UsageError("give --N or both --N-min and --N-max")
    return spec


def cmd_construct(args) -> int:
    spec = _spec_from_args(args)
    if spec.N is not None:
        res = construct_fixed_N(spec)
        history = [res]
    else:
        _, res, history = solve_problem_a(spec)
    for r in history:
        print(r.summary())
    lines = [f"# {r.summary()}" for r in history]
    if res.ok and res.matrix is not None:
        print(res.matrix.to_text(), end="")
        _emit(args, "\n".join(lines) + "\n" + res.matrix.to_text())
        return EXIT_OK
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_BUDGET if res.reason == "timeout" else EXIT_FAILURE


def cmd_verify(args) -> int:
    P = _matrix(args.matrix)
    audit = verify(P, args.range, args.g0, budget=_budget(args))
    print(audit.report(), end="")
    _emit(args, audit.report())
    return EXIT_OK if audit.clean else EXIT_FOUND


def cmd_find(args) -> int:
    P = _matrix(args.matrix)
    dv = P.m
    if args.plan:
        try:
            plan = SearchPlan.from_text(_read(args.plan))
        except ValueError as exc:
            raise UsageError(f"{args.plan}: {exc}") from exc
    else:
        if not args.range:
            raise UsageError("find needs --plan or --range")
        a_max = max(a for a, _ in args.range)
        b_max = max(b for _, b in args.range)
        plan = plan_for(enumerate_structures(dv, args.g0, a_max, default_b_search(b_max, dv)), args.range)
    if girth(P, plan.g) < plan.g:
        print(f"girth below {plan.g}")
        return EXIT_FOUND
    verdict = layered_find(lift(P), plan, budget=_budget(args))
    print(verdict)
    _emit(args, str(verdict) + "\n")
    return EXIT_OK if verdict.clean else EXIT_FOUND


def cmd_enumerate(args) -> int:
    P = _matrix(args.matrix)
    counts = exhaustive_enumerate(lift(P), args.a_max, args.b_max, symmetric=not args.no_symmetry, budget=_budget(args))
    csv = counts.to_csv()
    print(csv, end="")
    _emit(args, csv)
    return EXIT_OK if not counts.nonzero() else EXIT_FOUND


def cmd_girth(args) -> int:
    P = _matrix(args.matrix)
    g = girth(P, args.cap)
    if args.bfs:
        gb = bfs_girth(lift(P))
        agree = (gb is None or gb >= args.cap) if g >= args.cap else gb == g
        if not agree:
            print(f"girth methods disagree: dp={g} bfs={gb}", file=sys.stderr)
            return EXIT_FAILURE
    line = f"girth >= {g}" if g >= args.cap else f"girth = {g}"
    print(line)
    _emit(args, line + "\n")
    if args.min is not None and g < args.min:
        return EXIT_FOUND
    return EXIT_OK


def cmd_simulate(args) -> int:
    P = _matrix(args.matrix)
    seed = _seed(args)
    cfg = dec.DecoderConfig(bits=args.bits, clip=args.clip, max_iter=args.max_iter)
    results = []
    for k, snr in enumerate(args.ebn0):
        r = dec.fer_point_parallel(P, snr, args.threads, args.min_errors, args.max_frames, cfg, seed + k)
        lo, hi = r.confidence()
        print(f"{snr:5.2f} dB  frames={r.frames} errors={r.errors} fer={r.fer:.3e} [{lo:.2e}, {hi:.2e}]")
        results.append(r)
    _emit(args, dec.results_csv(results))
    if args.failures:
        Path(args.failures).write_text(dec.failure_csv(results))
    short = [r for r in results if r.errors < args.min_errors]
    return EXIT_BUDGET if short else EXIT_OK


def cmd_table1(args) -> int:
    db = enumerate_structures(args.dv, args.g, args.a_max, default_b_search(args.b_max, args.dv))
    table = admissibility_table(db, args.b_max, missing_only=not args.all)
    rows = ["a,b,root,qc,general"]
    for (a, b), by_root in table.items():
        cells = []
        for k, (q, n) in by_root.items():
            rows.append(f"{a},{b},{k},{q},{n}")
            cells.append(f"s{k}({q})/s{k}({n})")
        bold = "*" if all(q == 0 for q, _ in by_root.values()) else " "
        print(f"{bold}({a},{b})  " + "  ".join(cells))
    _emit(args, "\n".join(rows) + "\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qclets", description="LETS-aware design and analysis of QC-LDPC codes")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, out=True):
        if out:
            sp.add_argument("--out", help="machine-readable result file")
        sp.add_argument("--threads", type=int, default=1, help="worker count (default 1)")

    def budget(sp):
        sp.add_argument("--time-limit", type=float, default=None, help="seconds")
        sp.add_argument("--max-instances", type=int, default=None)

    s = sub.add_parser("db-build", help="enumerate LETS structures")
    s.add_argument("--dv", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--a-max", type=int, required=True)
    s.add_argument("--b-max", type=int, required=True)
    s.add_argument("--b-max-search", type=int, default=None)
    common(s)
    s.set_defaults(fn=cmd_db_build)

    s = sub.add_parser("plan", help="target set, parent cover and search plan")
    s.add_argument("--dv", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--range", type=_range, action="append", required=True, help="a,b (repeatable)")
    s.add_argument("--db", help="structure database file from db-build")
    s.add_argument("--general", action="store_true", help="ignore QC admissibility")
    common(s)
    s.set_defaults(fn=cmd_plan)

    s = sub.add_parser("construct", help="build an exponent matrix free of targeted LETSs")
    s.add_argument("--config", help="key=value file mirroring DesignSpec")
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--g0", type=int)
    s.add_argument("--range", type=_range, action="append")
    s.add_argument("--N", type=int)
    s.add_argument("--N-min", dest="N_min", type=int)
    s.add_argument("--N-max", dest="N_max", type=int)
    s.add_argument("--time-budget", type=float, help="seconds per lifting degree")
    s.add_argument("--retry-cap", type=int)
    s.add_argument("--seed", type=int)
    common(s)
    s.set_defaults(fn=cmd_construct)

    s = sub.add_parser("verify", help="girth and exhaustive LETS audit of a matrix")
    s.add_argument("matrix")
    s.add_argument("--range", type=_range, action="append", required=True)
    s.add_argument("--g0", type=int, required=True)
    budget(s)
    common(s)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("find", help="layered search for any targeted LETS")
    s.add_argument("matrix")
    s.add_argument("--plan", help="plan file from the plan command")
    s.add_argument("--range", type=_range, action="append")
    s.add_argument("--g0", type=int, default=6)
    budget(s)
    common(s)
    s.set_defaults(fn=cmd_find)

    s = sub.add_parser("enumerate", help="LETS multiplicities per class")
    s.add_argument("matrix")
    s.add_argument("--a-max", type=int, required=True)
    s.add_argument("--b-max", type=int, required=True)
    s.add_argument("--no-symmetry", action="store_true", help="do not use the cyclic automorphism")
    budget(s)
    common(s)
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("girth", help="girth of the lifted graph")
    s.add_argument("matrix")
    s.add_argument("--cap", type=int, default=8, help="report 'girth >= cap' when no shorter cycle exists")
    s.add_argument("--min", type=int, help="exit 1 when the girth is below this")
    s.add_argument("--bfs", action="store_true", help="cross-check with BFS on the lifted graph")
    common(s)
    s.set_defaults(fn=cmd_girth)

    s = sub.add_parser("simulate", help="min-sum FER over BPSK/AWGN")
    s.add_argument("matrix")
    s.add_argument("--ebn0", type=float, nargs="+", required=True)
    s.add_argument("--min-errors", type=int, default=100)
    s.add_argument("--max-frames", type=int, default=1_000_000)
    s.add_argument("--bits", type=int, default=5)
    s.add_argument("--clip", type=float, default=2.0)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--seed", type=int)
    s.add_argument("--failures", help="failure-class CSV sidecar")
    common(s)
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("table1", help="QC-admissible vs general structure counts per class")
    s.add_argument("--dv", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--a-max", type=int, required=True)
    s.add_argument("--b-max", type=int, required=True)
    s.add_argument("--all", action="store_true", help="list every class, not only those with missing structures")
    common(s)
    s.set_defaults(fn=cmd_table1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
