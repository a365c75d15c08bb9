"""Instance-level LETS search on lifted Tanner graphs.

Instances are sets of variable nodes.  On a cyclic lift the shift
t -> t+1 inside every column block is an automorphism, so with symmetry
enabled only one representative per shift orbit is stored and each
representative is counted with its orbit size.  Short orbits (composite N)
are handled exactly through the stabilizer size.
"""

from __future__ import annotations

import time
from collections import defaultdict
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .lets import BudgetExceeded, Expansion, NormalGraph, StructureDb, certificate_from_edges, enumerate_structures
from .plan import SearchPlan
from .qcgraph import TannerGraph

Cls = tuple[int, int]


@dataclass
class SearchBudget:
    max_instances: int = 20_000_000
    time_limit: float | None = None

    def start(self) -> _Meter:
        return _Meter(self)


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.t0 = time.monotonic()
        self.stored = 0

    def charge(self, n: int = 1) -> None:
        self.stored += n
        if self.stored > self.budget.max_instances:
            raise BudgetExceeded(f"more than {self.budget.max_instances} stored instances")

    def tick(self) -> None:
        lim = self.budget.time_limit
        if lim is not None and time.monotonic() - self.t0 > lim:
            raise BudgetExceeded(f"search exceeded {lim:.1f} s")


class SearchContext:
    """Adjacency of a Tanner graph in the flat form the search loops want."""

    def __init__(self, graph: TannerGraph, symmetric: bool = False):
        self.graph = graph
        self.vc = graph.var_adj
        self.cv = graph.chk_adj
        degs = {len(a) for a in self.vc}
        if len(degs) != 1:
            raise ValueError("instance search needs a variable-regular Tanner graph")
        self.dv = degs.pop()
        self.N = graph.N if symmetric else 1

    def shift(self, nodes: Iterable[int], k: int) -> tuple[int, ...]:
        N = self.N
        return tuple(sorted((v // N) * N + (v % N + k) % N for v in nodes))

    def canonical(self, nodes: Iterable[int]) -> tuple[tuple[int, ...], int]:
        """Orbit representative (smallest sorted tuple) and orbit size."""
        nodes = tuple(sorted(nodes))
        N = self.N
        if N == 1:
            return nodes, 1
        j0 = nodes[0] // N
        offsets = [v % N for v in nodes if v // N == j0]
        rep = min(self.shift(nodes, -t) for t in offsets)
        stab = sum(1 for v in rep if v // N == j0 and self.shift(rep, v % N) == rep)
        return rep, N // stab

    def check_counts(self, nodes: Iterable[int]) -> dict[int, list[int]]:
        touch: dict[int, list[int]] = defaultdict(list)
        for v in nodes:
            for c in self.vc[v]:
                touch[c].append(v)
        return touch

    def normal_edges(self, nodes: Iterable[int]) -> list[tuple[int, int, int]] | None:
        """(u, w, check) for every degree-2 check; None if some check has degree >= 3."""
        out = []
        for c, vs in self.check_counts(nodes).items():
            if len(vs) > 2:
                return None
            if len(vs) == 2:
                out.append((vs[0], vs[1], c))
        return out

    def classify(self, nodes: Iterable[int]) -> tuple[Cls, str] | None:
        """(class, certificate) of a leafless elementary set, otherwise None."""
        nodes = sorted(nodes)
        edges = self.normal_edges(nodes)
        if edges is None:
            return None
        pos = {v: i for i, v in enumerate(nodes)}
        deg = [0] * len(nodes)
        pairs = set()
        for u, w, _ in edges:
            key = (pos[u], pos[w]) if pos[u] < pos[w] else (pos[w], pos[u])
            if key in pairs:
                return None
            pairs.add(key)
            deg[pos[u]] += 1
            deg[pos[w]] += 1
        if min(deg, default=0) < 2 or not _connected(len(nodes), pairs):
            return None
        a = len(nodes)
        return (a, a * self.dv - 2 * len(pairs)), certificate_from_edges(a, pairs)


def _connected(n: int, pairs: Iterable[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, w in pairs:
        adj[u].append(w)
        adj[w].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


@dataclass(frozen=True)
class LetsInstance:
    nodes: tuple[int, ...]
    certificate: str
    cls: Cls

    def normal_graph(self, ctx: SearchContext) -> tuple[NormalGraph, dict[tuple[int, int], int]]:
        """Normal graph on positions of ``nodes`` and the check realising each edge."""
        pos = {v: i for i, v in enumerate(self.nodes)}
        edges = ctx.normal_edges(self.nodes) or []
        realised = {}
        for u, w, c in edges:
            e = (pos[u], pos[w]) if pos[u] < pos[w] else (pos[w], pos[u])
            realised[e] = c
        return NormalGraph.from_edges(len(self.nodes), realised), realised


@dataclass
class ClassCounts:
    counts: dict[Cls, int] = field(default_factory=dict)

    def __getitem__(self, cls: Cls) -> int:
        return self.counts.get(cls, 0)

    def nonzero(self) -> dict[Cls, int]:
        return {k: v for k, v in sorted(self.counts.items()) if v}

    def to_csv(self) -> str:
        lines = ["a,b,count"] + [f"{a},{b},{n}" for (a, b), n in sorted(self.counts.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> ClassCounts:
        out = {}
        for line in text.strip().splitlines()[1:]:
            a, b, n = (int(x) for x in line.split(","))
            out[(a, b)] = n
        return cls(out)


# -- growth ------------------------------------------------------------------


def _state(ctx: SearchContext, nodes: Iterable[int]) -> dict[int, list[int]]:
    return ctx.check_counts(nodes)


def _contacts(ctx: SearchContext, w: int, touch: dict[int, list[int]]) -> list[tuple[int, int]] | None:
    """(check, node) pairs joining ``w`` to the current set; None if elementarity breaks."""
    out = []
    for c in ctx.vc[w]:
        vs = touch.get(c)
        if vs:
            if len(vs) >= 2:
                return None
            out.append((c, vs[0]))
    return out


def grow(ctx: SearchContext, nodes: tuple[int, ...], exps: Iterable[Expansion]) -> Iterator[tuple[tuple[int, ...], Expansion]]:
    """Concrete placements of the given expansions on one instance.

    Every yielded set is elementary; its normal graph is the parent's plus
    exactly the new nodes and edges of the expansion shape (no chords).
    Paths are found from both ends, so callers deduplicate.
    """
    exps = set(exps)
    S = set(nodes)
    touch = _state(ctx, nodes)
    unsat = [(c, vs[0]) for c, vs in touch.items() if len(vs) == 1]
    dot_ms = {e.m for e in exps if e.kind == "dot"}
    chain = [e for e in exps if e.kind != "dot"]
    if dot_ms:
        seen: set[int] = set()
        for c, _ in unsat:
            for w in ctx.cv[c]:
                if w in S or w in seen:
                    continue
                seen.add(w)
                con = _contacts(ctx, w, touch)
                if con is None or len({u for _, u in con}) != len(con):
                    continue
                if len(con) in dot_ms:
                    yield tuple(sorted(S | {w})), Expansion("dot", len(con))
    if not chain:
        return
    depth = max(e.m for e in chain)
    pa_ms = {e.m for e in chain if e.kind == "pa"}
    lo = defaultdict(set)
    for e in chain:
        if e.kind == "lo":
            lo[e.m].add(e.c)

    path: list[int] = []

    def extend(touch_now: dict[int, list[int]], w: int) -> dict[int, list[int]]:
        t = dict(touch_now)
        for c in ctx.vc[w]:
            t[c] = t.get(c, []) + [w]
        return t

    def rec(touch_now: dict[int, list[int]]) -> Iterator[tuple[tuple[int, ...], Expansion]]:
        i = len(path)
        last = path[-1]
        for c in ctx.vc[last]:
            if len(touch_now[c]) != 1:
                continue
            for y in ctx.cv[c]:
                if y == last or y in S or y in path:
                    continue
                con = _contacts(ctx, y, touch_now)
                if con is None:
                    continue
                s_con = [u for _, u in con if u in S]
                w_con = [u for _, u in con if u not in S]
                if len(set(w_con)) != len(w_con):
                    continue
                m = i + 1
                if w_con == [last] and len(s_con) == 1 and m in pa_ms:
                    yield tuple(sorted(S | set(path) | {y})), Expansion("pa", m)
                if not s_con and len(w_con) == 2 and last in w_con and m in lo:
                    other = w_con[0] if w_con[1] == last else w_con[1]
                    c_len = m - path.index(other)
                    if c_len in lo[m]:
                        yield tuple(sorted(S | set(path) | {y})), Expansion("lo", m, c_len)
                if m < depth and not s_con and w_con == [last]:
                    path.append(y)
                    yield from rec(extend(touch_now, y))
                    path.pop()

    for c0, _ in unsat:
        for w1 in ctx.cv[c0]:
            if w1 in S:
                continue
            con = _contacts(ctx, w1, touch)
            if con is None or len(con) != 1:
                continue
            path.append(w1)
            yield from rec(extend(touch, w1))
            path.pop()


def enumerate_cycles(ctx: SearchContext, k: int, meter: _Meter | None = None) -> dict[tuple[int, ...], int]:
    """Chordless elementary cycles of k variable nodes: representative -> orbit size."""
    if k < 2:
        raise ValueError("cycles need at least two variable nodes")
    N = ctx.N
    n_var = len(ctx.vc)
    roots = range(0, n_var, N) if N > 1 else range(n_var)
    found: dict[tuple[int, ...], int] = {}
    for v0 in roots:
        if meter:
            meter.tick()
        dist = _var_distances(ctx, v0, k // 2)
        path = [v0]
        touch = _state(ctx, [v0])

        def rec(touch_now: dict[int, list[int]]) -> None:
            last = path[-1]
            remaining = k - len(path)
            for c in ctx.vc[last]:
                if len(touch_now[c]) != 1:
                    continue
                for y in ctx.cv[c]:
                    if y <= v0 or y in path:
                        continue
                    d = dist.get(y)
                    if d is None or d > remaining:
                        continue
                    con = _contacts(ctx, y, touch_now)
                    if con is None:
                        continue
                    nbrs = sorted(u for _, u in con)
                    if remaining == 1:
                        if len(nbrs) == 2 and set(nbrs) == {last, v0} and last != v0:
                            rep, size = ctx.canonical(path + [y])
                            if rep not in found:
                                found[rep] = size
                                if meter:
                                    meter.charge()
                    elif nbrs == [last]:
                        path.append(y)
                        t = dict(touch_now)
                        for c2 in ctx.vc[y]:
                            t[c2] = t.get(c2, []) + [y]
                        rec(t)
                        path.pop()

        if k == 2:
            # two variables sharing two checks
            for c in ctx.vc[v0]:
                for y in ctx.cv[c]:
                    if y > v0 and len(set(ctx.vc[y]) & set(ctx.vc[v0])) == 2:
                        rep, size = ctx.canonical([v0, y])
                        found.setdefault(rep, size)
            continue
        rec(touch)
    return found


def _var_distances(ctx: SearchContext, v0: int, radius: int) -> dict[int, int]:
    dist = {v0: 0}
    frontier = [v0]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for c in ctx.vc[v]:
                for y in ctx.cv[c]:
                    if y not in dist:
                        dist[y] = d
                        nxt.append(y)
        frontier = nxt
    return dist


# -- structure universes -----------------------------------------------------


@lru_cache(maxsize=8)
def structure_db(dv: int, g: int, a_max: int, b_max_search: int) -> StructureDb:
    return enumerate_structures(dv, g, a_max, b_max_search)


def default_b_search(b_max: int, dv: int) -> int:
    return b_max + 2 * dv


def _search_girth(graph: TannerGraph) -> int:
    from .qcgraph import bfs_girth

    g = bfs_girth(graph)
    return 2 * graph.n_var if g is None else g


def chain_parents(db: StructureDb, targets: Iterable[str], qc_only: bool) -> dict[str, tuple[str, set[Expansion]] | None]:
    """For each target and its ancestors: one parent on a path from a cycle with smallest peak b.

    Cycles map to None.  The peak b bounds how unsatisfied the intermediate
    instances get, which is what drives the instance count.
    """
    cost: dict[str, tuple[int, int]] = {}
    choice: dict[str, tuple[str, set[Expansion]] | None] = {}
    usable = [c for c, s in db.structures.items() if s.qc_admissible or not qc_only]
    for cert in sorted(usable, key=lambda c: (db[c].a, db[c].b, c)):
        s = db[cert]
        parents = [p for p in db.parents.get(cert, {}) if p in cost]
        if not parents:
            if s.graph.girth() == s.a:
                cost[cert] = (s.b, s.a)
                choice[cert] = None
            continue
        best = min(parents, key=lambda p: (cost[p], db[p].b, p))
        cost[cert] = (max(s.b, cost[best][0]), cost[best][1] + 1)
        choice[cert] = (best, db.parents[cert][best])
    out: dict[str, tuple[str, set[Expansion]] | None] = {}
    stack = list(targets)
    while stack:
        c = stack.pop()
        if c in out:
            continue
        if c not in choice:
            raise ValueError(f"structure {db.label(c)} is unreachable in this database")
        out[c] = choice[c]
        if choice[c] is not None:
            stack.append(choice[c][0])
    return out


@dataclass
class _Trellis:
    """Parent -> {child: expansions} edges of a search, rooted at cycles."""

    roots: dict[str, int]  # cycle cert -> length in variable nodes
    edges: dict[str, dict[str, set[Expansion]]]
    classes: dict[Cls, set[str]]

    @classmethod
    def from_parents(cls, db: StructureDb, parents: dict[str, tuple[str, set[Expansion]] | None]) -> _Trellis:
        roots, edges, classes = {}, defaultdict(dict), defaultdict(set)
        for c, ch in parents.items():
            classes[db[c].cls].add(c)
            if ch is None:
                roots[c] = db[c].a
            else:
                edges[ch[0]][c] = set(ch[1])
        return cls(roots, dict(edges), dict(classes))

    def order(self, db: StructureDb) -> list[str]:
        certs = set(self.roots) | set(self.edges) | {c for d in self.edges.values() for c in d}
        return sorted(certs, key=lambda c: (db[c].a, db[c].b, c))


def _expand_all(
    ctx: SearchContext,
    db: StructureDb,
    parent: str,
    reps: Iterable[tuple[int, ...]],
    children: dict[str, set[Expansion]],
    store: dict[str, dict[tuple[int, ...], int]],
    meter: _Meter,
    stop: set[str] | None = None,
) -> tuple[str, tuple[int, ...]] | None:
    """Grow every representative of ``parent``; file children whose certificate is wanted."""
    exps = set().union(*children.values()) if children else set()
    by_cls: dict[Cls, set[str]] = defaultdict(set)
    for c in children:
        by_cls[db[c].cls].add(c)
    for n_done, rep in enumerate(reps):
        if n_done % 64 == 0:
            meter.tick()
        seen: set[tuple[int, ...]] = set()
        for child_nodes, _ in grow(ctx, rep, exps):
            if child_nodes in seen:
                continue
            seen.add(child_nodes)
            a = len(child_nodes)
            info = ctx.classify(child_nodes)
            if info is None:
                continue
            cls, cert = info
            if cls not in by_cls or cert not in by_cls[cls]:
                continue
            crep, size = ctx.canonical(child_nodes)
            bucket = store.setdefault(cert, {})
            if crep not in bucket:
                bucket[crep] = size
                meter.charge()
                if stop is not None and cert in stop:
                    return cert, crep
            del a
    return None


def exhaustive_enumerate(
    graph: TannerGraph,
    a_max: int,
    b_max: int,
    symmetric: bool = False,
    budget: SearchBudget | None = None,
    db: StructureDb | None = None,
    qc_only: bool | None = None,
) -> ClassCounts:
    """Exact multiplicities of LETS variable-node sets per class in the range.

    Every in-range structure is reached from a simple cycle through one fixed
    chain of expansions; each instance contains an instance of its chain
    parent, so growing all parent instances finds all child instances.
    """
    ctx = SearchContext(graph, symmetric)
    meter = (budget or SearchBudget()).start()
    g = _search_girth(graph)
    if db is None:
        db = structure_db(ctx.dv, min(g, 2 * a_max + 2), a_max, default_b_search(b_max, ctx.dv))
    if qc_only is None:
        qc_only = graph.N > 1 and graph.n_chk == ctx.dv * graph.N
    targets = [c for c, s in db.structures.items() if s.a <= a_max and s.b <= b_max and (s.qc_admissible or not qc_only)]
    counts = ClassCounts({s.cls: 0 for s in db.structures.values() if s.a <= a_max and s.b <= b_max})
    if not targets:
        return counts
    trellis = _Trellis.from_parents(db, chain_parents(db, targets, qc_only))
    store: dict[str, dict[tuple[int, ...], int]] = {}
    cycles_done: dict[int, dict[tuple[int, ...], int]] = {}
    for cert in trellis.order(db):
        if cert in trellis.roots:
            k = trellis.roots[cert]
            if k not in cycles_done:
                cycles_done[k] = enumerate_cycles(ctx, k, meter)
            store[cert] = dict(cycles_done[k])
        if cert in trellis.edges and store.get(cert):
            _expand_all(ctx, db, cert, list(store[cert]), trellis.edges[cert], store, meter)
    for cert in targets:
        counts.counts[db[cert].cls] = counts.counts.get(db[cert].cls, 0) + sum(store.get(cert, {}).values())
    return counts


@dataclass
class Verdict:
    clean: bool
    certificate: str | None = None
    witness: tuple[int, ...] | None = None
    layer: int | None = None
    label: str | None = None

    def __str__(self) -> str:
        if self.clean:
            return "clean"
        return f"found {self.label or self.certificate} at layer {self.layer}: {list(self.witness or ())}"


def layered_find(
    graph: TannerGraph,
    plan: SearchPlan,
    symmetric: bool = True,
    budget: SearchBudget | None = None,
) -> Verdict:
    """Run the plan layer by layer and stop at the first targeted instance."""
    ctx = SearchContext(graph, symmetric)
    if ctx.dv != plan.dv:
        raise ValueError(f"plan is for dv={plan.dv}, graph has dv={ctx.dv}")
    meter = (budget or SearchBudget()).start()
    targets = set(plan.targets)
    parent_of = plan.parent_of
    cache: dict[str, dict[tuple[int, ...], int]] = {}
    cycles: dict[int, dict[tuple[int, ...], int]] = {}
    for li, layer in enumerate(plan.layers, start=1):
        for _, sub_targets in layer.sublayers:
            needed: set[str] = set()
            for t in sub_targets:
                needed.update(plan.chain_to(t))
            order = sorted(needed, key=lambda c: (plan.nodes[c].cls, c))
            for cert in order:
                if cert in cache:
                    continue
                if cert not in parent_of:
                    k = plan.nodes[cert].cls[0]
                    if k not in cycles:
                        cycles[k] = enumerate_cycles(ctx, k, meter)
                    cache[cert] = dict(cycles[k])
                    if cert in targets and cache[cert]:
                        rep = min(cache[cert])
                        return Verdict(False, cert, rep, li, plan.labels.get(cert))
                    continue
                parent = parent_of[cert]
                kids = {c: e for c, e in plan.nodes[parent].expansions.items() if c in needed and c not in cache}
                found = _expand_all(ctx, _PlanDb(plan), parent, list(cache.get(parent, {})), kids, cache, meter, stop=targets)
                if found is not None:
                    cert_f, rep = found
                    return Verdict(False, cert_f, rep, li, plan.labels.get(cert_f))
                for c in kids:
                    cache.setdefault(c, {})
        keep = set(layer.retain)
        for later in plan.layers[li:]:
            for t in later.targets:
                keep.update(plan.chain_to(t))
        for cert in list(cache):
            if cert not in keep:
                del cache[cert]
    return Verdict(True)


class _PlanDb:
    """Just enough of StructureDb for _expand_all: class lookup by certificate."""

    def __init__(self, plan: SearchPlan):
        self.plan = plan

    def __getitem__(self, cert: str):
        return _ClsOnly(self.plan.nodes[cert].cls)


@dataclass(frozen=True)
class _ClsOnly:
    cls: Cls


# -- oracle ------------------------------------------------------------------


def brute_force_counts(graph: TannerGraph, a_max: int, b_max: int | None = None, symmetric: bool = False) -> ClassCounts:
    """Enumerate connected elementary variable sets by subgraph extension, keep the leafless ones.

    Elementarity is inherited by subsets, so non-elementary sets are pruned.
    Independent from the expansion machinery; used to validate it.

    With ``symmetric`` only sets whose smallest node starts a column block are
    grown.  A set S with smallest block j is then weighted by N / |S in block j|:
    summed over the N shifts of every orbit this counts each set once.
    """
    vc, cv = graph.var_adj, graph.chk_adj
    dv = {len(a) for a in vc}
    if len(dv) != 1:
        raise ValueError("variable-regular graph required")
    N = graph.N if symmetric else 1
    nbr = [sorted({y for c in vc[v] for y in cv[c] if y != v}) for v in range(graph.n_var)]
    counts: dict[Cls, Fraction] = defaultdict(Fraction)

    def elementary_with(touch: dict[int, int], w: int) -> bool:
        return all(touch.get(c, 0) < 2 for c in vc[w])

    def record(nodes: list[int], touch: dict[int, int]) -> None:
        uns = sum(1 for k in touch.values() if k == 1)
        for v in nodes:
            if sum(1 for c in vc[v] if touch[c] == 2) < 2:
                return
        if b_max is None or uns <= b_max:
            if N == 1:
                counts[(len(nodes), uns)] += 1
            else:
                j0 = nodes[0] // N
                counts[(len(nodes), uns)] += Fraction(N, sum(1 for v in nodes if v // N == j0))

    # ESU: each connected set is produced once, from its smallest node
    roots = range(0, graph.n_var, N)
    for v in roots:
        touch = {c: 1 for c in vc[v]}
        ext = [w for w in nbr[v] if w > v]
        _esu([v], set(nbr[v]) | {v}, ext, v, touch, a_max, nbr, vc, elementary_with, record)
    out = {}
    for cls, x in counts.items():
        if x.denominator != 1:
            raise AssertionError(f"orbit weights for {cls} do not sum to an integer")
        out[cls] = int(x)
    return ClassCounts(out)


def _esu(sub, closed_nbhd, ext, v, touch, a_max, nbr, vc, ok, record):
    if len(sub) >= 2:
        record(sub, touch)
    if len(sub) == a_max:
        return
    ext = list(ext)
    while ext:
        w = ext.pop()
        if not ok(touch, w):
            continue
        new_ext = ext + [u for u in nbr[w] if u > v and u not in closed_nbhd]
        t = dict(touch)
        for c in vc[w]:
            t[c] = t.get(c, 0) + 1
        _esu(sub + [w], closed_nbhd | set(nbr[w]), new_ext, v, t, a_max, nbr, vc, ok, record)
