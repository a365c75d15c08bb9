"""LETS structure calculus on normal graphs.

A leafless elementary trapping set of a variable-regular code is fully
described by its normal graph: variable nodes are vertices, every degree-2
check becomes an edge and degree-1 checks are dropped.  This module grows
such graphs from simple cycles with the dot / path / lollipop expansions,
deduplicates them up to isomorphism and records parent/child relations.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import pynauty


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; results would be incomplete."""


@dataclass(frozen=True)
class NormalGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> NormalGraph:
        norm = set()
        for u, w in edges:
            if u == w:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= w < n):
                raise ValueError(f"edge ({u}, {w}) out of range for {n} nodes")
            e = (u, w) if u < w else (w, u)
            if e in norm:
                raise ValueError(f"parallel edge {e}")
            norm.add(e)
        return cls(n, tuple(sorted(norm)))

    @classmethod
    def cycle(cls, k: int) -> NormalGraph:
        return cls.from_edges(k, [(i, (i + 1) % k) for i in range(k)])

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def distances(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs hop distances; -1 marks unreachable pairs."""
        rows = []
        for s in range(self.n):
            dist = [-1] * self.n
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            rows.append(tuple(dist))
        return tuple(rows)

    def is_connected(self) -> bool:
        return self.n == 0 or all(d >= 0 for d in self.distances[0])

    def girth(self) -> int | None:
        """Length of the shortest cycle, None for forests."""
        best = None
        for s in range(self.n):
            dist = [-1] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                if best is not None and 2 * dist[u] + 1 >= best:
                    break
                for w in self.adjacency[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        queue.append(w)
                    elif parent[u] != w:
                        length = dist[u] + dist[w] + 1
                        if best is None or length < best:
                            best = length
        return best

    def add_nodes(self, count: int, new_edges: Iterable[tuple[int, int]]) -> NormalGraph:
        return NormalGraph.from_edges(self.n + count, list(self.edges) + list(new_edges))

    def relabel(self, perm: list[int]) -> NormalGraph:
        return NormalGraph.from_edges(self.n, [(perm[u], perm[w]) for u, w in self.edges])


def class_of(graph: NormalGraph, dv: int) -> tuple[int, int]:
    """(a, b) class of the LETS whose normal graph is ``graph``."""
    if graph.max_degree > dv:
        raise ValueError(f"node degree {graph.max_degree} exceeds variable degree {dv}")
    return graph.n, graph.n * dv - 2 * len(graph.edges)


def canonical_certificate(graph: NormalGraph) -> str:
    """Isomorphism-invariant label; equal labels iff isomorphic graphs."""
    return certificate_from_edges(graph.n, graph.edges)


def certificate_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> str:
    """Same label as :func:`canonical_certificate`, without building a NormalGraph."""
    if n == 0:
        return "0:"
    adj: dict[int, list[int]] = defaultdict(list)
    for u, w in edges:
        adj[u].append(w)
    cert = pynauty.certificate(pynauty.Graph(n, adjacency_dict=dict(adj)))
    return f"{n}:{cert.hex()}"


def _edge_colorable(graph: NormalGraph, k: int) -> bool:
    edges = list(graph.edges)
    if not edges:
        return True
    # order edges by BFS so each new edge touches already-coloured ones
    adj_edges: dict[int, list[int]] = defaultdict(list)
    for idx, (u, w) in enumerate(edges):
        adj_edges[u].append(idx)
        adj_edges[w].append(idx)
    order: list[int] = []
    seen = [False] * len(edges)
    start_node = max(range(graph.n), key=lambda v: graph.degrees[v])
    node_queue = deque([start_node])
    visited_nodes = {start_node}
    while node_queue or len(order) < len(edges):
        if not node_queue:
            rest = next(i for i in range(len(edges)) if not seen[i])
            node_queue.append(edges[rest][0])
            visited_nodes.add(edges[rest][0])
        u = node_queue.popleft()
        for idx in adj_edges[u]:
            if not seen[idx]:
                seen[idx] = True
                order.append(idx)
                w = edges[idx][0] + edges[idx][1] - u
                if w not in visited_nodes:
                    visited_nodes.add(w)
                    node_queue.append(w)
    used = [0] * graph.n
    full = (1 << k) - 1

    def assign(pos: int, colours_opened: int) -> bool:
        if pos == len(order):
            return True
        u, w = edges[order[pos]]
        free = full & ~(used[u] | used[w])
        # colours beyond the first unused one are interchangeable
        limit = min(k, colours_opened + 1)
        for col in range(limit):
            bit = 1 << col
            if free & bit:
                used[u] |= bit
                used[w] |= bit
                if assign(pos + 1, max(colours_opened, col + 1)):
                    return True
                used[u] &= ~bit
                used[w] &= ~bit
        return False

    return assign(0, 0)


def is_overfull(graph: NormalGraph) -> bool:
    return len(graph.edges) > (graph.n // 2) * graph.max_degree


def chromatic_index(graph: NormalGraph) -> int:
    """Exact chromatic index of a simple graph (Delta or Delta + 1)."""
    delta = graph.max_degree
    if delta == 0:
        return 0
    if is_overfull(graph):
        return delta + 1
    return delta if _edge_colorable(graph, delta) else delta + 1


@dataclass(frozen=True, order=True)
class Expansion:
    kind: str
    m: int
    c: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("dot", "pa", "lo"):
            raise ValueError(f"unknown expansion kind {self.kind!r}")
        if self.m < 2:
            raise ValueError("expansion size must be at least 2")
        if self.kind == "lo" and not (3 <= self.c <= self.m):
            raise ValueError("lollipop cycle length must satisfy 3 <= c <= m")

    def __str__(self) -> str:
        if self.kind == "lo":
            return f"lo{self.m}^{self.c}"
        return f"{self.kind}{self.m}"

    @classmethod
    def parse(cls, text: str) -> Expansion:
        if text.startswith("lo"):
            m, c = text[2:].split("^")
            return cls("lo", int(m), int(c))
        if text.startswith("dot"):
            return cls("dot", int(text[3:]))
        if text.startswith("pa"):
            return cls("pa", int(text[2:]))
        raise ValueError(f"cannot parse expansion {text!r}")

    def child_class(self, a: int, b: int, dv: int) -> tuple[int, int]:
        if self.kind == "dot":
            return a + 1, b + dv - 2 * self.m
        return a + self.m, b + self.m * (dv - 2) - 2


@dataclass(frozen=True)
class LetsStructure:
    graph: NormalGraph
    dv: int
    cls: tuple[int, int]
    root_cycle_len: int
    certificate: str
    qc_admissible: bool

    @classmethod
    def from_graph(cls, graph: NormalGraph, dv: int) -> LetsStructure:
        a, b = class_of(graph, dv)
        girth = graph.girth()
        if girth is None or min(graph.degrees) < 2 or not graph.is_connected():
            raise ValueError("not the normal graph of a connected leafless ETS")
        return cls(
            graph=graph,
            dv=dv,
            cls=(a, b),
            root_cycle_len=girth,
            certificate=canonical_certificate(graph),
            qc_admissible=chromatic_index(graph) <= dv,
        )

    @property
    def a(self) -> int:
        return self.cls[0]

    @property
    def b(self) -> int:
        return self.cls[1]


def iter_expansions(
    graph: NormalGraph,
    dv: int,
    g: int,
    a_cap: int | None = None,
    b_cap: int | None = None,
    kinds: Iterable[Expansion] | None = None,
) -> Iterator[tuple[Expansion, NormalGraph]]:
    """Every legal single expansion of ``graph`` (with repeats up to isomorphism).

    Children keep max degree <= dv and normal-graph girth >= g/2.  A path may
    start and end on the same node when that node has two free slots; this
    closed ear is needed for completeness once dv >= 4.
    """
    half = g // 2
    n = graph.n
    a, b = class_of(graph, dv)
    deg = graph.degrees
    dist = graph.distances
    deficient = [v for v in range(n) if deg[v] < dv]
    wanted = None if kinds is None else set(kinds)

    def ok(exp: Expansion) -> bool:
        if wanted is not None and exp not in wanted:
            return False
        ca, cb = exp.child_class(a, b, dv)
        return (a_cap is None or ca <= a_cap) and (b_cap is None or cb <= b_cap) and cb >= 0

    for m in range(2, dv + 1):
        exp = Expansion("dot", m)
        if not ok(exp):
            continue
        for subset in itertools.combinations(deficient, m):
            if all(dist[u][w] + 2 >= half for u, w in itertools.combinations(subset, 2)):
                yield exp, graph.add_nodes(1, [(u, n) for u in subset])

    max_new = (a_cap - a) if a_cap is not None else 0
    for m in range(2, max_new + 1):
        exp = Expansion("pa", m)
        if ok(exp):
            for u, w in itertools.combinations(deficient, 2):
                if dist[u][w] + m + 1 < half:
                    continue
                path = [(u, n)] + [(n + i, n + i + 1) for i in range(m - 1)] + [(n + m - 1, w)]
                yield exp, graph.add_nodes(m, path)
            for u in deficient:
                if deg[u] <= dv - 2 and m + 1 >= half:
                    path = [(u, n)] + [(n + i, n + i + 1) for i in range(m - 1)] + [(n + m - 1, u)]
                    yield exp, graph.add_nodes(m, path)
        for c in range(max(half, 3), m + 1):
            exp = Expansion("lo", m, c)
            if not ok(exp):
                continue
            stem = m - c
            for u in deficient:
                new = [(u, n)] + [(n + i, n + i + 1) for i in range(m - 1)]
                new.append((n + m - 1, n + stem))
                yield exp, graph.add_nodes(m, new)


def _apply(structure: LetsStructure, g: int, exp: Expansion) -> set[LetsStructure]:
    out = {}
    for _, child in iter_expansions(structure.graph, structure.dv, g, kinds=[exp], a_cap=structure.a + exp.m + (exp.kind == "dot")):
        s = LetsStructure.from_graph(child, structure.dv)
        out.setdefault(s.certificate, s)
    return set(out.values())


def apply_dot(structure: LetsStructure, m: int, g: int) -> set[LetsStructure]:
    return _apply(structure, g, Expansion("dot", m))


def apply_pa(structure: LetsStructure, m: int, g: int) -> set[LetsStructure]:
    return _apply(structure, g, Expansion("pa", m))


def apply_lo(structure: LetsStructure, m: int, c: int, g: int) -> set[LetsStructure]:
    return _apply(structure, g, Expansion("lo", m, c))


class StructureDb:
    """Non-isomorphic LETS structures of one (dv, g) universe plus their expansion DAG."""

    FORMAT_VERSION = 1

    def __init__(self, dv: int, g: int, a_max: int, b_max_search: int):
        self.dv = dv
        self.g = g
        self.a_max = a_max
        self.b_max_search = b_max_search
        self.structures: dict[str, LetsStructure] = {}
        self.children: dict[str, dict[str, set[Expansion]]] = defaultdict(dict)
        self.parents: dict[str, dict[str, set[Expansion]]] = defaultdict(dict)
        self._by_class: dict[tuple[int, int], list[str]] | None = None

    def __len__(self) -> int:
        return len(self.structures)

    def __contains__(self, cert: str) -> bool:
        return cert in self.structures

    def __getitem__(self, cert: str) -> LetsStructure:
        return self.structures[cert]

    def add(self, s: LetsStructure) -> bool:
        if s.certificate in self.structures:
            return False
        self.structures[s.certificate] = s
        self._by_class = None
        return True

    def link(self, parent: str, child: str, exp: Expansion) -> None:
        self.children[parent].setdefault(child, set()).add(exp)
        self.parents[child].setdefault(parent, set()).add(exp)

    def by_class(self, a: int, b: int, qc_only: bool = False) -> list[LetsStructure]:
        if self._by_class is None:
            groups: dict[tuple[int, int], list[str]] = defaultdict(list)
            for cert, s in self.structures.items():
                groups[s.cls].append(cert)
            self._by_class = {k: sorted(v) for k, v in groups.items()}
        out = [self.structures[c] for c in self._by_class.get((a, b), [])]
        return [s for s in out if s.qc_admissible] if qc_only else out

    def classes(self) -> list[tuple[int, int]]:
        return sorted({s.cls for s in self.structures.values()})

    def number(self, cert: str) -> int:
        """1-based index of a structure within its class (sorted by certificate)."""
        s = self.structures[cert]
        return [x.certificate for x in self.by_class(*s.cls)].index(cert) + 1

    def label(self, cert: str) -> str:
        a, b = self.structures[cert].cls
        return f"({a},{b}){{{self.number(cert)}}}"

    def class_counts(self, qc_only: bool = False) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = defaultdict(int)
        for s in self.structures.values():
            if s.qc_admissible or not qc_only:
                counts[s.cls] += 1
        return dict(sorted(counts.items()))

    def descendants(self, certs: Iterable[str]) -> set[str]:
        """Strict descendants (direct or transitive) of the given structures."""
        out: set[str] = set()
        stack = list(certs)
        while stack:
            for child in self.children.get(stack.pop(), ()):
                if child not in out:
                    out.add(child)
                    stack.append(child)
        return out

    def qc_view(self, m: int | None = None) -> StructureDb:
        """Copy restricted to structures that are m-edge colourable (m = dv by default)."""
        m = self.dv if m is None else m
        view = StructureDb(self.dv, self.g, self.a_max, self.b_max_search)
        for cert, s in self.structures.items():
            if chromatic_index(s.graph) <= m:
                view.add(s)
        for p, kids in self.children.items():
            if p in view:
                for c, exps in kids.items():
                    if c in view:
                        for e in exps:
                            view.link(p, c, e)
        return view

    def to_text(self) -> str:
        lines = [f"structuredb v{self.FORMAT_VERSION} dv={self.dv} g={self.g} a_max={self.a_max} b_max_search={self.b_max_search}"]
        for cert in sorted(self.structures, key=lambda c: (self.structures[c].cls, c)):
            s = self.structures[cert]
            edges = ",".join(f"{u}-{w}" for u, w in s.graph.edges)
            lines.append(f"S {s.a} {s.b} {s.dv} {cert} {edges} {s.root_cycle_len} {int(s.qc_admissible)}")
        for p in sorted(self.children):
            for c in sorted(self.children[p]):
                for e in sorted(self.children[p][c]):
                    lines.append(f"E {p} {c} {e.kind} {e.m} {e.c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> StructureDb:
        lines = text.splitlines()
        head = lines[0].split()
        if head[0] != "structuredb" or head[1] != f"v{cls.FORMAT_VERSION}":
            raise ValueError("not a structure database file of a supported version")
        params = dict(tok.split("=") for tok in head[2:])
        db = cls(int(params["dv"]), int(params["g"]), int(params["a_max"]), int(params["b_max_search"]))
        for line in lines[1:]:
            tok = line.split()
            if not tok:
                continue
            if tok[0] == "S":
                a, b, dv, cert, edges, root, flag = tok[1:]
                pairs = [tuple(map(int, e.split("-"))) for e in edges.split(",") if e]
                graph = NormalGraph.from_edges(int(a), pairs)
                db.add(LetsStructure(graph, int(dv), (int(a), int(b)), int(root), cert, bool(int(flag))))
            elif tok[0] == "E":
                p, c, kind, m, cc = tok[1:]
                db.link(p, c, Expansion(kind, int(m), int(cc)))
            else:
                raise ValueError(f"unexpected record {tok[0]!r}")
        return db


def enumerate_structures(
    dv: int,
    g: int,
    a_max: int,
    b_max_search: int,
    qc_only: bool = False,
    max_structures: int = 2_000_000,
) -> StructureDb:
    """Closure of the simple cycles under dot/pa/lo within a <= a_max, b <= b_max_search.

    With ``qc_only`` the closure drops structures whose chromatic index exceeds
    dv; their descendants cannot be dv-edge-coloured either.
    """
    if g < 6 or g % 2:
        raise ValueError("girth must be even and at least 6")
    if dv < 3:
        raise ValueError("variable degree must be at least 3")
    db = StructureDb(dv, g, a_max, b_max_search)
    frontier_by_a: dict[int, list[str]] = defaultdict(list)
    for k in range(g // 2, a_max + 1):
        if k * (dv - 2) <= b_max_search:
            s = LetsStructure.from_graph(NormalGraph.cycle(k), dv)
            db.add(s)
            frontier_by_a[k].append(s.certificate)
    for a in range(g // 2, a_max):
        for cert in frontier_by_a[a]:
            parent = db.structures[cert]
            for exp, child in iter_expansions(parent.graph, dv, g, a_cap=a_max, b_cap=b_max_search):
                ccert = canonical_certificate(child)
                if ccert not in db.structures:
                    s = LetsStructure.from_graph(child, dv)
                    if qc_only and not s.qc_admissible:
                        continue
                    db.add(s)
                    frontier_by_a[s.a].append(ccert)
                    if len(db) > max_structures:
                        raise BudgetExceeded(f"structure budget {max_structures} exceeded")
                db.link(cert, ccert, exp)
    return db


def admissibility_table(db: StructureDb, b_max: int | None = None, missing_only: bool = False) -> dict[tuple[int, int], dict[int, tuple[int, int]]]:
    """Per class and root cycle length: (QC-admissible count, general count)."""
    out: dict[tuple[int, int], dict[int, list[int]]] = defaultdict(lambda: defaultdict(lambda: [0, 0]))
    for s in db.structures.values():
        if b_max is not None and s.b > b_max:
            continue
        cell = out[s.cls][s.root_cycle_len]
        cell[0] += int(s.qc_admissible)
        cell[1] += 1
    table = {cls: {k: (q, n) for k, (q, n) in sorted(by_root.items())} for cls, by_root in sorted(out.items())}
    if missing_only:
        table = {cls: r for cls, r in table.items() if any(q < n for q, n in r.values())}
    return table


def brute_force_structures(dv: int, g: int, a_max: int) -> dict[tuple[int, int], set[str]]:
    """Connected graphs with degrees in [2, dv] and girth >= g/2, by vertex augmentation.

    Independent of the expansion machinery: the class of graphs with max degree
    <= dv and girth >= g/2 is closed under vertex deletion, so every member on
    k+1 nodes extends some member on k nodes by one vertex.
    """
    half = g // 2
    level = {canonical_certificate(NormalGraph(1, ())): NormalGraph(1, ())}
    out: dict[tuple[int, int], set[str]] = defaultdict(set)
    for _ in range(1, a_max):
        nxt: dict[str, NormalGraph] = {}
        for graph in level.values():
            n = graph.n
            free = [v for v in range(n) if graph.degrees[v] < dv]
            for size in range(0, dv + 1):
                for subset in itertools.combinations(free, size):
                    if any(
                        graph.distances[u][w] >= 0 and graph.distances[u][w] + 2 < half
                        for u, w in itertools.combinations(subset, 2)
                    ):
                        continue
                    child = graph.add_nodes(1, [(u, n) for u in subset])
                    cert = canonical_certificate(child)
                    if cert not in nxt:
                        nxt[cert] = child
        level = nxt
        for cert, graph in level.items():
            if min(graph.degrees) >= 2 and graph.is_connected():
                out[class_of(graph, dv)].add(cert)
    return dict(out)
