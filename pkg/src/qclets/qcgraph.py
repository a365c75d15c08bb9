"""Base graphs, exponent matrices, cyclic lifts and girth checks."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ABSENT = None


@dataclass(frozen=True)
class BaseGraph:
    m: int
    n: int
    mask: tuple[tuple[bool, ...], ...] = ()

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("base graph needs at least one row and one column")
        if not self.mask:
            object.__setattr__(self, "mask", tuple((True,) * self.n for _ in range(self.m)))
        if len(self.mask) != self.m or any(len(r) != self.n for r in self.mask):
            raise ValueError("edge mask shape does not match (m, n)")

    @classmethod
    def full(cls, m: int, n: int) -> BaseGraph:
        return cls(m, n)

    @property
    def fully_connected(self) -> bool:
        return all(all(r) for r in self.mask)

    @property
    def dv(self) -> int:
        if not self.fully_connected:
            raise ValueError("variable degree is not uniform for a masked base")
        return self.m

    @property
    def dc(self) -> int:
        if not self.fully_connected:
            raise ValueError("check degree is not uniform for a masked base")
        return self.n


@dataclass(frozen=True)
class ExponentMatrix:
    """Shift values per base edge; ``None`` marks an absent edge (not the same as 0)."""

    N: int
    entries: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError(f"lifting degree must be positive, got {self.N}")
        rows = tuple(tuple(None if e is None else int(e) for e in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("empty exponent matrix")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} entries, expected {width}")
            for j, e in enumerate(row):
                if e is not None and not 0 <= e < self.N:
                    raise ValueError(f"entry ({i},{j})={e} outside [0, {self.N})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int | None]], N: int) -> ExponentMatrix:
        return cls(N, tuple(tuple(r) for r in rows))

    @classmethod
    def from_array(cls, arr, N: int) -> ExponentMatrix:
        """Negative entries of ``arr`` are read as absent."""
        arr = np.asarray(arr)
        return cls(N, tuple(tuple(None if v < 0 else int(v) for v in row) for row in arr))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    @property
    def base(self) -> BaseGraph:
        return BaseGraph(self.m, self.n, tuple(tuple(e is not None for e in row) for row in self.entries))

    @cached_property
    def array(self) -> np.ndarray:
        """Integer view with -1 for absent entries."""
        return np.array([[-1 if e is None else e for e in row] for row in self.entries], dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        return self.array >= 0

    def __getitem__(self, ij: tuple[int, int]) -> int | None:
        i, j = ij
        return self.entries[i][j]

    def to_text(self) -> str:
        lines = [f"{self.m} {self.n} {self.N}"]
        for row in self.entries:
            lines.append(" ".join("-" if e is None else str(e) for e in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> ExponentMatrix:
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 3:
            raise ValueError("first line must be 'm n N'")
        try:
            m, n, N = (int(x) for x in lines[0])
        except ValueError as exc:
            raise ValueError(f"bad header {lines[0]}") from exc
        body = lines[1:]
        if len(body) != m:
            raise ValueError(f"expected {m} rows, found {len(body)}")
        rows = []
        for i, toks in enumerate(body):
            if len(toks) != n:
                raise ValueError(f"row {i} has {len(toks)} tokens, expected {n}")
            try:
                rows.append(tuple(None if t == "-" else int(t) for t in toks))
            except ValueError as exc:
                raise ValueError(f"row {i}: {exc}") from exc
        return cls(N, tuple(rows))

    def with_entry(self, i: int, j: int, value: int | None) -> ExponentMatrix:
        rows = [list(r) for r in self.entries]
        rows[i][j] = value
        return ExponentMatrix.from_rows(rows, self.N)

    def columns(self, cols: Sequence[int]) -> ExponentMatrix:
        return ExponentMatrix.from_rows([[row[j] for j in cols] for row in self.entries], self.N)


@dataclass(frozen=True)
class TannerGraph:
    """Lifted bipartite graph; variable ``j*N+t`` meets check ``i*N+(t+p_ij) % N``."""

    n_var: int
    n_chk: int
    edge_chk: np.ndarray
    edge_var: np.ndarray
    N: int = 1
    var_adj: tuple[tuple[int, ...], ...] = field(default=(), repr=False)
    chk_adj: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not self.var_adj:
            va: list[list[int]] = [[] for _ in range(self.n_var)]
            ca: list[list[int]] = [[] for _ in range(self.n_chk)]
            for c, v in zip(self.edge_chk.tolist(), self.edge_var.tolist()):
                va[v].append(c)
                ca[c].append(v)
            object.__setattr__(self, "var_adj", tuple(tuple(sorted(x)) for x in va))
            object.__setattr__(self, "chk_adj", tuple(tuple(sorted(x)) for x in ca))

    @property
    def n_edges(self) -> int:
        return int(self.edge_var.size)

    def dense_h(self) -> np.ndarray:
        h = np.zeros((self.n_chk, self.n_var), dtype=np.uint8)
        h[self.edge_chk, self.edge_var] = 1
        return h

    def var_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.var_adj])

    def chk_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.chk_adj])

    def to_alist(self) -> str:
        vdeg = [len(a) for a in self.var_adj]
        cdeg = [len(a) for a in self.chk_adj]
        lines = [f"{self.n_var} {self.n_chk}", f"{max(vdeg, default=0)} {max(cdeg, default=0)}"]
        lines.append(" ".join(map(str, vdeg)))
        lines.append(" ".join(map(str, cdeg)))
        lines.extend(" ".join(str(c + 1) for c in adj) for adj in self.var_adj)
        lines.extend(" ".join(str(v + 1) for v in adj) for adj in self.chk_adj)
        return "\n".join(lines) + "\n"


def lift(P: ExponentMatrix, base: BaseGraph | None = None) -> TannerGraph:
    if base is not None:
        if (base.m, base.n) != P.shape:
            raise ValueError(f"base {base.m}x{base.n} does not match exponent matrix {P.m}x{P.n}")
        if tuple(tuple(bool(x) for x in r) for r in P.mask) != base.mask:
            raise ValueError("absent entries must match the base edge mask")
    N = P.N
    t = np.arange(N)
    chk, var = [], []
    for i in range(P.m):
        for j in range(P.n):
            p = P.entries[i][j]
            if p is None:
                continue
            var.append(j * N + t)
            chk.append(i * N + (t + p) % N)
    if var:
        ev, ec = np.concatenate(var), np.concatenate(chk)
    else:
        ev = ec = np.zeros(0, dtype=np.int64)
    return TannerGraph(P.n * N, P.m * N, ec, ev, N)


def girth(P: ExponentMatrix, g_cap: int = 14) -> int:
    """Girth from zero-shift closed backtrackless base walks.

    Walks are grown one row-visit at a time, tracking for every (start column,
    start row, current column, last row) the set of reachable shift sums mod N.
    The first walk length l with a closed zero-sum walk gives girth 2l; such a
    minimal walk has no zero-sum proper subwalk. Returns ``g_cap`` when no cycle
    shorter than ``g_cap`` exists.
    """
    if g_cap % 2:
        raise ValueError("g_cap must be even")
    arr, N = P.array, P.N
    m, n = arr.shape
    mask = arr >= 0
    starts = [(j, i) for j in range(n) for i in range(m) if mask[i, j]]
    if not starts:
        return g_cap
    S = len(starts)
    idx = np.arange(N)
    # state[s, col, row, shift]: walk from start s currently at col, entered through row
    state = np.zeros((S, n, m, N), dtype=bool)
    for s, (j0, i0) in enumerate(starts):
        for j1 in range(n):
            if j1 != j0 and mask[i0, j1]:
                state[s, j1, i0, (arr[i0, j0] - arr[i0, j1]) % N] = True
    start_col = np.array([j for j, _ in starts])
    start_row = np.array([i for _, i in starts])
    for l in range(1, g_cap // 2):
        if l >= 2:
            closed = state[np.arange(S), start_col, :, 0]  # (S, m)
            closed[np.arange(S), start_row] = False
            if closed.any():
                return 2 * l
        if l == g_cap // 2 - 1:
            break
        new = np.zeros_like(state)
        for r in range(m):
            others = [q for q in range(m) if q != r]
            if not others:
                continue
            # enter column j via some row q != r, leave it on row r
            via = state[:, :, others, :].any(axis=2)  # (S, n, N)
            for j in range(n):
                if not mask[r, j] or not via[:, j].any():
                    continue
                for j2 in range(n):
                    if j2 == j or not mask[r, j2]:
                        continue
                    delta = (arr[r, j] - arr[r, j2]) % N
                    new[:, j2, r, :] |= via[:, j, (idx - delta) % N]
        state = new
    return g_cap


def _unified_adjacency(graph: TannerGraph) -> list[list[int]]:
    # variables first, then checks offset by n_var
    nv = graph.n_var
    return [[nv + c for c in a] for a in graph.var_adj] + [list(a) for a in graph.chk_adj]


def bfs_girth(graph: TannerGraph, g_cap: int | None = None, orbit_roots: bool = True) -> int | None:
    """Shortest cycle length of the lift by breadth-first search, None if acyclic.

    With ``orbit_roots`` only variable ``j*N`` of each column block is used as a
    root: the cyclic automorphism moves any cycle through one of them.
    """
    nv = graph.n_var
    adj = _unified_adjacency(graph)
    roots: Iterable[int]
    if orbit_roots:
        roots = range(0, nv, graph.N)
    else:
        roots = range(nv + graph.n_chk)
    best = None
    for r in roots:
        dist = {r: 0}
        parent = {r: -1}
        q = deque([r])
        while q:
            u = q.popleft()
            du = dist[u]
            if best is not None and 2 * du >= best:
                break
            for w in adj[u]:
                if w == parent[u]:
                    continue
                if w in dist:
                    cyc = du + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
                else:
                    dist[w] = du + 1
                    parent[w] = u
                    q.append(w)
    if best is not None and g_cap is not None and best >= g_cap:
        return g_cap
    return best


def cycle_spectrum(graph: TannerGraph, max_len: int = 10) -> Counter:
    """Number of cycles per length up to ``max_len``, by rooted simple-path search."""
    total = graph.n_var + graph.n_chk
    adj = _unified_adjacency(graph)
    counts: Counter = Counter()
    for root in range(total):
        on_path = [False] * total
        on_path[root] = True

        def dfs(u: int, depth: int) -> None:
            for w in adj[u]:
                if w == root and depth >= 3:
                    counts[depth + 1] += 1
                elif w > root and not on_path[w] and depth + 1 < max_len:
                    on_path[w] = True
                    dfs(w, depth + 1)
                    on_path[w] = False

        dfs(root, 0)
    # each cycle is found once from its smallest node in each direction
    return Counter({k: v // 2 for k, v in counts.items() if v})


def canonicalize(P: ExponentMatrix) -> ExponentMatrix:
    """Shift rows and columns so row 0 and column 0 are zero, then sort columns 1.. by their shifts."""
    if not P.mask.all():
        raise ValueError("canonical form is defined only for fully-connected bases")
    a, N = P.array, P.N
    a = (a - a[:, :1]) % N
    a = (a - a[:1, :]) % N
    tail = sorted(range(1, P.n), key=lambda j: tuple(a[1:, j]))
    a = a[:, [0] + tail]
    return ExponentMatrix.from_array(a, N)


def binary_rank(h) -> int:
    """GF(2) rank of a parity-check matrix given densely, or of the lift of an exponent matrix."""
    if isinstance(h, ExponentMatrix):
        h = lift(h)
    if isinstance(h, TannerGraph):
        rows = [0] * h.n_chk
        for c, adj in enumerate(h.chk_adj):
            x = 0
            for v in adj:
                x |= 1 << v
            rows[c] = x
    else:
        arr = np.asarray(h, dtype=np.uint8) & 1
        rows = [int("".join(map(str, r[::-1])), 2) if r.size else 0 for r in arr]
    rank = 0
    pivots: dict[int, int] = {}
    for x in rows:
        while x:
            top = x.bit_length() - 1
            if top in pivots:
                x ^= pivots[top]
            else:
                pivots[top] = x
                rank += 1
                break
    return rank


def code_dimension(P: ExponentMatrix) -> int:
    return P.n * P.N - binary_rank(P)
