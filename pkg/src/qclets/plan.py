"""Minimal target sets, out-of-range parent covers and layered search plans."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .lets import Expansion, StructureDb

Range = tuple[int, int]


def in_ranges(cls: tuple[int, int], ranges: Iterable[Range]) -> bool:
    a, b = cls
    return any(a <= a_max and b <= b_max for a_max, b_max in ranges)


def normalize_ranges(ranges: Range | Iterable[Range]) -> tuple[Range, ...]:
    if isinstance(ranges, tuple) and len(ranges) == 2 and all(isinstance(x, int) for x in ranges):
        return (ranges,)  # type: ignore[return-value]
    out = tuple(sorted({(int(a), int(b)) for a, b in ranges}))  # type: ignore[misc]
    if not out:
        raise ValueError("at least one (a_max, b_max) rectangle is required")
    return out


@dataclass
class TargetSet:
    ranges: tuple[Range, ...]
    members: list[str]
    in_range: list[str]
    sizes: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def by_size(self, db: StructureDb) -> dict[int, list[str]]:
        groups: dict[int, list[str]] = defaultdict(list)
        for cert in self.members:
            groups[db[cert].a].append(cert)
        return dict(sorted(groups.items()))


def compute_target_set(db: StructureDb, ranges: Range | Iterable[Range], qc_only: bool = True) -> TargetSet:
    """In-range structures that are not descendants of smaller in-range ones.

    Removing every member from a graph removes every in-range structure,
    because a child always contains its parent as an induced subgraph.
    """
    ranges = normalize_ranges(ranges)
    a_top = max(a for a, _ in ranges)
    b_top = max(b for _, b in ranges)
    if a_top > db.a_max or b_top > db.b_max_search:
        raise ValueError(f"structure database (a<={db.a_max}, b<={db.b_max_search}) does not cover the range {ranges}")
    in_range = sorted(
        (c for c, s in db.structures.items() if in_ranges(s.cls, ranges) and (s.qc_admissible or not qc_only)),
        key=lambda c: (db[c].cls, c),
    )
    members: list[str] = []
    covered: set[str] = set()
    for a in range(db.g // 2, a_top + 1):
        for cert in in_range:
            if db[cert].a == a and cert not in covered:
                members.append(cert)
        covered = db.descendants(members)
    return TargetSet(ranges, members, in_range, sorted({db[c].a for c in members}))


class CoverError(RuntimeError):
    """Some structure has no parent left in the database."""


@dataclass
class CoverStep:
    targets: list[str]
    carried: list[str]
    chosen: list[str]
    roots: list[str]
    covered_by: dict[str, str]


def _class_order(db: StructureDb, certs: Iterable[str]) -> list[tuple[int, int]]:
    # smaller a first, then smaller b
    return sorted({db[c].cls for c in certs})


def parent_cover(
    db: StructureDb,
    targets: TargetSet,
    qc_only: bool = True,
    tie_key: Callable[[str], Any] | None = None,
) -> list[CoverStep]:
    """Backward greedy recursion choosing out-of-range parents, largest layer first.

    Candidate classes are tried by smaller a, then smaller b. Within a class the
    parent with most children still in S is taken; ties go to the smallest
    ``tie_key`` (certificate order by default). Cycles in S are roots and need
    no parent. The recursion continues past the smallest layer while S still
    holds non-cycles.
    """
    usable = (lambda c: db[c].qc_admissible) if qc_only else (lambda c: True)
    tie = tie_key or (lambda c: c)
    layers = targets.by_size(db)
    sizes = sorted(layers, reverse=True)
    steps: list[CoverStep] = []
    carried: list[str] = []
    idx = 0
    while idx < len(sizes) or any(db.parents.get(c) for c in carried):
        new_targets = list(layers[sizes[idx]]) if idx < len(sizes) else []
        idx += 1
        pool = sorted(set(new_targets) | set(carried), key=lambda c: (db[c].cls, c))
        roots = [c for c in pool if not db.parents.get(c)]
        for c in roots:
            if db[c].graph.girth() != db[c].a:
                raise CoverError(f"{db.label(c)} has no parent in the database")
        remaining = set(pool) - set(roots)
        candidates: dict[str, set[str]] = defaultdict(set)
        for child in remaining:
            for parent in db.parents.get(child, {}):
                if usable(parent):
                    candidates[parent].add(child)
        chosen: list[str] = []
        covered_by: dict[str, str] = {}
        for cls in _class_order(db, candidates):
            gamma = [c for c in candidates if db[c].cls == cls]
            while gamma and remaining:
                best = min(gamma, key=lambda c: (-len(candidates[c] & remaining), tie(c)))
                hits = candidates[best] & remaining
                if not hits:
                    break
                chosen.append(best)
                gamma.remove(best)
                for child in hits:
                    covered_by[child] = best
                remaining -= hits
            if not remaining:
                break
        if remaining:
            raise CoverError(f"no parent found for {sorted(db.label(c) for c in remaining)}")
        steps.append(CoverStep(new_targets, carried, chosen, roots, covered_by))
        carried = chosen
    return steps


@dataclass
class PlanNode:
    cert: str
    cls: tuple[int, int]
    root: int
    expansions: dict[str, set[Expansion]]  # child cert -> expansions realising it

    @property
    def expansion_kinds(self) -> set[Expansion]:
        out: set[Expansion] = set()
        for exps in self.expansions.values():
            out |= exps
        return out


@dataclass
class PlanLayer:
    size: int
    targets: list[str]
    # (root cycle length, targets reached from it) in processing order
    sublayers: list[tuple[int, list[str]]]
    needed: list[str]
    retain: list[str]


@dataclass
class SearchPlan:
    dv: int
    g: int
    ranges: tuple[Range, ...]
    nodes: dict[str, PlanNode]
    targets: list[str]
    layers: list[PlanLayer]
    roots: list[int]
    labels: dict[str, str] = field(default_factory=dict)

    FORMAT_VERSION = 1

    def chain_to(self, cert: str) -> list[str]:
        """Structures from the root cycle down to ``cert`` along cover edges."""
        chain = [cert]
        parent_of = self.parent_of
        while chain[-1] in parent_of:
            chain.append(parent_of[chain[-1]])
        return chain[::-1]

    @property
    def parent_of(self) -> dict[str, str]:
        out = {}
        for p, node in self.nodes.items():
            for child in node.expansions:
                out[child] = p
        return out

    def class_table(self) -> dict[tuple[int, int], tuple[int, set[Expansion], dict[int, int]]]:
        """Per class: number of involved structures, union of expansions, count per root."""
        table: dict[tuple[int, int], list] = {}
        for node in self.nodes.values():
            entry = table.setdefault(node.cls, [0, set(), defaultdict(int)])
            entry[0] += 1
            entry[1] |= node.expansion_kinds
            entry[2][node.root] += 1
        return {k: (v[0], v[1], dict(v[2])) for k, v in sorted(table.items())}

    def to_text(self) -> str:
        ranges = ";".join(f"{a},{b}" for a, b in self.ranges)
        lines = [f"searchplan v{self.FORMAT_VERSION} dv={self.dv} g={self.g} ranges={ranges}"]
        lines.append("roots " + " ".join(str(k) for k in self.roots))
        for cert in sorted(self.nodes, key=lambda c: (self.nodes[c].cls, c)):
            node = self.nodes[cert]
            lines.append(f"N {cert} {node.cls[0]} {node.cls[1]} {node.root} {self.labels.get(cert, '-')}")
            for child in sorted(node.expansions):
                exps = ",".join(str(e) for e in sorted(node.expansions[child]))
                lines.append(f"X {cert} {child} {exps}")
        for layer in self.layers:
            lines.append(f"L {layer.size} " + " ".join(layer.targets))
            for root, certs in layer.sublayers:
                lines.append(f"U {layer.size} {root} " + " ".join(certs))
            lines.append(f"K {layer.size} " + " ".join(layer.retain))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SearchPlan:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        head = lines[0]
        if head[0] != "searchplan" or head[1] != f"v{cls.FORMAT_VERSION}":
            raise ValueError("not a search plan file of a supported version")
        params = dict(tok.split("=", 1) for tok in head[2:])
        ranges = tuple(tuple(int(x) for x in r.split(",")) for r in params["ranges"].split(";"))
        plan = cls(int(params["dv"]), int(params["g"]), ranges, {}, [], [], [])  # type: ignore[arg-type]
        layer_map: dict[int, PlanLayer] = {}
        for tok in lines[1:]:
            kind = tok[0]
            if kind == "roots":
                plan.roots = [int(x) for x in tok[1:]]
            elif kind == "N":
                cert, a, b, root, label = tok[1:6]
                plan.nodes[cert] = PlanNode(cert, (int(a), int(b)), int(root), {})
                if label != "-":
                    plan.labels[cert] = label
            elif kind == "X":
                plan.nodes[tok[1]].expansions[tok[2]] = {Expansion.parse(e) for e in tok[3].split(",")}
            elif kind == "L":
                layer = PlanLayer(int(tok[1]), tok[2:], [], [], [])
                layer_map[layer.size] = layer
                plan.layers.append(layer)
                plan.targets.extend(tok[2:])
            elif kind == "U":
                layer_map[int(tok[1])].sublayers.append((int(tok[2]), tok[3:]))
            elif kind == "K":
                layer_map[int(tok[1])].retain = tok[2:]
            else:
                raise ValueError(f"unexpected plan record {kind!r}")
        for layer in plan.layers:
            needed: set[str] = set()
            for t in layer.targets:
                needed.update(plan.chain_to(t))
            layer.needed = sorted(needed)
        return plan


def build_plan(db: StructureDb, targets: TargetSet, cover: list[CoverStep]) -> SearchPlan:
    """Assemble the layered trellis from a cover trace."""
    covered_by: dict[str, str] = {}
    for step in cover:
        covered_by.update(step.covered_by)
    involved = set(targets.members) | set(covered_by) | set(covered_by.values())
    if not involved:
        return SearchPlan(db.dv, db.g, targets.ranges, {}, [], [], [])

    def root_of(cert: str) -> int:
        while cert in covered_by:
            cert = covered_by[cert]
        return db[cert].a

    nodes: dict[str, PlanNode] = {}
    for cert in involved:
        nodes[cert] = PlanNode(cert, db[cert].cls, root_of(cert), {})
    for child, parent in covered_by.items():
        nodes[parent].expansions[child] = set(db.children[parent][child])

    plan = SearchPlan(db.dv, db.g, targets.ranges, nodes, list(targets.members), [], [])
    plan.labels = {c: db.label(c) for c in involved}
    plan.roots = sorted({db[c].a for c in involved if c not in covered_by})

    layer_targets = targets.by_size(db)
    needed_by_layer = []
    for size, certs in layer_targets.items():
        needed: set[str] = set()
        for t in certs:
            needed.update(plan.chain_to(t))
        needed_by_layer.append((size, certs, needed))
    for i, (size, certs, needed) in enumerate(needed_by_layer):
        later: set[str] = set()
        for _, _, nxt in needed_by_layer[i + 1:]:
            later |= nxt
        by_root: dict[int, list[str]] = defaultdict(list)
        for t in certs:
            by_root[nodes[t].root].append(t)
        plan.layers.append(
            PlanLayer(
                size=size,
                targets=list(certs),
                sublayers=[(k, sorted(v)) for k, v in sorted(by_root.items())],
                needed=sorted(needed),
                retain=sorted((needed & later) - set(certs)),
            )
        )
    return plan


def plan_for(db: StructureDb, ranges: Range | Iterable[Range], qc_only: bool = True) -> SearchPlan:
    targets = compute_target_set(db, ranges, qc_only=qc_only)
    return build_plan(db, targets, parent_cover(db, targets, qc_only=qc_only))


CharTable = Mapping[tuple[int, int], tuple[int, Iterable[Expansion]]]


def plan_table(plan: SearchPlan) -> dict[tuple[int, int], tuple[int, set[Expansion]]]:
    return {cls: (n, exps) for cls, (n, exps, _) in plan.class_table().items()}


def cost_report(table: SearchPlan | CharTable) -> dict[str, int]:
    """Weighted expansion counts: each class entry adds its structure count per listed expansion."""
    if isinstance(table, SearchPlan):
        table = plan_table(table)
    totals: dict[str, int] = defaultdict(int)
    for _, (count, exps) in table.items():
        for e in set(exps):
            totals[str(e)] += count
    return dict(sorted(totals.items()))


def render_table(table: SearchPlan | CharTable, labels_by_root: Mapping[tuple[int, int], Mapping[int, int]] | None = None) -> str:
    """Grid with one row per b and one column per a, as in a characterization table."""
    if isinstance(table, SearchPlan):
        roots = {cls: r for cls, (_, _, r) in table.class_table().items()}
        table = plan_table(table)
    else:
        roots = dict(labels_by_root or {})
    if not table:
        return "(empty)\n"
    a_vals = range(min(a for a, _ in table), max(a for a, _ in table) + 1)
    b_vals = range(0, max(b for _, b in table) + 1)
    cells = {}
    for cls, (count, exps) in table.items():
        if cls in roots and roots[cls]:
            head = ",".join(f"s{k}({n})" for k, n in sorted(roots[cls].items()))
        else:
            head = f"({count})"
        tail = ",".join(str(e) for e in sorted(exps)) or "-"
        cells[cls] = f"{head} | {tail}"
    width = max(len(c) for c in cells.values())
    out = ["b\\a".ljust(5) + " ".join(f"a={a}".ljust(width) for a in a_vals)]
    for b in b_vals:
        row = [f"b={b}".ljust(5)]
        for a in a_vals:
            row.append(cells.get((a, b), "-").ljust(width))
        out.append(" ".join(row).rstrip())
    return "\n".join(out) + "\n"
