"""Typed security-dependency graphs and their structural queries.

A graph holds two kinds of aspects (states and vulnerabilities) joined by
three kinds of directed edges: a state can *imply* a vulnerability, a
vulnerability can *result* in a state, and a vulnerability can *lead* to
another vulnerability. Validation enforces those endpoint rules plus
acyclicity, and the query helpers (topological order, ancestor/descendant
closures, entry points) answer cause/consequence questions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    BadAspectId,
    CycleDetected,
    DanglingEndpoint,
    DuplicateEdge,
    DuplicateId,
    GraphValidationError,
    KindMismatch,
    ReservedId,
    UnknownAspect,
)

ORIGIN_ID = "H0"

_ASPECT_ID_RE = re.compile(r"^A[1-9][0-9]*$")


def is_aspect_id(text: str) -> bool:
    return bool(_ASPECT_ID_RE.match(text))


def aspect_sort_key(aspect_id: str):
    """Deterministic ordering key: the origin node first, then ascending number."""
    if aspect_id == ORIGIN_ID:
        return (0, 0)
    return (1, int(aspect_id[1:]))


class AspectKind(Enum):
    STATE = "state"
    VULNERABILITY = "vulnerability"


class Category(Enum):
    DATA = "data"
    ACCESS_CONTROL = "access_control"
    STANDARD = "standard"
    NETWORK = "network"
    LOSS = "loss"


class EdgeKind(Enum):
    IMPLY = "imply"    # state -> vulnerability
    RESULT = "result"  # vulnerability -> state
    LEAD = "lead"      # vulnerability -> vulnerability


# Allowed (source kind, target kind) per edge kind.
_ENDPOINT_RULES = {
    EdgeKind.IMPLY: (AspectKind.STATE, AspectKind.VULNERABILITY),
    EdgeKind.RESULT: (AspectKind.VULNERABILITY, AspectKind.STATE),
    EdgeKind.LEAD: (AspectKind.VULNERABILITY, AspectKind.VULNERABILITY),
}


@dataclass(frozen=True)
class Aspect:
    id: str
    name: str
    kind: AspectKind
    category: Category
    description: str | None = None


@dataclass(frozen=True)
class DependencyEdge:
    source: str
    target: str
    kind: EdgeKind
    rule_id: str | None = None
    probability: float | None = None


@dataclass(frozen=True)
class AspectGraph:
    """A validated, immutable dependency graph. Build via validate_graph."""

    aspects: tuple[Aspect, ...]
    edges: tuple[DependencyEdge, ...]
    _by_id: dict = field(repr=False, compare=False, default_factory=dict)

    def aspect(self, aspect_id: str) -> Aspect:
        try:
            return self._by_id[aspect_id]
        except KeyError:
            raise UnknownAspect(aspect_id) from None

    def __contains__(self, aspect_id: str) -> bool:
        return aspect_id in self._by_id

    def aspect_ids(self) -> list[str]:
        return [a.id for a in self.aspects]

    def parents_of(self, aspect_id: str) -> list[str]:
        self.aspect(aspect_id)
        return sorted((e.source for e in self.edges if e.target == aspect_id),
                      key=aspect_sort_key)

    def children_of(self, aspect_id: str) -> list[str]:
        self.aspect(aspect_id)
        return sorted((e.target for e in self.edges if e.source == aspect_id),
                      key=aspect_sort_key)

    def in_edges(self, aspect_id: str) -> list[DependencyEdge]:
        return [e for e in self.edges if e.target == aspect_id]


def validate_graph(aspects, edges) -> AspectGraph:
    """Check every structural invariant and return an immutable graph.

    All violations are collected before raising, so a caller sees the
    complete problem list (duplicate ids, dangling endpoints, duplicate
    edges, endpoint-kind mismatches, cycles) rather than the first hit.
    """
    aspects = list(aspects)
    edges = list(edges)
    violations = []

    by_id: dict[str, Aspect] = {}
    for aspect in aspects:
        if aspect.id == ORIGIN_ID:
            violations.append(ReservedId(aspect.id))
            continue
        if not is_aspect_id(aspect.id):
            violations.append(BadAspectId(aspect.id))
            continue
        if aspect.id in by_id:
            violations.append(DuplicateId(aspect.id))
            continue
        if not aspect.name:
            violations.append(BadAspectId(f"{aspect.id} (empty name)"))
            continue
        by_id[aspect.id] = aspect

    seen_pairs = set()
    usable_edges = []
    for edge in edges:
        if edge.source == edge.target:
            violations.append(CycleDetected([edge.source, edge.target]))
            continue
        if edge.source not in by_id or edge.target not in by_id:
            violations.append(DanglingEndpoint(edge))
            continue
        pair = (edge.source, edge.target)
        if pair in seen_pairs:
            violations.append(DuplicateEdge(*pair))
            continue
        seen_pairs.add(pair)
        want_src, want_dst = _ENDPOINT_RULES[edge.kind]
        src_kind = by_id[edge.source].kind
        dst_kind = by_id[edge.target].kind
        if src_kind is not want_src or dst_kind is not want_dst:
            violations.append(KindMismatch(
                edge, f"{src_kind.value} -> {dst_kind.value}"))
            continue
        if edge.probability is not None and not 0.0 <= edge.probability <= 1.0:
            violations.append(KindMismatch(edge, "probability outside [0, 1]"))
            continue
        usable_edges.append(edge)

    cycle = _find_cycle(by_id, usable_edges)
    if cycle is not None:
        violations.append(CycleDetected(cycle))

    if violations:
        raise GraphValidationError(violations)

    ordered_aspects = tuple(sorted(aspects, key=lambda a: aspect_sort_key(a.id)))
    ordered_edges = tuple(sorted(
        edges, key=lambda e: (aspect_sort_key(e.source), aspect_sort_key(e.target))))
    return AspectGraph(aspects=ordered_aspects, edges=ordered_edges,
                       _by_id={a.id: a for a in ordered_aspects})


def _find_cycle(by_id, edges):
    """Return one cycle as a closed node path, or None. Iterative DFS."""
    children: dict[str, list[str]] = {a: [] for a in by_id}
    for e in edges:
        children[e.source].append(e.target)
    for kids in children.values():
        kids.sort(key=aspect_sort_key)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {a: WHITE for a in by_id}
    for start in sorted(by_id, key=aspect_sort_key):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(children[start]))]
        path = [start]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for child in it:
                if color[child] == GRAY:
                    return path[path.index(child):] + [child]
                if color[child] == WHITE:
                    color[child] = GRAY
                    path.append(child)
                    stack.append((child, iter(children[child])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def topological_sort(graph: AspectGraph) -> list[str]:
    """Kahn's algorithm; ties broken by ascending numeric id."""
    indegree = {a.id: 0 for a in graph.aspects}
    children: dict[str, list[str]] = {a.id: [] for a in graph.aspects}
    for e in graph.edges:
        indegree[e.target] += 1
        children[e.source].append(e.target)

    ready = sorted((a for a, d in indegree.items() if d == 0), key=aspect_sort_key)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        freed = []
        for child in children[node]:
            indegree[child] -= 1
            if indegree[child] == 0:
                freed.append(child)
        if freed:
            ready = sorted(ready + freed, key=aspect_sort_key)
    return order


def _closure(graph: AspectGraph, start: str, forward: bool) -> set[str]:
    graph.aspect(start)
    step: dict[str, list[str]] = {a.id: [] for a in graph.aspects}
    for e in graph.edges:
        if forward:
            step[e.source].append(e.target)
        else:
            step[e.target].append(e.source)
    seen: set[str] = set()
    stack = list(step[start])
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(step[node])
    seen.discard(start)
    return seen


def ancestors(graph: AspectGraph, aspect_id: str) -> set[str]:
    """All aspects with a directed path into aspect_id (its causes)."""
    return _closure(graph, aspect_id, forward=False)


def descendants(graph: AspectGraph, aspect_id: str) -> set[str]:
    """All aspects reachable from aspect_id (its consequences)."""
    return _closure(graph, aspect_id, forward=True)


def entry_points(graph: AspectGraph) -> set[str]:
    """Aspects with no incoming edges."""
    targeted = {e.target for e in graph.edges}
    return {a.id for a in graph.aspects if a.id not in targeted}


def category_stats(graph: AspectGraph) -> dict[Category, dict[str, float]]:
    """Per-category aspect count and percentage of the total (2 decimals)."""
    total = len(graph.aspects)
    stats = {}
    for category in Category:
        count = sum(1 for a in graph.aspects if a.category is category)
        pct = round(100.0 * count / total, 2) if total else 0.0
        stats[category] = {"count": count, "percentage": pct}
    return stats
