"""Exact inference over compiled security-aspect networks.

A validated dependency graph plus an exploit-score table compiles into a
Bayesian network of binary variables. Each non-root node combines its
parents through a noisy-OR gate (a parent that is compromised exploits
the child independently with the per-edge probability) or an AND gate
(the child can only be compromised when every parent is, with the product
of the edge probabilities). Marginal and posterior queries run by factor
elimination along a greedy min-fill order; a full-joint enumeration oracle
provides an independent answer on small networks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    AssignmentMismatch,
    ImpossibleEvidence,
    MissingScore,
    OriginCollision,
    TooLarge,
    UnknownAspect,
)
from .graph import ORIGIN_ID, AspectGraph, AspectKind, aspect_sort_key, entry_points, topological_sort

# Evidence whose total probability falls below this is treated as impossible.
ZERO_EVIDENCE = 1e-12

ENUMERATION_CAP = 20


class NodeMode(Enum):
    OR = "or"
    AND = "and"
    ROOT = "root"


class Method(Enum):
    ELIMINATION = "elimination"
    ENUMERATION = "enumeration"


@dataclass(frozen=True)
class ParentEdge:
    parent: str
    p: float


@dataclass(frozen=True)
class BayesNode:
    id: str
    mode: NodeMode
    prior: float | None = None
    parent_edges: tuple[ParentEdge, ...] = ()

    def __post_init__(self):
        if self.mode is NodeMode.ROOT:
            if self.parent_edges or self.prior is None:
                raise ValueError(f"root node {self.id} must have a prior and no parents")
            if not 0.0 <= self.prior <= 1.0:
                raise ValueError(f"prior for {self.id} outside [0, 1]")
        else:
            if not self.parent_edges or self.prior is not None:
                raise ValueError(f"{self.mode.value} node {self.id} must have parents and no prior")
            for edge in self.parent_edges:
                if not 0.0 <= edge.p <= 1.0:
                    raise ValueError(f"edge {edge.parent}->{self.id} probability outside [0, 1]")

    def parent_ids(self) -> tuple[str, ...]:
        return tuple(e.parent for e in self.parent_edges)


@dataclass(frozen=True)
class MarginalReport:
    probabilities: dict[str, float]
    evidence: dict[str, bool]
    method: Method


class CompiledNetwork:
    """Immutable Bayesian network; nodes stored in topological order."""

    def __init__(self, nodes):
        self.nodes: tuple[BayesNode, ...] = tuple(nodes)
        self._index = {n.id: i for i, n in enumerate(self.nodes)}
        if len(self._index) != len(self.nodes):
            raise ValueError("duplicate node ids")
        seen = set()
        for node in self.nodes:
            for parent in node.parent_ids():
                if parent not in seen:
                    raise ValueError(f"{node.id} precedes its parent {parent}; not topological")
            seen.add(node.id)
        self.origin: BayesNode | None = None
        if ORIGIN_ID in self._index:
            self.origin = self.nodes[self._index[ORIGIN_ID]]

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._index

    def node(self, node_id: str) -> BayesNode:
        try:
            return self.nodes[self._index[node_id]]
        except KeyError:
            raise UnknownAspect(node_id) from None

    def node_ids(self, include_origin: bool = True) -> list[str]:
        ids = [n.id for n in self.nodes]
        if not include_origin:
            ids = [i for i in ids if i != ORIGIN_ID]
        return ids


def compile_network(graph: AspectGraph, scores, origin_prior: float | None = None,
                    modes=None) -> CompiledNetwork:
    """Compile a validated graph and score table into a Bayesian network.

    Per-edge probability resolution, in order: an explicit probability on
    the dependency edge; the target aspect's score; 1.0 for a scoreless
    state (deterministic pass-through). Roots take their own score as the
    prior. When origin_prior is given, a synthetic threat-origin root H0
    becomes the sole parent of every original entry point, with the edge
    probability equal to that entry point's score.
    """
    scores = dict(scores)
    for aspect_id, value in scores.items():
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"score for {aspect_id} outside [0, 1]")
    modes = dict(modes or {})
    if ORIGIN_ID in graph:
        raise OriginCollision()
    if origin_prior is not None and not 0.0 <= origin_prior <= 1.0:
        raise ValueError("origin prior outside [0, 1]")

    def own_score(aspect_id: str) -> float:
        if aspect_id in scores:
            return scores[aspect_id]
        raise MissingScore(aspect_id)

    def edge_probability(edge) -> float:
        if edge.probability is not None:
            return edge.probability
        target = graph.aspect(edge.target)
        if edge.target in scores:
            return scores[edge.target]
        if target.kind is AspectKind.STATE:
            return 1.0
        raise MissingScore(edge.target)

    roots = entry_points(graph)
    order = topological_sort(graph)
    nodes = []
    if origin_prior is not None:
        nodes.append(BayesNode(id=ORIGIN_ID, mode=NodeMode.ROOT, prior=origin_prior))
    for aspect_id in order:
        if aspect_id in roots:
            if origin_prior is not None:
                nodes.append(BayesNode(
                    id=aspect_id, mode=NodeMode.OR,
                    parent_edges=(ParentEdge(ORIGIN_ID, own_score(aspect_id)),)))
            else:
                nodes.append(BayesNode(
                    id=aspect_id, mode=NodeMode.ROOT, prior=own_score(aspect_id)))
        else:
            in_edges = sorted(graph.in_edges(aspect_id),
                              key=lambda e: aspect_sort_key(e.source))
            parent_edges = tuple(ParentEdge(e.source, edge_probability(e))
                                 for e in in_edges)
            mode = modes.get(aspect_id, NodeMode.OR)
            if mode is NodeMode.ROOT:
                raise ValueError(f"{aspect_id} has parents; cannot be a root")
            nodes.append(BayesNode(id=aspect_id, mode=mode, parent_edges=parent_edges))
    return CompiledNetwork(nodes)


def cpt_entry(node: BayesNode, parent_assignment) -> float:
    """P(node = true | exact assignment of its parents)."""
    assignment = dict(parent_assignment)
    expected = set(node.parent_ids())
    if set(assignment) != expected:
        raise AssignmentMismatch(node.id, expected, set(assignment))
    if node.mode is NodeMode.ROOT:
        return node.prior
    if node.mode is NodeMode.OR:
        miss = 1.0
        for edge in node.parent_edges:
            if assignment[edge.parent]:
                miss *= 1.0 - edge.p
        return 1.0 - miss
    # AND: only a fully compromised parent set can compromise the node.
    if all(assignment[e.parent] for e in node.parent_edges):
        product = 1.0
        for edge in node.parent_edges:
            product *= edge.p
        return product
    return 0.0


# --- factors ------------------------------------------------------------------

class _Factor:
    """Nonnegative table over binary variables; axis i indexes vars[i]."""

    __slots__ = ("vars", "values")

    def __init__(self, variables, values):
        self.vars = tuple(variables)
        self.values = np.asarray(values, dtype=np.float64)

    def reduce(self, var, value: bool) -> "_Factor":
        axis = self.vars.index(var)
        taken = np.take(self.values, 1 if value else 0, axis=axis)
        remaining = self.vars[:axis] + self.vars[axis + 1:]
        return _Factor(remaining, taken)

    def sum_out(self, var) -> "_Factor":
        axis = self.vars.index(var)
        return _Factor(self.vars[:axis] + self.vars[axis + 1:],
                       self.values.sum(axis=axis))

    def multiply(self, other: "_Factor") -> "_Factor":
        merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return _Factor(merged,
                       _expand(self, merged) * _expand(other, merged))


def _expand(factor: _Factor, merged) -> np.ndarray:
    """View of the factor broadcast over the merged variable tuple."""
    order = [factor.vars.index(v) for v in merged if v in factor.vars]
    values = factor.values.transpose(order)
    shape = tuple(2 if v in factor.vars else 1 for v in merged)
    return values.reshape(shape)


def _node_factor(node: BayesNode) -> _Factor:
    """CPT factor over (node, parents...); built by broadcasting, not cpt_entry."""
    k = len(node.parent_edges)
    if node.mode is NodeMode.ROOT:
        return _Factor((node.id,), np.array([1.0 - node.prior, node.prior]))
    if node.mode is NodeMode.OR:
        miss = np.ones((2,) * k)
        for axis, edge in enumerate(node.parent_edges):
            shape = [1] * k
            shape[axis] = 2
            miss = miss * np.array([1.0, 1.0 - edge.p]).reshape(shape)
        p_true = 1.0 - miss
    else:
        product = 1.0
        for edge in node.parent_edges:
            product *= edge.p
        p_true = np.zeros((2,) * k)
        p_true[(1,) * k] = product
    values = np.stack([1.0 - p_true, p_true], axis=0)
    return _Factor((node.id,) + node.parent_ids(), values)


# --- elimination ordering ------------------------------------------------------

@dataclass(frozen=True)
class EliminationOrder:
    order: tuple[str, ...]
    max_scope: int = field(compare=False, default=0)


def _min_fill(scopes, eliminate) -> EliminationOrder:
    """Greedy min-fill over the interaction graph induced by factor scopes.

    Neighbor sets only ever hold live (not yet eliminated) variables, so
    fill counts read straight off the current graph.
    """
    neighbors: dict[str, set[str]] = {}
    for scope in scopes:
        for var in scope:
            neighbors.setdefault(var, set()).update(v for v in scope if v != var)
    remaining = set(eliminate)
    for var in remaining:
        neighbors.setdefault(var, set())
    order = []
    max_scope = 0
    while remaining:
        best = None
        best_fill = None
        for var in sorted(remaining, key=aspect_sort_key):
            live = sorted(neighbors[var], key=aspect_sort_key)
            fill = 0
            for i, u in enumerate(live):
                for w in live[i + 1:]:
                    if w not in neighbors[u]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = var, fill
        live = sorted(neighbors[best], key=aspect_sort_key)
        max_scope = max(max_scope, len(live) + 1)
        for i, u in enumerate(live):
            for w in live[i + 1:]:
                neighbors[u].add(w)
                neighbors[w].add(u)
        for n in live:
            neighbors[n].discard(best)
        del neighbors[best]
        remaining.discard(best)
        order.append(best)
    return EliminationOrder(order=tuple(order), max_scope=max_scope)


def elimination_order(net: CompiledNetwork, targets_retained=()) -> EliminationOrder:
    """Min-fill ordering over the moralized network, retaining the targets.

    max_scope reports the largest intermediate factor scope (variable
    count) the returned order would create.
    """
    retained = set(targets_retained)
    for target in retained:
        net.node(target)
    scopes = [(node.id,) + node.parent_ids() for node in net.nodes]
    eliminate = [n.id for n in net.nodes if n.id not in retained]
    return _min_fill(scopes, eliminate)


def _eliminate(factors, keep) -> list[_Factor]:
    """Sum out everything outside keep; returns the surviving factors."""
    scopes = [f.vars for f in factors if f.vars]
    all_vars = {v for scope in scopes for v in scope}
    plan = _min_fill(scopes, sorted(all_vars - set(keep), key=aspect_sort_key))
    work = list(factors)
    for var in plan.order:
        touching = [f for f in work if var in f.vars]
        if not touching:
            continue
        work = [f for f in work if var not in f.vars]
        product = touching[0]
        for f in touching[1:]:
            product = product.multiply(f)
        work.append(product.sum_out(var))
    return work


def _scalar(factors) -> float:
    total = 1.0
    for f in factors:
        total *= float(f.values.sum())
    return total


def _check_evidence(net: CompiledNetwork, evidence) -> dict[str, bool]:
    checked = {}
    for node_id, value in evidence.items():
        net.node(node_id)
        if not isinstance(value, (bool, np.bool_)):
            raise ValueError(f"evidence for {node_id} must be a boolean")
        checked[node_id] = bool(value)
    return checked


def query_marginals(net: CompiledNetwork, evidence=None,
                    include_origin: bool = False) -> MarginalReport:
    """Exact posterior P(node = true | evidence) for every node.

    The synthetic origin H0 appears in the result only when
    include_origin is set, matching the report convention; evidence on
    H0 is still honored either way.
    """
    evidence = _check_evidence(net, evidence or {})
    reduced = []
    for node in net.nodes:
        factor = _node_factor(node)
        for var, value in evidence.items():
            if var in factor.vars:
                factor = factor.reduce(var, value)
        reduced.append(factor)

    total = _scalar(_eliminate(reduced, keep=()))
    if total < ZERO_EVIDENCE:
        raise ImpossibleEvidence(evidence)

    components = _components(reduced)
    probabilities = {}
    for node in net.nodes:
        node_id = node.id
        if node_id == ORIGIN_ID and not include_origin:
            continue
        if node_id in evidence:
            probabilities[node_id] = 1.0 if evidence[node_id] else 0.0
            continue
        # Restricting to the node's connected component keeps unrelated
        # evidence from touching the arithmetic at all.
        survivors = _eliminate(components[node_id], keep=(node_id,))
        belief = survivors[0]
        for f in survivors[1:]:
            belief = belief.multiply(f)
        if belief.vars != (node_id,):
            belief = _Factor((node_id,), belief.values.reshape(2))
        raw = belief.values
        norm = float(raw[0] + raw[1])
        if norm <= 0.0:
            raise ImpossibleEvidence(evidence)
        probabilities[node_id] = float(raw[1] / norm)
    ordered = dict(sorted(probabilities.items(), key=lambda kv: aspect_sort_key(kv[0])))
    return MarginalReport(probabilities=ordered, evidence=dict(evidence),
                          method=Method.ELIMINATION)


def _components(factors):
    """Map each variable to the factor list of its connected component."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for f in factors:
        for v in f.vars:
            parent.setdefault(v, v)
        for v in f.vars[1:]:
            union(f.vars[0], v)
    groups: dict[str, list[_Factor]] = {}
    for f in factors:
        if not f.vars:
            continue
        root = find(f.vars[0])
        groups.setdefault(root, []).append(f)
    return {var: groups[find(var)] for var in parent}


def query_posterior(net: CompiledNetwork, target: str, evidence=None) -> float:
    """P(target = true | evidence)."""
    net.node(target)
    report = query_marginals(net, evidence, include_origin=True)
    return report.probabilities[target]


def enumerate_oracle(net: CompiledNetwork, evidence=None, include_origin: bool = False,
                     cap: int = ENUMERATION_CAP) -> MarginalReport:
    """Marginals by summing the full joint over all 2^n assignments.

    Deliberately bypasses the factor machinery: each node's CPT column is
    evaluated straight from its definition via cpt_entry, so this is an
    independent check on the elimination path. Capped at `cap` nodes.
    """
    evidence = _check_evidence(net, evidence or {})
    n = len(net.nodes)
    if n > cap:
        raise TooLarge(n, cap)

    index = {node.id: i for i, node in enumerate(net.nodes)}
    assignments = np.arange(1 << n, dtype=np.int64)

    def bit(i):
        return (assignments >> i) & 1

    joint = np.ones(1 << n, dtype=np.float64)
    for node in net.nodes:
        parents = node.parent_ids()
        k = len(parents)
        table = np.empty(1 << k, dtype=np.float64)
        for mask in range(1 << k):
            assignment = {p: bool(mask >> j & 1) for j, p in enumerate(parents)}
            table[mask] = cpt_entry(node, assignment)
        mask_vec = np.zeros(1 << n, dtype=np.int64)
        for j, p in enumerate(parents):
            mask_vec |= bit(index[p]) << j
        p_true = table[mask_vec]
        here = bit(index[node.id])
        joint *= np.where(here == 1, p_true, 1.0 - p_true)
    for node_id, value in evidence.items():
        joint *= bit(index[node_id]) == (1 if value else 0)

    total = float(joint.sum())
    if total < ZERO_EVIDENCE:
        raise ImpossibleEvidence(evidence)
    probabilities = {}
    for node in net.nodes:
        if node.id == ORIGIN_ID and not include_origin:
            continue
        if node.id in evidence:
            probabilities[node.id] = 1.0 if evidence[node.id] else 0.0
        else:
            probabilities[node.id] = float(joint[bit(index[node.id]) == 1].sum() / total)
    ordered = dict(sorted(probabilities.items(), key=lambda kv: aspect_sort_key(kv[0])))
    return MarginalReport(probabilities=ordered, evidence=dict(evidence),
                          method=Method.ENUMERATION)


def ancestral_subnetwork(net: CompiledNetwork, node_ids) -> CompiledNetwork:
    """The closure of the given nodes under the parent relation."""
    keep = set()
    stack = list(node_ids)
    while stack:
        node_id = stack.pop()
        if node_id in keep:
            continue
        keep.add(node_id)
        stack.extend(net.node(node_id).parent_ids())
    return CompiledNetwork([n for n in net.nodes if n.id in keep])
