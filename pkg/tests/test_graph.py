import pytest

from bsag.dot import export_dot
from bsag.errors import (
    CycleDetected,
    DuplicateEdge,
    DuplicateId,
    GraphValidationError,
    KindMismatch,
    ReservedId,
    UnknownAspect,
)
from bsag.graph import (
    Category,
    ancestors,
    aspect_sort_key,
    category_stats,
    descendants,
    entry_points,
    topological_sort,
    validate_graph,
)

from conftest import chain_graph, lead, result, state, vuln

ENTRY_POINTS = {"A7", "A11", "A13", "A21", "A23", "A24", "A27", "A28", "A29", "A30"}

# Independent reachability oracle: plain BFS over an explicit edge list.


def closure_oracle(edge_pairs, start, reverse=False):
    step = {}
    for source, target in edge_pairs:
        if reverse:
            source, target = target, source
        step.setdefault(source, []).append(target)
    seen = set()
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for neighbor in step.get(node, []):
                if neighbor not in seen:
                    seen.add(neighbor)
                    nxt.append(neighbor)
        frontier = nxt
    seen.discard(start)
    return seen


class TestValidation:
    def test_builtin_counts(self, graph):
        assert len(graph.aspects) == 30
        assert len(graph.edges) == 36

    def test_builtin_rule_expansion(self, graph):
        per_rule = {}
        for edge in graph.edges:
            per_rule[edge.rule_id] = per_rule.get(edge.rule_id, 0) + 1
        assert per_rule["R7"] == 2
        assert per_rule["R16"] == 2
        assert per_rule["R23"] == 3
        assert per_rule["R26"] == 2
        assert per_rule["R27"] == 2
        assert per_rule["R29"] == 2
        assert sum(per_rule.values()) == 36
        assert len(per_rule) == 29

    def test_two_node_cycle(self):
        with pytest.raises(GraphValidationError) as exc:
            validate_graph([vuln("A1"), vuln("A2")],
                           [lead("A1", "A2"), lead("A2", "A1")])
        cycles = [v for v in exc.value.violations if isinstance(v, CycleDetected)]
        assert cycles and cycles[0].path == ["A1", "A2", "A1"]

    def test_state_to_state_is_kind_mismatch(self):
        with pytest.raises(GraphValidationError) as exc:
            validate_graph([state("A1"), state("A2")], [result("A1", "A2")])
        assert any(isinstance(v, KindMismatch) for v in exc.value.violations)

    def test_imply_edge_joins_state_to_vulnerability(self):
        from bsag.graph import DependencyEdge, EdgeKind

        imply = DependencyEdge(source="A1", target="A2", kind=EdgeKind.IMPLY)
        g = validate_graph([state("A1"), vuln("A2")], [imply])
        assert g.edges[0].kind is EdgeKind.IMPLY
        # the same edge with a vulnerability source violates the endpoint rule
        with pytest.raises(GraphValidationError) as exc:
            validate_graph([vuln("A1"), vuln("A2")], [imply])
        assert any(isinstance(v, KindMismatch) for v in exc.value.violations)

    def test_dangling_and_duplicates_reported_together(self):
        with pytest.raises(GraphValidationError) as exc:
            validate_graph(
                [vuln("A1"), vuln("A2"), vuln("A2")],
                [lead("A1", "A2"), lead("A1", "A2"), lead("A1", "A9")])
        kinds = {type(v) for v in exc.value.violations}
        assert DuplicateId in kinds
        assert DuplicateEdge in kinds

    def test_duplicate_pair_with_different_rules_is_an_error(self):
        # same endpoints under two rule tags must not silently merge
        with pytest.raises(GraphValidationError) as exc:
            validate_graph(
                [vuln("A1"), vuln("A2")],
                [lead("A1", "A2", rule="R1"), lead("A1", "A2", rule="R2")])
        assert any(isinstance(v, DuplicateEdge) for v in exc.value.violations)

    def test_reserved_origin_id(self):
        with pytest.raises(GraphValidationError) as exc:
            validate_graph([vuln("A1"), vuln("H0")], [])
        assert any(isinstance(v, ReservedId) for v in exc.value.violations)

    def test_self_loop(self):
        with pytest.raises(GraphValidationError) as exc:
            validate_graph([vuln("A1")], [lead("A1", "A1")])
        assert any(isinstance(v, CycleDetected) for v in exc.value.violations)

    def test_revalidation_is_idempotent(self, graph):
        again = validate_graph(graph.aspects, graph.edges)
        assert again.aspects == graph.aspects
        assert again.edges == graph.edges

    def test_empty_graph_is_valid(self):
        empty = validate_graph([], [])
        assert entry_points(empty) == set()
        stats = category_stats(empty)
        assert all(row["count"] == 0 and row["percentage"] == 0.0
                   for row in stats.values())


class TestTopologicalSort:
    def test_singleton(self):
        g = validate_graph([vuln("A3")], [])
        assert topological_sort(g) == ["A3"]

    def test_diamond_tie_break(self):
        g = validate_graph(
            [vuln(i) for i in ("A25", "A26", "A27", "A28")],
            [lead("A27", "A25"), lead("A28", "A25"), lead("A25", "A26")])
        assert topological_sort(g) == ["A27", "A28", "A25", "A26"]

    def test_builtin_respects_every_edge(self, graph):
        order = topological_sort(graph)
        assert sorted(order, key=aspect_sort_key) == [a.id for a in graph.aspects]
        position = {aspect_id: i for i, aspect_id in enumerate(order)}
        for edge in graph.edges:
            assert position[edge.source] < position[edge.target], edge

    def test_repeated_runs_identical(self, graph):
        assert topological_sort(graph) == topological_sort(graph)


class TestClosures:
    def test_ancestors_of_a5(self, graph):
        expected = {"A6", "A7", "A10", "A11", "A12", "A13", "A14", "A17", "A18",
                    "A19", "A20", "A21", "A22", "A23", "A24", "A25", "A26",
                    "A27", "A28", "A29", "A30"}
        assert ancestors(graph, "A5") == expected
        assert len(expected) == 21

    def test_ancestors_of_entry_point_empty(self, graph):
        assert ancestors(graph, "A24") == set()

    def test_ancestors_of_a1(self, graph):
        everything = {a.id for a in graph.aspects}
        assert ancestors(graph, "A1") == everything - {"A1", "A8", "A9", "A15", "A16"}

    def test_descendants_of_a25(self, graph):
        expected = {"A1", "A2", "A3", "A4", "A5", "A6", "A8", "A9", "A10", "A12",
                    "A14", "A15", "A16", "A17", "A18", "A26"}
        assert descendants(graph, "A25") == expected
        assert len(expected) == 16

    def test_descendants_of_terminal_state_empty(self, graph):
        assert descendants(graph, "A8") == set()

    def test_descendants_of_a16(self, graph):
        assert descendants(graph, "A16") == {"A15"}

    def test_unknown_aspect(self, graph):
        with pytest.raises(UnknownAspect):
            ancestors(graph, "A99")
        with pytest.raises(UnknownAspect):
            descendants(graph, "A99")

    def test_closures_match_bfs_oracle_everywhere(self, graph):
        pairs = [(e.source, e.target) for e in graph.edges]
        for aspect in graph.aspects:
            assert ancestors(graph, aspect.id) == closure_oracle(pairs, aspect.id, reverse=True)
            assert descendants(graph, aspect.id) == closure_oracle(pairs, aspect.id)

    def test_ancestors_descendants_disjoint(self, graph):
        for aspect in graph.aspects:
            assert ancestors(graph, aspect.id) & descendants(graph, aspect.id) == set()

    def test_ancestor_descendant_duality(self, graph):
        ids = [a.id for a in graph.aspects]
        down = {i: descendants(graph, i) for i in ids}
        up = {i: ancestors(graph, i) for i in ids}
        for x in ids:
            for y in ids:
                assert (x in up[y]) == (y in down[x])


class TestEntryPoints:
    def test_builtin(self, graph):
        assert entry_points(graph) == ENTRY_POINTS

    def test_entry_points_are_ancestorless(self, graph):
        assert entry_points(graph) == {a.id for a in graph.aspects
                                       if not ancestors(graph, a.id)}

    def test_chain(self):
        g = validate_graph([vuln("A21"), vuln("A20")], [lead("A21", "A20")])
        assert entry_points(g) == {"A21"}


class TestCategoryStats:
    def test_builtin(self, graph):
        stats = category_stats(graph)
        assert stats[Category.ACCESS_CONTROL] == {"count": 9, "percentage": 30.00}
        assert stats[Category.DATA] == {"count": 7, "percentage": 23.33}
        assert stats[Category.NETWORK] == {"count": 6, "percentage": 20.00}
        assert stats[Category.STANDARD] == {"count": 5, "percentage": 16.67}
        assert stats[Category.LOSS] == {"count": 3, "percentage": 10.00}

    def test_percentages_sum_to_hundred(self, graph):
        stats = category_stats(graph)
        assert abs(sum(row["percentage"] for row in stats.values()) - 100.0) <= 0.02

    def test_one_aspect_per_category(self):
        aspects = [
            vuln("A1", category=Category.DATA),
            vuln("A2", category=Category.ACCESS_CONTROL),
            vuln("A3", category=Category.STANDARD),
            vuln("A4", category=Category.NETWORK),
            state("A5", category=Category.LOSS),
        ]
        stats = category_stats(validate_graph(aspects, []))
        assert all(row["percentage"] == 20.00 for row in stats.values())


class TestDotExport:
    def test_single_vulnerability(self):
        g = validate_graph([vuln("A1")], [])
        text = export_dot(g)
        assert "shape=box" in text
        assert text.count(" -> ") == 0

    def test_state_shape(self):
        g = validate_graph([state("A8")], [])
        assert "shape=ellipse" in export_dot(g)

    def test_builtin_counts(self, graph):
        text = export_dot(graph)
        node_lines = [l for l in text.splitlines() if "shape=" in l and " -> " not in l]
        edge_lines = [l for l in text.splitlines() if " -> " in l]
        assert len(node_lines) == 30
        assert len(edge_lines) == 36

    def test_origin_included_on_request(self, graph):
        text = export_dot(graph, show_origin=True)
        node_lines = [l for l in text.splitlines() if "shape=" in l and " -> " not in l]
        edge_lines = [l for l in text.splitlines() if " -> " in l]
        assert len(node_lines) == 31
        assert len(edge_lines) == 36 + 10
        assert "H0" in text

    def test_byte_stable(self, graph):
        assert export_dot(graph) == export_dot(graph)

    def test_rule_labels_present(self, graph):
        text = export_dot(graph)
        assert 'A27 -> A25 [label="R27"];' in text

    def test_category_colors(self, graph):
        text = export_dot(graph)
        for color in ("green", "blue", "yellow", "red", "gray"):
            assert f"fillcolor={color}" in text
