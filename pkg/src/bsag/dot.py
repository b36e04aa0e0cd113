"""Graphviz DOT export for dependency graphs.

States render as ellipses, vulnerabilities as boxes; fill color follows
the category legend (data green, standard blue, access control yellow,
loss red, network gray). Output is byte-stable for a given graph.
"""

from __future__ import annotations

from .graph import ORIGIN_ID, AspectGraph, AspectKind, Category, entry_points

CATEGORY_COLORS = {
    Category.DATA: "green",
    Category.STANDARD: "blue",
    Category.ACCESS_CONTROL: "yellow",
    Category.LOSS: "red",
    Category.NETWORK: "gray",
}

_SHAPES = {
    AspectKind.STATE: "ellipse",
    AspectKind.VULNERABILITY: "box",
}


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: AspectGraph, show_origin: bool = False,
               origin_label: str = "Threat origin") -> str:
    """Render the graph as a DOT digraph; optionally add the synthetic origin."""
    lines = [
        "digraph aspects {",
        "  rankdir=LR;",
        '  node [style=filled, fontname="Helvetica"];',
    ]
    if show_origin:
        lines.append(
            f'  {ORIGIN_ID} [label="{_escape(origin_label)}", '
            'shape=ellipse, fillcolor=white];')
    for aspect in graph.aspects:
        label = _escape(f"{aspect.id}\\n{aspect.name}")
        lines.append(
            f'  {aspect.id} [label="{label}", shape={_SHAPES[aspect.kind]}, '
            f"fillcolor={CATEGORY_COLORS[aspect.category]}];")
    if show_origin:
        for entry in sorted(entry_points(graph), key=lambda a: int(a[1:])):
            lines.append(f"  {ORIGIN_ID} -> {entry};")
    for edge in graph.edges:
        rule = f' [label="{_escape(edge.rule_id)}"]' if edge.rule_id else ""
        lines.append(f"  {edge.source} -> {edge.target}{rule};")
    lines.append("}")
    return "\n".join(lines) + "\n"
