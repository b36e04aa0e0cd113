"""
Exploring the dependency graph
==============================

The bundled model ships thirty security aspects wired by 36 typed edges.
This walk-through validates the graph, asks the structural questions an
analyst starts with, and writes a DOT rendering you can feed to Graphviz.
"""

from bsag import builtin_model, export_dot
from bsag.graph import ancestors, category_stats, descendants, entry_points, topological_sort

model = builtin_model()
graph = model.graph

print(f"{len(graph.aspects)} aspects, {len(graph.edges)} edges")

# Topological order: causes always print before their consequences.
order = topological_sort(graph)
print("first five in causal order:", ", ".join(order[:5]))
print("last five:", ", ".join(order[-5:]))

# Where can an attacker enter? Aspects nobody depends on.
entries = sorted(entry_points(graph), key=lambda a: int(a[1:]))
print("entry points:", ", ".join(entries))

# Root causes of data leakage (A5): everything upstream of it.
causes = sorted(ancestors(graph, "A5"), key=lambda a: int(a[1:]))
print(f"A5 ({graph.aspect('A5').name}) has {len(causes)} transitive causes")

# And the blast radius of insecure interfaces (A25).
consequences = sorted(descendants(graph, "A25"), key=lambda a: int(a[1:]))
print(f"A25 reaches {len(consequences)} aspects, ending in "
      + ", ".join(a for a in consequences if not descendants(graph, a)))

# How the aspects spread over the five categories.
for category, row in category_stats(graph).items():
    print(f"  {category.value:<15} {row['count']:>2} aspects  {row['percentage']:>6.2f}%")

# DOT export: states are ellipses, vulnerabilities boxes, colors by category.
path = "/tmp/bsag-graph.dot"
with open(path, "w") as handle:
    handle.write(export_dot(graph, show_origin=True))
print(f"wrote {path}; render with: dot -Tsvg {path} -o graph.svg")
