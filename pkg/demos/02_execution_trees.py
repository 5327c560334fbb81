"""Watch a theory execute: the probability tree, the overestimate U, and the
exact distribution it induces.

Run:  python demos/02_execution_trees.py
"""

from cplogic import build_execution_model, distribution, ground, query
from cplogic import parse_formula
from cplogic.theories import get

theory = get("suzy_billy")
g = ground(theory)
X = frozenset()

root = build_execution_model(g, X)


def show(node, depth=0, edge_label="start"):
    pad = "  " * depth
    world = ", ".join(sorted(str(a) for a in node.state.true_atoms)) or "(nothing)"
    print(f"{pad}[{edge_label}] world: {world}")
    for edge in node.children:
        label = "no effect" if edge.outcome is None else str(edge.outcome)
        show(edge.child, depth + 1, f"law {edge.law_index}: {label} @ {edge.prob}")


print("execution tree (canonical lowest-index policy):\n")
show(root)

print("\nthe overestimate U along the rightmost branch")
print("(what might still be caused below each node):\n")
node = root
while True:
    print("  ", node.u)
    if node.is_leaf:
        break
    node = node.children[-1].child

print("\nleaf distribution (exact rationals):\n")
for world, p in distribution(g, X).sorted_items():
    atoms = ", ".join(sorted(str(a) for a in world)) or "(nothing)"
    print(f"  {p!s:>6}  {atoms}")

print("\nP(Broken) =", query(g, X, parse_formula("Broken", theory)))
