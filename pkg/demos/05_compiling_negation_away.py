"""Compile negative head literals into plain theories and check, by brute
force, that nothing observable changed.

Run:  python demos/05_compiling_negation_away.py
"""

import itertools

from cplogic import distribution, ground, print_theory, tau_not
from cplogic.syntax import endogenous_signature
from cplogic.theories import get

penguins = get("probabilistic_birds")
compiled, taumap = tau_not(penguins)

print("original theory:\n")
print(print_theory(penguins))
print("compiled theory (no negative heads left):\n")
print(print_theory(compiled))
print("predicate map:", taumap)

# Equivalence: project the compiled theory's distribution back onto the
# original vocabulary and compare, for every exogenous world.
vocab = set(endogenous_signature(penguins))
g0, g1 = ground(penguins), ground(compiled)
exo = sorted(g0.exogenous_atoms, key=str)

checked = 0
for k in range(len(exo) + 1):
    for combo in itertools.combinations(exo, k):
        X = frozenset(combo)
        assert distribution(g1, X).project(vocab) == distribution(g0, X), X
        checked += 1
print(f"\nprojection equality checked for all {checked} exogenous worlds  OK")

example = frozenset(a for a in exo if str(a) in
                    ("Bird(tweety)", "Bird(pingu)", "Penguin(pingu)"))
print("\nwith tweety an ordinary bird and pingu a penguin:")
for world, p in distribution(g0, example).sorted_items():
    atoms = ", ".join(sorted(str(a) for a in world)) or "(nothing)"
    print(f"  {p!s:>6}  {atoms}")
