"""Interventions: cutting causal mechanisms out, and internalizing the cut
as an ordinary law behind an exogenous switch.

Run:  python demos/03_interventions.py
"""

from cplogic import (distribution, ground, intervene, internalize,
                     parse_formula, parse_literal, print_theory, query)
from cplogic.syntax import Atom
from cplogic.theories import get

bp = get("blood_pressure")
g = ground(bp)


def fatigue(theory, X):
    return query(ground(theory), X, parse_formula("Fatigue", theory))


bad_genes = frozenset({Atom("Genetics")})
print("P(Fatigue | Genetics) =", fatigue(bp, bad_genes))

# Prescribing blood-pressure medicine is not part of the model.  Model it
# anyway: delete the mechanisms that determine HighBloodPressure.
treated = intervene(bp, parse_literal("~HighBloodPressure", bp))
print("\nafter do(~HighBloodPressure):\n")
print(print_theory(treated))
print("P(Fatigue | Genetics, do) =", fatigue(treated, bad_genes))

# The same intervention as a law of the theory itself, behind a fresh
# exogenous trigger: switch it on by setting the trigger true.
guarded = internalize(bp, Atom("HighBloodPressure"), "BPMedicine")
print("\ninternalized version:\n")
print(print_theory(guarded))

gg = ground(guarded)
on = bad_genes | {Atom("BPMedicine")}
assert distribution(gg, bad_genes) == distribution(g, bad_genes)
assert distribution(gg, on) == distribution(ground(treated), bad_genes)
print("trigger off: behaves like the original   OK")
print("trigger on:  behaves like the intervention   OK")

# Positive interventions substitute a bare fact.
repeat = get("repeat_class")
failed = intervene(repeat, parse_literal("Fail", repeat))
print("\nforcing a student to fail the class:\n")
print(print_theory(failed))
