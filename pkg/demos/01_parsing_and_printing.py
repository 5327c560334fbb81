"""Tour of the concrete syntax: parsing, exact probabilities, round-tripping.

Run:  python demos/01_parsing_and_printing.py
"""

from fractions import Fraction

from cplogic import parse_theory, print_theory, ParseError

SOURCE = """\
% Suzy and Billy may each throw a rock at a bottle.
domain person = {suzy, billy}.

(Throws(suzy):0.5).
Throws(billy).
(Broken:0.8) <- Throws(suzy).
(Broken:0.6) <- Throws(billy).
"""

theory = parse_theory(SOURCE)
print("laws parsed:", len(theory.laws))

law = theory.laws[2]
print("third law head:", law.head[0].literal, "with probability", law.head[0].prob)
assert law.head[0].prob == Fraction(4, 5)  # "0.8" never touches a float

print("\npretty-printed source:\n")
print(print_theory(theory))

assert parse_theory(print_theory(theory)) == theory
print("round-trip: parse(print(t)) == t  OK")

# Errors carry positions and the offending rule.
try:
    parse_theory("(A:0.7); (B:0.5) <- C.")
except ParseError as exc:
    print("\nrejected as expected:", exc)

# Negation is allowed on both sides of an arrow; quantifiers range over
# declared domains and bind the next unary formula.
locking = parse_theory("""\
domain gear = {gear1, gear2}.
domain lock = {g1}.
exogenous Locked/1.

(Turns(gear1):0.9) <- Turns(gear2).
~Turns(gear1) <- Locked(g1).
Jammed <- !g in gear: ~Turns(g).
""")
print("\nnegative head and a universal body both round-trip:",
      parse_theory(print_theory(locking)) == locking)
