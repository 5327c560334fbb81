"""Bundled example theories used by the test suite, the demos, and the docs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .syntax import Atom, CPLaw, HeadDisjunct, Theory, parse_theory

SUZY_BILLY = """\
% Two rock throwers aiming at one bottle.  Suzy throws half the time and
% breaks it with probability 0.8; Billy always throws but only hits 60%.
domain person = {suzy, billy}.

(Throws(suzy):0.5).
Throws(billy).
(Broken:0.8) <- Throws(suzy).
(Broken:0.6) <- Throws(billy).
"""

GEARS = """\
% Three interlocking gear wheels, each with its own crank.  Motion carries
% over to a neighbouring wheel 90% of the time (the teeth are damaged).
domain gear = {gear1, gear2, gear3}.
exogenous Crank1/0.
exogenous Crank2/0.
exogenous Crank3/0.

Turns(gear1) <- Crank1.
Turns(gear2) <- Crank2.
Turns(gear3) <- Crank3.
(Turns(gear1):0.9) <- Turns(gear2).
(Turns(gear2):0.9) <- Turns(gear1).
(Turns(gear2):0.9) <- Turns(gear3).
(Turns(gear3):0.9) <- Turns(gear2).
"""

LOCKED_GEARS = """\
% The gear train again, plus a lock that keeps the first wheel from turning
% no matter what drives it.
domain gear = {gear1, gear2, gear3}.
domain lock = {g1}.
exogenous Crank1/0.
exogenous Crank2/0.
exogenous Crank3/0.
exogenous Locked/1.

Turns(gear1) <- Crank1.
Turns(gear2) <- Crank2.
Turns(gear3) <- Crank3.
(Turns(gear1):0.9) <- Turns(gear2).
(Turns(gear2):0.9) <- Turns(gear1).
(Turns(gear2):0.9) <- Turns(gear3).
(Turns(gear3):0.9) <- Turns(gear2).
~Turns(gear1) <- Locked(g1).
"""

BLOOD_PRESSURE = """\
% A lifestyle and a genetic route to high blood pressure, which in turn
% may cause fatigue.
exogenous BadLifeStyle/0.
exogenous Genetics/0.

(HighBloodPressure:0.6) <- BadLifeStyle.
(HighBloodPressure:0.9) <- Genetics.
(Fatigue:0.3) <- HighBloodPressure.
"""

SUPERHERO = """\
% A gunshot either wounds the target or leaves a hole in the wall.
% Superheroes cannot be wounded, but the shot still happens.
domain person = {s}.
exogenous Shoot/1.
exogenous Superhero/1.

!x in person: (Wound(x):0.7); (HoleInWall:0.3) <- Shoot(x).
!x in person: ~Wound(x) <- Superhero(x).
"""

PENGUINS = """\
% Being a bird causes the ability to fly; being a penguin blocks it.
domain bird = {tweety, pingu}.
exogenous Bird/1.
exogenous Penguin/1.

!x in bird: Flies(x) <- Bird(x).
!x in bird: ~Flies(x) <- Penguin(x).
"""

PROBABILISTIC_BIRDS = """\
% As above, but growing up teaches only 95% of birds to fly.
domain bird = {tweety, pingu}.
exogenous Bird/1.
exogenous Penguin/1.

!x in bird: (Flies(x):0.95) <- Bird(x).
!x in bird: ~Flies(x) <- Penguin(x).
"""

REPEAT_CLASS = """\
% Students fail when neither smart nor hardworking, and repeat a failed
% class when it is required.
exogenous Smart/0.
exogenous Effort/0.
exogenous Required/0.

Fail <- ~Smart, ~Effort.
Repeat <- Fail, Required.
"""

NEGATION_LOOP = """\
% Two laws waiting on each other's failure: stuck at the root, no semantics.
A <- ~B.
B <- ~A.
"""


def _atoms(*specs: str) -> frozenset:
    out = []
    for spec in specs:
        if "(" in spec:
            pred, rest = spec.split("(", 1)
            out.append(Atom(pred, tuple(rest.rstrip(")").split(","))))
        else:
            out.append(Atom(spec))
    return frozenset(out)


@dataclass(frozen=True)
class BundledTheory:
    name: str
    source: str
    negative_heads: bool
    sound: bool
    exo_cases: tuple  # representative exogenous worlds (frozenset[Atom], ...)

    def theory(self) -> Theory:
        return parse_theory(self.source)


BUNDLED = {
    b.name: b for b in (
        BundledTheory("suzy_billy", SUZY_BILLY, False, True,
                      (_atoms(),)),
        BundledTheory("gears", GEARS, False, True,
                      (_atoms(), _atoms("Crank1"), _atoms("Crank1", "Crank3"))),
        BundledTheory("locked_gears", LOCKED_GEARS, True, True,
                      (_atoms(), _atoms("Crank1"),
                       _atoms("Crank1", "Locked(g1)"),
                       _atoms("Crank1", "Crank2", "Locked(g1)"))),
        BundledTheory("blood_pressure", BLOOD_PRESSURE, False, True,
                      (_atoms(), _atoms("BadLifeStyle"), _atoms("Genetics"),
                       _atoms("BadLifeStyle", "Genetics"))),
        BundledTheory("superhero", SUPERHERO, True, True,
                      (_atoms(), _atoms("Shoot(s)"),
                       _atoms("Shoot(s)", "Superhero(s)"))),
        BundledTheory("penguins", PENGUINS, True, True,
                      (_atoms("Bird(tweety)"),
                       _atoms("Bird(tweety)", "Penguin(tweety)"),
                       _atoms("Bird(tweety)", "Bird(pingu)", "Penguin(pingu)"))),
        BundledTheory("probabilistic_birds", PROBABILISTIC_BIRDS, True, True,
                      (_atoms("Bird(tweety)"),
                       _atoms("Bird(tweety)", "Penguin(tweety)"),
                       _atoms("Bird(tweety)", "Bird(pingu)", "Penguin(pingu)"))),
        BundledTheory("repeat_class", REPEAT_CLASS, False, True,
                      (_atoms(), _atoms("Required"), _atoms("Smart", "Required"))),
        BundledTheory("negation_loop", NEGATION_LOOP, False, False,
                      (_atoms(),)),
    )
}


def get(name: str) -> Theory:
    return BUNDLED[name].theory()


def deterministic_gears() -> Theory:
    """The gear train with every transfer made certain (probabilities 1)."""
    t = get("gears")
    laws = tuple(
        CPLaw(law.vars,
              tuple(HeadDisjunct(d.literal, Fraction(1)) for d in law.head),
              law.body)
        for law in t.laws)
    return Theory(dict(t.domains), dict(t.exogenous), laws)
