"""Shared shorthand for the test suite."""

from cplogic.syntax import Atom


def atom(spec: str) -> Atom:
    """Build an atom from "P" or "P(a,b)" notation."""
    if "(" not in spec:
        return Atom(spec)
    pred, rest = spec.split("(", 1)
    return Atom(pred, tuple(rest.rstrip(")").split(",")))


def atoms(*specs: str) -> frozenset:
    return frozenset(atom(s) for s in specs)


def world_strs(world) -> list:
    return sorted(str(a) for a in world)
