"""Probability-tree execution models and exact inference.

A theory executes by repeatedly firing laws whose bodies hold.  Firing is
gated twice: the body must be true in the current world, and it must also be
definitely true under a three-valued overestimate of everything that could
still be caused further down the tree.  The second gate makes a body literal
``~A`` mean "A will never deviate from false", not merely "A is false right
now".  When a body holds in the current world but the overestimate cannot
decide it, the process is stuck and the theory has no semantics.

All probabilities are exact rationals; distributions sum to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .ground import GroundTheory, NormalizedLaw, expand_formula, normalize
from .syntax import EffectLiteral, Formula, formula_atoms
from .threeval import (F, T, ThreeValuedInterp, U, UnboundAtomError, holds,
                       kleene_eval)


class UMode(Enum):
    """How the overestimate treats atoms that a live negative head could retract.

    LITERAL keeps every currently-true atom at t.  EXTENDED downgrades a true
    atom to u while an unfired law with ``~A`` in its head is still live,
    which restores firing-order invariance for theories with negative heads.
    """

    LITERAL = "literal"
    EXTENDED = "extended"


class ExogenousError(Exception):
    """X sets atoms outside the exogenous universe."""


class SoundnessError(Exception):
    """Execution got stuck: a satisfied body stayed undecided under U."""

    def __init__(self, state: "ExecState", blocked: tuple):
        self.state = state
        self.blocked = blocked
        super().__init__(
            f"theory is unsound: stuck at node {state.describe()} "
            f"with satisfied but undecidable laws {list(blocked)}")


@dataclass(frozen=True)
class ExecState:
    """One node's world: current true atoms, retracted atoms, fired laws."""

    true_atoms: frozenset  # I: endogenous atoms currently true
    negated: frozenset  # N: atoms hit by a negative effect literal
    fired: frozenset  # indices of laws fired on the path so far

    def __post_init__(self):
        if self.true_atoms & self.negated:
            raise ValueError("an atom cannot be both true and retracted")

    @staticmethod
    def initial() -> "ExecState":
        return ExecState(frozenset(), frozenset(), frozenset())

    def describe(self) -> str:
        def fmt(atoms):
            return "{" + ", ".join(sorted(str(a) for a in atoms)) + "}"
        return (f"I={fmt(self.true_atoms)} N={fmt(self.negated)} "
                f"fired={sorted(self.fired)}")


@dataclass(frozen=True)
class ExecEdge:
    prob: Fraction
    outcome: EffectLiteral | None  # None is the no-op outcome
    law_index: int
    child: "ExecNode"


@dataclass(frozen=True)
class ExecNode:
    state: ExecState
    u: ThreeValuedInterp
    children: tuple[ExecEdge, ...]

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for edge in self.children:
            yield from edge.child.walk()

    def leaf_paths(self, _prefix=()):
        """Yield (edges-from-root, leaf node) pairs."""
        if self.is_leaf:
            yield _prefix, self
            return
        for edge in self.children:
            yield from edge.child.leaf_paths(_prefix + (edge,))


def lowest_index_policy(applicable_laws, state):
    return applicable_laws[0]


def _check_exogenous(g: GroundTheory, X: frozenset):
    extra = X - g.exogenous_atoms
    if extra:
        names = ", ".join(sorted(str(a) for a in extra))
        raise ExogenousError(f"not in the exogenous universe: {names}")


def compute_U(g: GroundTheory, X: frozenset, state: ExecState,
              mode: UMode = UMode.EXTENDED) -> ThreeValuedInterp:
    """Fixpoint overestimate of everything still causable below ``state``.

    Starts from the current world (t on I, f elsewhere) and repeatedly
    downgrades to u: an atom may still be caused by an unfired law whose body
    is not yet ruled out, and (extended mode) a true atom may still be
    retracted by an unfired law with a matching negative head literal.
    Retracted atoms (N) stay pinned at f.
    """
    value = {a: (T if a in state.true_atoms else F) for a in g.endogenous_atoms}
    unfired = [i for i in range(len(g.laws)) if i not in state.fired]

    def snapshot():
        return ThreeValuedInterp(
            g.endogenous_atoms,
            frozenset(a for a, v in value.items() if v is T),
            frozenset(a for a, v in value.items() if v is U))

    changed = True
    while changed:
        changed = False
        nu = snapshot()
        for i in unfired:
            law = g.laws[i]
            if kleene_eval(law.body, nu, X, g.exogenous_atoms) is F:
                continue
            for disj in law.head:
                a = disj.literal.atom
                if a in state.negated:
                    continue
                if not disj.literal.negated:
                    if value[a] is F:
                        value[a] = U
                        changed = True
                elif mode is UMode.EXTENDED:
                    if value[a] is T:
                        value[a] = U
                        changed = True
    return snapshot()


def satisfied_unfired(g: GroundTheory, X: frozenset, state: ExecState) -> tuple:
    """Unfired laws whose bodies hold in the current two-valued world."""
    world = state.true_atoms | X
    return tuple(i for i in range(len(g.laws))
                 if i not in state.fired and holds(g.laws[i].body, world))


def applicable(g: GroundTheory, X: frozenset, state: ExecState,
               u: ThreeValuedInterp) -> tuple:
    """Laws allowed to fire: body true now and definitely true under ``u``."""
    return tuple(i for i in satisfied_unfired(g, X, state)
                 if kleene_eval(g.laws[i].body, u, X, g.exogenous_atoms) is T)


def apply_disjunct(state: ExecState, law: NormalizedLaw,
                   outcome: EffectLiteral | None) -> ExecState:
    """Successor state after ``law`` fires with the given outcome.

    A negative effect literal retracts the atom and pins it; a positive one
    makes the atom true unless it was pinned; the no-op outcome only marks
    the law as fired.
    """
    if law.index is None:
        raise ValueError("normalized law carries no index")
    fired = state.fired | {law.index}
    if outcome is None:
        return ExecState(state.true_atoms, state.negated, fired)
    a = outcome.atom
    if outcome.negated:
        return ExecState(state.true_atoms - {a}, state.negated | {a}, fired)
    if a in state.negated:
        return ExecState(state.true_atoms, state.negated, fired)
    return ExecState(state.true_atoms | {a}, state.negated, fired)


def _step(g, X, state, mode):
    """Classify a state: (applicable tuple, satisfied tuple, U)."""
    u = compute_U(g, X, state, mode)
    sat = satisfied_unfired(g, X, state)
    app = tuple(i for i in sat
                if kleene_eval(g.laws[i].body, u, X, g.exogenous_atoms) is T)
    return app, sat, u


def build_execution_model(g: GroundTheory, X: frozenset,
                          mode: UMode = UMode.EXTENDED,
                          policy=lowest_index_policy) -> ExecNode:
    """Construct the canonical execution tree under firing policy ``policy``.

    At each node the policy picks one applicable law; the node gets one child
    per outcome of the normalized head.  A node with no satisfied unfired law
    is a leaf.  Raises `SoundnessError` when some body holds but every such
    law is undecidable under U.
    """
    _check_exogenous(g, X)
    norm = [normalize(law, i) for i, law in enumerate(g.laws)]

    def build(state: ExecState) -> ExecNode:
        app, sat, u = _step(g, X, state, mode)
        if not sat:
            return ExecNode(state, u, ())
        if not app:
            raise SoundnessError(state, sat)
        chosen = norm[policy(app, state)]
        edges = tuple(
            ExecEdge(prob, outcome, chosen.index,
                     build(apply_disjunct(state, chosen, outcome)))
            for outcome, prob in chosen.outcomes)
        return ExecNode(state, u, edges)

    return build(ExecState.initial())


class Distribution(dict):
    """Exact distribution over endogenous worlds (frozenset[Atom] -> Fraction)."""

    def total(self) -> Fraction:
        return sum(self.values(), Fraction(0))

    def sorted_items(self):
        return sorted(self.items(),
                      key=lambda kv: tuple(sorted(str(a) for a in kv[0])))

    def project(self, predicates) -> "Distribution":
        """Marginalize onto worlds restricted to the given predicate names."""
        out: dict = {}
        for world, p in self.items():
            small = frozenset(a for a in world if a.predicate in predicates)
            out[small] = out.get(small, Fraction(0)) + p
        return Distribution(out)

    def prob(self, phi: Formula, X: frozenset = frozenset()) -> Fraction:
        return sum((p for world, p in self.items() if holds(phi, world | X)),
                   Fraction(0))


def distribution(g: GroundTheory, X: frozenset,
                 mode: UMode = UMode.EXTENDED,
                 policy=lowest_index_policy) -> Distribution:
    """Exact leaf distribution of the execution model under ``policy``.

    Memoized on (I, N, fired): sub-distributions depend only on that triple,
    so sharing identical subtrees is safe and keeps the walk polynomial for
    the common diamond-shaped state spaces.
    """
    _check_exogenous(g, X)
    norm = [normalize(law, i) for i, law in enumerate(g.laws)]
    memo: dict = {}

    def explore(state: ExecState) -> dict:
        cached = memo.get(state)
        if cached is not None:
            return cached
        app, sat, _u = _step(g, X, state, mode)
        if not sat:
            result = {state.true_atoms: Fraction(1)}
        elif not app:
            raise SoundnessError(state, sat)
        else:
            chosen = norm[policy(app, state)]
            result = {}
            for outcome, prob in chosen.outcomes:
                sub = explore(apply_disjunct(state, chosen, outcome))
                for world, p in sub.items():
                    result[world] = result.get(world, Fraction(0)) + prob * p
        memo[state] = result
        return result

    dist = Distribution(explore(ExecState.initial()))
    assert dist.total() == 1
    return dist


def query(g: GroundTheory, X: frozenset, phi: Formula,
          mode: UMode = UMode.EXTENDED) -> Fraction:
    """Probability mass of the worlds satisfying ground-expanded ``phi``."""
    phi = expand_formula(phi, {}, g.domains)
    for atom in formula_atoms(phi):
        if atom not in g.endogenous_atoms and atom not in g.exogenous_atoms:
            raise UnboundAtomError(f"unknown atom {atom}")
    return distribution(g, X, mode).prob(phi, X)
