from fractions import Fraction

import pytest

from cplogic import theories
from cplogic.engine import (Distribution, ExecState, ExogenousError,
                            SoundnessError, UMode, applicable, apply_disjunct,
                            build_execution_model, compute_U, distribution,
                            query)
from cplogic.ground import ground, normalize
from cplogic.oracle import well_founded_model
from cplogic.syntax import parse_formula, parse_theory
from cplogic.threeval import UnboundAtomError

from helpers import atom, atoms

SUZY = theories.get("suzy_billy")
SUZY_G = ground(SUZY)
NOTHING = frozenset()


def state(true=(), negated=(), fired=()):
    return ExecState(frozenset(true), frozenset(negated), frozenset(fired))


# ---------------------------------------------------------------------------
# compute_U
# ---------------------------------------------------------------------------

def test_u_at_root():
    u = compute_U(SUZY_G, NOTHING, state())
    assert u.true_set == frozenset()
    assert u.unknown_set == atoms("Throws(suzy)", "Throws(billy)", "Broken")


def test_u_after_suzy_declines():
    u = compute_U(SUZY_G, NOTHING, state(fired=[0]))
    assert u.true_set == frozenset()
    assert u.unknown_set == atoms("Throws(billy)", "Broken")
    assert u.false_set == atoms("Throws(suzy)")


def test_u_after_billy_throws():
    u = compute_U(SUZY_G, NOTHING, state(true=atoms("Throws(billy)"), fired=[0, 1]))
    assert u.true_set == atoms("Throws(billy)")
    assert u.unknown_set == atoms("Broken")


def test_u_at_rightmost_leaf():
    u = compute_U(SUZY_G, NOTHING,
                  state(true=atoms("Throws(billy)"), fired=[0, 1, 3]))
    assert u.true_set == atoms("Throws(billy)")
    assert u.unknown_set == frozenset()
    assert u.false_set == atoms("Throws(suzy)", "Broken")


def test_u_pins_retracted_atoms_false():
    g = ground(theories.get("locked_gears"))
    X = atoms("Crank1", "Locked(g1)")
    st = state(negated=atoms("Turns(gear1)"), fired=[7])
    for mode in UMode:
        u = compute_U(g, X, st, mode)
        assert atom("Turns(gear1)") in u.false_set


def test_u_extended_downgrades_threatened_atoms():
    g = ground(theories.get("locked_gears"))
    X = atoms("Crank1", "Locked(g1)")
    st = state(true=atoms("Turns(gear1)"), fired=[0])
    assert atom("Turns(gear1)") in compute_U(g, X, st, UMode.EXTENDED).unknown_set
    assert atom("Turns(gear1)") in compute_U(g, X, st, UMode.LITERAL).true_set


# ---------------------------------------------------------------------------
# applicable / apply_disjunct
# ---------------------------------------------------------------------------

def test_vacuous_laws_applicable_at_root():
    u = compute_U(SUZY_G, NOTHING, state())
    assert applicable(SUZY_G, NOTHING, state(), u) == (0, 1)


def test_body_negation_waits_for_certainty():
    # extra readers of ~Broken and ~Throws(suzy) added to the bottle story
    t = parse_theory(theories.SUZY_BILLY + "C <- ~Broken.\nD <- ~Throws(suzy).\n")
    g = ground(t)
    st = state(fired=[0])  # Suzy's event happened without a throw
    u = compute_U(g, NOTHING, st)
    app = applicable(g, NOTHING, st, u)
    assert 5 in app   # ~Throws(suzy) is settled
    assert 4 not in app  # ~Broken is still undecided


def test_apply_disjunct_negative_retracts_and_pins():
    law = normalize(parse_theory("~A <- B.").laws[0], index=0)
    st = apply_disjunct(state(true=atoms("A")), law, law.outcomes[0][0])
    assert st.true_atoms == frozenset()
    assert st.negated == atoms("A")
    assert st.fired == {0}


def test_apply_disjunct_positive_respects_pin():
    law = normalize(parse_theory("A <- B.").laws[0], index=3)
    st = apply_disjunct(state(negated=atoms("A")), law, law.outcomes[0][0])
    assert st.true_atoms == frozenset()
    assert st.negated == atoms("A")


def test_apply_disjunct_noop_only_marks_fired():
    law = normalize(parse_theory("(A:1/2) <- B.").laws[0], index=2)
    st0 = state(true=atoms("B"))
    st = apply_disjunct(st0, law, None)
    assert (st.true_atoms, st.negated) == (st0.true_atoms, st0.negated)
    assert st.fired == {2}


# ---------------------------------------------------------------------------
# build_execution_model / distribution
# ---------------------------------------------------------------------------

def test_suzy_tree_has_four_leaf_worlds():
    root = build_execution_model(SUZY_G, NOTHING)
    leaves = {node.state.true_atoms for node in root.walk() if node.is_leaf}
    assert len(leaves) == 4


def test_negation_loop_is_stuck_at_root():
    g = ground(theories.get("negation_loop"))
    with pytest.raises(SoundnessError) as info:
        build_execution_model(g, NOTHING)
    assert info.value.state == ExecState.initial()
    assert info.value.blocked == (0, 1)


def test_positive_program_single_branch():
    g = ground(parse_theory("A. B <- A."))
    root = build_execution_model(g, NOTHING)
    assert all(len(node.children) in (0, 1) for node in root.walk())
    (leaf,) = [n for n in root.walk() if n.is_leaf]
    assert leaf.state.true_atoms == atoms("A", "B")


SUZY_EXPECTED = Distribution({
    atoms("Throws(suzy)", "Throws(billy)", "Broken"): Fraction(23, 50),
    atoms("Throws(suzy)", "Throws(billy)"): Fraction(1, 25),
    atoms("Throws(billy)", "Broken"): Fraction(3, 10),
    atoms("Throws(billy)"): Fraction(1, 5),
})


def test_suzy_distribution_exact():
    assert distribution(SUZY_G, NOTHING) == SUZY_EXPECTED


def test_empty_theory_distribution():
    assert distribution(ground(parse_theory("")), NOTHING) == {frozenset(): 1}


def test_gear_chain_probability():
    g = ground(theories.get("gears"))
    p = query(g, atoms("Crank1"), parse_formula("Turns(gear3)", theories.get("gears")))
    assert p == Fraction(81, 100)


def test_distribution_total_is_one_exactly():
    for name in ("suzy_billy", "gears", "superhero", "locked_gears"):
        b = theories.BUNDLED[name]
        g = ground(b.theory())
        for X in b.exo_cases:
            assert distribution(g, X).total() == 1


# ---------------------------------------------------------------------------
# query
# ---------------------------------------------------------------------------

def test_query_broken():
    assert query(SUZY_G, NOTHING, parse_formula("Broken", SUZY)) == Fraction(19, 25)


def test_query_true_is_total_mass():
    assert query(SUZY_G, NOTHING, parse_formula("true", SUZY)) == 1


def test_query_superhero():
    t = theories.get("superhero")
    g = ground(t)
    X = atoms("Shoot(s)", "Superhero(s)")
    assert query(g, X, parse_formula("Wound(s)", t)) == 0
    assert query(g, X, parse_formula("HoleInWall", t)) == Fraction(3, 10)


def test_query_can_read_exogenous_atoms():
    g = ground(theories.get("gears"))
    t = theories.get("gears")
    assert query(g, atoms("Crank1"), parse_formula("Crank1", t)) == 1
    assert query(g, atoms("Crank1"), parse_formula("Crank2", t)) == 0


def test_query_unknown_atom_raises():
    with pytest.raises(UnboundAtomError):
        query(SUZY_G, NOTHING, parse_formula("Zilch"))


def test_exogenous_mismatch_rejected():
    with pytest.raises(ExogenousError):
        distribution(SUZY_G, atoms("Broken"))


# ---------------------------------------------------------------------------
# Engine invariants
# ---------------------------------------------------------------------------

def _tree_nodes(name, X, mode=UMode.EXTENDED):
    g = ground(theories.get(name))
    return g, build_execution_model(g, X, mode)


def test_u_approximates_every_descendant():
    root = build_execution_model(SUZY_G, NOTHING)

    def walk(node):
        for descendant in node.walk():
            assert node.u.approximates(descendant.state.true_atoms)
        for edge in node.children:
            walk(edge.child)

    walk(root)


def test_overestimate_false_is_final():
    # no negative heads: an atom at f under U(s) never shows up in a leaf below s
    for name in ("suzy_billy", "gears", "blood_pressure", "repeat_class"):
        b = theories.BUNDLED[name]
        for X in b.exo_cases:
            g, root = _tree_nodes(name, X)
            def walk(node):
                for leaf_edges, leaf in node.leaf_paths():
                    assert not (node.u.false_set & leaf.state.true_atoms)
                for edge in node.children:
                    walk(edge.child)
            walk(root)


def test_final_state_law_extended_mode():
    # a leaf atom is true iff a positive outcome fired and no negative one did
    for name in ("locked_gears", "superhero", "penguins", "probabilistic_birds"):
        b = theories.BUNDLED[name]
        for X in b.exo_cases:
            g, root = _tree_nodes(name, X)
            for edges, leaf in root.leaf_paths():
                fired = [e.outcome for e in edges if e.outcome is not None]
                caused = {o.atom for o in fired if not o.negated}
                blocked = {o.atom for o in fired if o.negated}
                assert leaf.state.true_atoms == frozenset(caused - blocked)


def test_policy_choice_does_not_change_distribution():
    def highest(app, state):
        return app[-1]
    for name in ("suzy_billy", "gears", "locked_gears", "superhero"):
        b = theories.BUNDLED[name]
        g = ground(b.theory())
        for X in b.exo_cases:
            assert distribution(g, X) == distribution(g, X, policy=highest)


def test_literal_mode_locked_gears_is_order_dependent():
    g = ground(theories.get("locked_gears"))
    X = atoms("Crank1", "Locked(g1)")

    def lock_first(app, state):
        return 7 if 7 in app else app[0]

    default = distribution(g, X, UMode.LITERAL)
    locked = distribution(g, X, UMode.LITERAL, policy=lock_first)
    assert default != locked
    # whereas extended mode agrees with itself under both policies
    assert distribution(g, X) == distribution(g, X, policy=lock_first)


def test_deterministic_with_negation_matches_wfm():
    sources = [
        "A <- ~B. B <- C.",
        "A <- ~B. C <- A.",
        "A. B <- ~A. C <- ~B.",
        theories.REPEAT_CLASS,
    ]
    for src in sources:
        t = parse_theory(src)
        g = ground(t)
        for X in ({a for a in g.exogenous_atoms}, frozenset()):
            wfm = well_founded_model(g, frozenset(X))
            assert not wfm.unknown_set
            d = distribution(g, frozenset(X))
            (leaf,) = d
            assert leaf == wfm.true_set


def test_state_invariant_disjoint():
    with pytest.raises(ValueError):
        ExecState(atoms("A"), atoms("A"), frozenset())


def test_u_only_moves_values_toward_unknown():
    # relative to the start point (t on I, f elsewhere), the fixpoint may
    # only blur values to u, never flip them outright
    for name in ("suzy_billy", "locked_gears", "superhero"):
        b = theories.BUNDLED[name]
        g = ground(b.theory())
        for X in b.exo_cases:
            for node in build_execution_model(g, X).walk():
                live = node.state.true_atoms
                assert node.u.true_set <= live
                assert not (node.u.false_set & live)
                assert node.state.negated <= node.u.false_set


def test_u_literal_mode_keeps_current_atoms_true():
    g = ground(theories.get("locked_gears"))
    X = atoms("Crank1", "Locked(g1)")
    for node in build_execution_model(g, X, UMode.LITERAL).walk():
        assert node.state.true_atoms <= node.u.true_set
        assert node.state.negated <= node.u.false_set


@pytest.mark.parametrize("seed", range(40))
def test_modes_agree_without_negative_heads(seed):
    from cplogic.oracle import random_stratified_theory
    t = random_stratified_theory(seed, atoms=5, laws=5, negative_heads=False)
    g = ground(t)
    assert distribution(g, frozenset(), UMode.LITERAL) \
        == distribution(g, frozenset(), UMode.EXTENDED)
