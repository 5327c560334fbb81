"""Source-to-source transforms: interventions and negative-head elimination.

An intervention surgically disables the causal mechanisms that determine an
atom, optionally substituting a bare fact; it can also be internalized as an
ordinary negative-head law guarded by a fresh exogenous trigger, so the same
theory serves both the intervened and the untouched regime.  The
``tau_not`` transform compiles negative head literals away entirely, into
fresh cause/block predicates plus one bridging law per affected predicate.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .syntax import (And, Atom, CPLaw, EffectLiteral, HeadDisjunct, Not,
                     Theory, TRUE, Var, check_theory, endogenous_signature,
                     substitute_atom, substitute_formula)


class TransformError(Exception):
    pass


class SharedHeadError(TransformError):
    """The intervened atom shares a multi-outcome head with another atom."""


class NameClashError(TransformError):
    pass


InterventionLiteral = EffectLiteral  # ground, endogenous; ~A forces false, A forces true


def _match_head_atom(head_atom: Atom, target: Atom, law: CPLaw, domains) -> bool:
    """Can ``head_atom`` instantiate to ``target`` under the law's binders?"""
    if head_atom.predicate != target.predicate or len(head_atom.args) != len(target.args):
        return False
    var_domains = dict(law.vars)
    binding: dict = {}
    for pattern, value in zip(head_atom.args, target.args):
        if isinstance(pattern, Var):
            if pattern.name in binding and binding[pattern.name] != value:
                return False
            if value not in domains.get(var_domains[pattern.name], ()):
                return False
            binding[pattern.name] = value
        elif pattern != value:
            return False
    return True


def _law_instances(law: CPLaw, domains) -> list[CPLaw]:
    """All binder instantiations of ``law`` (body quantifiers left intact)."""
    columns = [domains[d] for _, d in law.vars]
    names = [v for v, _ in law.vars]
    out = []
    for assignment in itertools.product(*columns):
        env = dict(zip(names, assignment))
        head = tuple(HeadDisjunct(EffectLiteral(d.literal.negated,
                                                substitute_atom(d.literal.atom, env)),
                                  d.prob)
                     for d in law.head)
        out.append(CPLaw((), head, substitute_formula(law.body, env)))
    return out


def intervene(t: Theory, literal: InterventionLiteral) -> Theory:
    """Remove every causal mechanism for the literal's atom; for a positive
    intervention, add the bare fact afterwards.

    Removal is instance-exact: a law whose binders cover other instances as
    well is first instantiated, and only the instances whose head mentions the
    target atom are dropped.  Raises `SharedHeadError` when the atom shares a
    multi-outcome head with another atom, where removal has no clear meaning.
    """
    target = literal.atom
    if not target.is_ground():
        raise TransformError(f"intervention atom {target} is not ground")
    if target.predicate in t.exogenous:
        raise TransformError(f"cannot intervene on exogenous atom {target}")

    new_laws: list[CPLaw] = []
    for law in t.laws:
        hits = [d for d in law.head
                if _match_head_atom(d.literal.atom, target, law, t.domains)]
        if not hits:
            new_laws.append(law)
            continue
        if len(law.head) > 1:
            raise SharedHeadError(
                f"atom {target} shares a multi-outcome head with other atoms; "
                "removing the whole law would also silence them")
        if not law.vars:
            continue  # ground law determining the target: drop it
        for inst in _law_instances(law, t.domains):
            if inst.head[0].literal.atom != target:
                new_laws.append(inst)

    if not literal.negated:
        fact = CPLaw((), (HeadDisjunct(EffectLiteral(False, target), Fraction(1)),), TRUE)
        new_laws.append(fact)
    result = Theory(dict(t.domains), dict(t.exogenous), tuple(new_laws))
    check_theory(result)
    return result


def internalize(t: Theory, atom: Atom, trigger: str) -> Theory:
    """Add ``~atom <- trigger`` with ``trigger`` a fresh exogenous switch.

    With the trigger set, the theory behaves exactly like the negative
    intervention on ``atom``; with it unset, like the original theory.
    """
    if not atom.is_ground():
        raise TransformError(f"atom {atom} is not ground")
    if atom.predicate in t.exogenous:
        raise TransformError(f"{atom} is exogenous, nothing to internalize")
    vocabulary = set(t.exogenous) | set(endogenous_signature(t))
    if trigger in vocabulary:
        raise NameClashError(f"trigger predicate {trigger!r} already in the vocabulary")
    law = CPLaw((), (HeadDisjunct(EffectLiteral(True, atom), Fraction(1)),),
                Atom(trigger))
    result = Theory(dict(t.domains), {**t.exogenous, trigger: 0}, t.laws + (law,))
    check_theory(result)
    return result


def negative_head_predicates(t: Theory) -> frozenset:
    return frozenset(d.literal.atom.predicate
                     for law in t.laws for d in law.head if d.literal.negated)


_POS_PREFIX = "c_pos__"
_NEG_PREFIX = "c_neg__"
_UNIVERSE_DOMAIN = "c_dom__all"


def tau_not(t: Theory) -> tuple[Theory, dict]:
    """Eliminate negative head literals.

    For every predicate ``P`` with a negative head occurrence, head literals
    ``P(a)`` / ``~P(a)`` become fresh positive literals ``c_pos__P(a)`` /
    ``c_neg__P(a)``, and one bridging law

        P(x) <- c_pos__P(x), ~c_neg__P(x)

    reconstructs ``P``.  Bridging variables range over the union of all
    declared constants; the extra instances are inert because their cause
    atom can never become true.  Returns the transformed theory and the
    predicate map ``P -> (c_pos__P, c_neg__P)``.
    """
    affected = negative_head_predicates(t)
    if not affected:
        return t, {}

    sig = endogenous_signature(t)
    vocabulary = set(t.exogenous) | set(sig)
    taumap: dict = {}
    for pred in sorted(affected):
        pos, neg = _POS_PREFIX + pred, _NEG_PREFIX + pred
        for fresh in (pos, neg):
            if fresh in vocabulary:
                raise NameClashError(f"fresh predicate {fresh!r} already in the vocabulary")
            vocabulary.add(fresh)
        taumap[pred] = (pos, neg)

    domains = dict(t.domains)
    needs_universe = any(sig[p] > 0 for p in affected)
    if needs_universe:
        if _UNIVERSE_DOMAIN in domains:
            raise NameClashError(f"domain {_UNIVERSE_DOMAIN!r} already declared")
        domains[_UNIVERSE_DOMAIN] = tuple(
            sorted(set(itertools.chain.from_iterable(t.domains.values()))))

    def rename(lit: EffectLiteral) -> EffectLiteral:
        if lit.atom.predicate not in taumap:
            return lit
        pos, neg = taumap[lit.atom.predicate]
        return EffectLiteral(False, Atom(neg if lit.negated else pos, lit.atom.args))

    laws = [CPLaw(law.vars,
                  tuple(HeadDisjunct(rename(d.literal), d.prob) for d in law.head),
                  law.body)
            for law in t.laws]
    for pred in sorted(affected):
        pos, neg = taumap[pred]
        arity = sig[pred]
        binders = tuple((f"x{i + 1}", _UNIVERSE_DOMAIN) for i in range(arity))
        args = tuple(Var(v) for v, _ in binders)
        bridge = CPLaw(
            binders,
            (HeadDisjunct(EffectLiteral(False, Atom(pred, args)), Fraction(1)),),
            And((Atom(pos, args), Not(Atom(neg, args)))))
        laws.append(bridge)

    result = Theory(domains, dict(t.exogenous), tuple(laws))
    check_theory(result)
    return result, taumap
