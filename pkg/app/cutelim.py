#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

from more_itertools import unique_everseen

from cyclic_proof import (
    BackEdge,
    CyclicProof,
    ProofBuilder,
    Transform,
    Transport,
    TransportError,
    check_local,
    check_progress,
    make_backedge,
    sliced,
    sort_replacements,
    unfold,
)
from formula import And, Atom, Bottom, Box, Dia, Imp, Or
from global_variables import MAX_HEIGHT, MAX_REDUCTION_STEPS
from sequent_calculus import (
    DisjFormula,
    LabelledFormula,
    MULTIPLICATIVE,
    RuleError,
    RuleInstance,
    Sequent,
    SystemId,
    degree,
    disj,
    disjuncts_of,
    entry_key,
    fresh_label,
    make_instance,
)

logger = logging.getLogger(__name__)

DIK4 = SystemId.dIK4


class EmbeddingError(ValueError):
    '''The proof cannot be moved into the disjunctive system'''


class CutReductionError(RuntimeError):
    '''No rewrite applies to the selected cut'''


@dataclass(frozen=True)
class CutInfo:
    node: str
    cut_formula: object
    degree: int


@dataclass
class Bar:
    '''Antichain of unfolding positions meeting every branch at a height'''
    height: int
    positions: FrozenSet[Tuple[int, ...]]
    sequents: Dict[Tuple[int, ...], Sequent] = field(default_factory=dict)

    def is_antichain(self):
        return not any(a != b and b[:len(a)] == a
                       for a in self.positions for b in self.positions)


@dataclass
class PushResult:
    proof: CyclicProof
    bar: Bar
    steps: int
    trace: List[dict] = field(default_factory=list)
    finished: bool = True
    trace_preserved: bool = True


@dataclass
class ReductionResult:
    proof: CyclicProof
    finished: bool
    degree: int
    trace: List[dict] = field(default_factory=list)


def cut_infos(p):
    return [CutInfo(n.id, n.step.cut_formula, degree(n.step.cut_formula))
            for n in p.cuts()]


def degree_of(p):
    '''Largest cut degree, 0 for a cut-free proof'''
    return max((info.degree for info in cut_infos(p)), default=0)


class _Emitter:
    """
    Adds derived fragments to a builder. Every helper proves one given
    sequent and returns the id of its node.
    """

    def __init__(self, builder, system=DIK4, prefix='e'):
        self.builder = builder
        self.system = system
        self.prefix = prefix
        self.count = 0

    def node(self, step, children=()):
        node_id = self.builder.reserve(f'{self.prefix}{self.count}')
        self.count += 1
        return self.builder.put(node_id, step.conclusion, step, children)

    def rule(self, rule, s, prove, **params):
        step = make_instance(rule, s, self.system, **params)
        return self.node(step, [prove(i, premiss)
                                for i, premiss in enumerate(step.premisses)])

    def cut(self, s, left, right, chi, left_id, right_id):
        step = RuleInstance('cut', s, (left, right), cut_formula=chi)
        return self.node(step, [left_id, right_id])

    def weaken(self, s, keep, then):
        '''wL away everything on the left except the multiset keep'''
        extra = Counter(s.lhs) - Counter(keep)
        entries = sorted(extra.elements(), key=entry_key)
        if not entries:
            return then(s)
        return self.rule('wL', s,
                         lambda i, t: self.weaken(t, keep, then),
                         principal=(('L', entries[0]),))

    def contract(self, s, entries, then):
        '''cL once per entry, left to right'''
        if not entries:
            return then(s)
        return self.rule('cL', s,
                         lambda i, t: self.contract(t, entries[1:], then),
                         principal=(('L', entries[0]),))

    def split_left(self, s, entry, on_part):
        '''dis-orL down to single disjuncts of a left entry'''
        if degree(entry) == 1:
            return on_part(s, entry)
        parts = disjuncts_of(entry)
        return self.rule(
            'dis-orL', s,
            lambda i, t: on_part(t, parts[0]) if i == 0
            else self.split_left(t, disj(parts[1:]), on_part),
            principal=(('L', entry),), split=1)

    def select(self, s, target, finish):
        '''dis-orR down to one disjunct of the goal'''
        goal = s.rhs[0]
        if goal == target:
            return finish(s)
        if isinstance(target, LabelledFormula) \
                and isinstance(target.formula, Atom) and target in s.lhs:
            return self.node(make_instance(
                'id', s, self.system, principal=(('L', target), ('R', goal)),
                generalized=True))
        parts = disjuncts_of(goal)
        j = parts.index(target)
        if j > 0:
            return self.rule('dis-orR', s,
                             lambda i, t: self.select(t, target, finish),
                             principal=(('R', goal),), split=j, choice=1)
        return self.rule('dis-orR', s,
                         lambda i, t: self.select(t, target, finish),
                         principal=(('R', goal),), split=1, choice=0)

    def inclusion(self, s):
        '''R, phi => psi when every disjunct of phi is one of psi'''
        return self.split_left(
            s, s.lhs[0],
            lambda t, part: self.select(t, part, self.identity))

    def identity(self, s):
        """
        Derived identity R, x:A => x:A for compound A, expanded down to
        atomic identities.
        """
        e = s.lhs[0]
        if isinstance(e, DisjFormula):
            return self.inclusion(s)
        x, f = e.label, e.formula
        left, right = (('L', e),), (('R', e),)
        if isinstance(f, Atom):
            return self.node(make_instance(
                'id', s, self.system, principal=left + right,
                generalized=s.lhs != (e,) or s.rhs != (e,)))
        if isinstance(f, Bottom):
            return self.node(make_instance('botL', s, self.system,
                                           principal=left))
        if isinstance(f, And):
            return self.rule(
                'andR', s,
                lambda i, t: self.rule('andL', t,
                                       lambda j, u: self.identity(u),
                                       principal=left, choice=i),
                principal=right)
        if isinstance(f, Or):
            return self.rule(
                'orL', s,
                lambda i, t: self.rule('orR', t,
                                       lambda j, u: self.identity(u),
                                       principal=(('R', t.rhs[0]),),
                                       choice=i),
                principal=left)
        if isinstance(f, Imp):
            return self.rule('impR', s, lambda i, t: self._imp_identity(t, e),
                             principal=right)
        y = fresh_label(s.labels())
        if isinstance(f, Box):
            return self.rule(
                'boxR', s,
                lambda i, t: self.rule('boxL', t,
                                       lambda j, u: self.identity(u),
                                       principal=left, witness=(x, y)),
                principal=right, fresh=y)
        if isinstance(f, Dia):
            return self.rule(
                'diaL', s,
                lambda i, t: self.rule('diaR', t,
                                       lambda j, u: self.identity(u),
                                       principal=(('R', e),),
                                       witness=(x, y)),
                principal=left, fresh=y)
        raise EmbeddingError(f"No identity proof for {e}")

    def _imp_identity(self, s, e):
        x, f = e.label, e.formula
        given = LabelledFormula(x, f.left)
        taken = LabelledFormula(x, f.right)
        left = Sequent(s.rel, (given,), (given,))
        right = Sequent(s.rel, (taken,), (taken,))
        step = RuleInstance('impL', s, (left, right), principal=(('L', e),))
        return self.node(step, [self.identity(left), self.identity(right)])


def _phi(s):
    '''The sequent with its right side read as one disjunction'''
    rhs = list(unique_everseen(s.rhs))
    if not rhs:
        raise EmbeddingError(f"Empty right side in {s}")
    parts = [d for e in rhs for d in disjuncts_of(e)]
    return Sequent(s.rel, s.lhs, (disj(list(unique_everseen(parts))),))


class _Embedding:
    def __init__(self, p):
        self.p = p
        self.builder = ProofBuilder(DIK4)
        self.emit = _Emitter(self.builder)
        self.phi = {node_id: _phi(node.sequent)
                    for node_id, node in p.nodes.items()}
        self.alias = {}
        for node_id, node in p.nodes.items():
            for child in node.premisses:
                if self.phi[child] == self.phi[node_id]:
                    self.alias[node_id] = child
                    break
        for node_id in p.nodes:
            self.builder.reserve(node_id)

    def resolve(self, node_id):
        while node_id in self.alias:
            node_id = self.alias[node_id]
        return node_id

    def run(self):
        for node_id, node in self.p.nodes.items():
            if node_id not in self.alias:
                self._embed(node)
        return self.builder.build(self.resolve(self.p.root))

    def _embed(self, node):
        conclusion = self.phi[node.id]
        step = node.step
        if isinstance(step, BackEdge):
            return self._embed_backedge(node, conclusion)
        if step.rule in MULTIPLICATIVE:
            raise EmbeddingError(f"{step.rule} at {node.id} is not supported")
        children = [self.resolve(c) for c in node.premisses]
        direct = self._direct(step, conclusion, children)
        if direct is not None:
            return self.builder.put(node.id, conclusion, direct, children)
        if step.rule == 'wR':
            return self._install(node.id, self._staged(
                conclusion, children, 1, self._unreachable))
        if step.rule in ('andR', 'orR', 'diaR', 'macro-andR', 'macro-orR',
                         'macro-diaR'):
            return self._install(node.id, self._staged(
                conclusion, children, len(children),
                lambda t, acquired: self._introduce(t, acquired, step)))
        if step.rule == 'macro-impL':
            return self._install(node.id, self._staged(
                conclusion, children[:1], 2,
                lambda t, acquired: self._imp_left(t, acquired, step,
                                                   children[1])))
        raise EmbeddingError(f"Cannot embed {step.rule} at {node.id}")

    def _install(self, node_id, result_id):
        result = self.builder.nodes[result_id]
        return self.builder.put(node_id, result.sequent, result.step,
                                result.premisses)

    def _direct(self, step, conclusion, children):
        principal = step.principal
        if step.rule == 'id':
            left = [e for side, e in principal if side == 'L'][0]
            goal = conclusion.rhs[0]
            principal = (('L', left), ('R', goal))
        elif any(side == 'R' for side, _ in principal):
            if conclusion.rhs[0] not in [e for _, e in principal]:
                return None
        strict = conclusion.lhs == conclusion.rhs
        try:
            out = make_instance(
                step.rule, conclusion, DIK4, principal=principal,
                fresh=step.fresh, witness=step.witness, atoms=step.atoms,
                choice=step.choice, split=step.split,
                generalized=step.rule == 'id' and not (
                    strict and len(conclusion.lhs) == 1))
        except RuleError:
            return None
        if list(out.premisses) != [self.builder_sequent(c) for c in children]:
            return None
        return out

    def builder_sequent(self, node_id):
        return self.phi[node_id]

    def _embed_backedge(self, node, conclusion):
        edge = node.step
        target = self.resolve(edge.target)
        renamed = self.phi[target].rename(edge.mapping)
        if renamed.lhs == conclusion.lhs and renamed.rhs == conclusion.rhs:
            return self.builder.put(node.id, conclusion, make_backedge(
                target, edge.mapping, edge.grown))
        if set(disjuncts_of(renamed.rhs[0])) \
                != set(disjuncts_of(conclusion.rhs[0])) \
                or Counter(renamed.lhs) != Counter(conclusion.lhs):
            raise EmbeddingError(f"Back-edge {node.id} does not match its "
                                 f"target")
        chi = renamed.rhs[0]
        left = Sequent(conclusion.rel, conclusion.lhs, (chi,))
        right = Sequent(conclusion.rel, (chi,), conclusion.rhs)
        left_id = self.builder.backedge(f'{node.id}_reorder', left, target,
                                        edge.mapping,
                                        edge.grown or left.rel != renamed.rel)
        right_id = self.emit.inclusion(right)
        step = RuleInstance('cut', conclusion, (left, right), cut_formula=chi)
        return self.builder.put(node.id, conclusion, step,
                                [left_id, right_id])

    def _staged(self, conclusion, children, copies, final):
        """
        Prove the conclusion from the premiss proofs by cutting on their
        right sides in turn. Old disjuncts go straight to the goal; the new
        ones are collected and handed to final.
        """
        rel, gamma, goal = conclusion.rel, conclusion.lhs, conclusion.rhs[0]
        old = set(disjuncts_of(goal))
        chis = [self.phi[c].rhs[0] for c in children]

        def stage(i, left_copies, acquired):
            s = Sequent(rel, gamma * left_copies + tuple(acquired), (goal,))
            if i == len(children):
                return final(s, acquired)
            left = self.phi[children[i]]
            right = Sequent(rel, gamma * (left_copies - 1)
                            + tuple(acquired) + (chis[i],), (goal,))

            def on_part(t, part):
                if part in old:
                    return self.emit.weaken(t, (part,), self.emit.inclusion)
                return stage(i + 1, left_copies - 1, acquired + [part])

            right_id = self.emit.split_left(right, chis[i], on_part)
            return self.emit.cut(s, left, right, chis[i], children[i],
                                 right_id)

        return self.emit.contract(
            conclusion, list(gamma) * (copies - 1),
            lambda s: stage(0, copies, []))

    def _unreachable(self, s, acquired):
        raise EmbeddingError(f"Weakening introduced {acquired}")

    def _introduce(self, s, acquired, step):
        principal = [e for side, e in step.principal if side == 'R'][0]
        f = principal.formula

        def finish(t):
            right = (('R', principal),)
            if isinstance(f, And):
                return self.emit.rule(
                    'andR', t,
                    lambda i, u: self.emit.weaken(u, u.rhs, self.emit.identity),
                    principal=right)
            if isinstance(f, Or):
                choice = 0 if acquired[0].formula == f.left else 1
                return self.emit.rule(
                    'orR', t,
                    lambda i, u: self.emit.weaken(u, u.rhs, self.emit.identity),
                    principal=right, choice=choice)
            return self.emit.rule(
                'diaR', t,
                lambda i, u: self.emit.weaken(u, u.rhs, self.emit.identity),
                principal=right, witness=step.witness)

        return self.emit.select(s, principal, finish)

    def _imp_left(self, s, acquired, step, right_child):
        x_a = acquired[0]
        right_seq = self.phi[right_child]

        def prove(i, t):
            if i == 0:
                return self.emit.weaken(t, (x_a,), self.emit.identity)
            return self.emit.weaken(t, right_seq.lhs, lambda u: right_child)

        return self.emit.rule('macro-impL', s, prove,
                              principal=step.principal)


def embed_multisuccedent(p):
    """
    Move a cut-free multi-succedent proof into the disjunctive system.

    Each right side becomes the disjunction of its formulas without
    repetition; right rules working on several formulas are simulated by
    cutting against derived inclusions.

    Raises:
        EmbeddingError: p has cuts, is classical, or uses a rule with no
        simulation.
    """
    if p.system.classical:
        raise EmbeddingError(
            f"{p.system.value} proofs are classical and have no "
            "intuitionistic embedding")
    if p.system is DIK4:
        return p
    if p.cuts():
        raise EmbeddingError("Input proof is not cut-free")
    logger.info('RUNNING embed_multisuccedent')
    out = _Embedding(p).run()
    logger.info('DONE embed_multisuccedent: degree %d', degree_of(out))
    return out


def _snapshot(builder, root):
    return CyclicProof(builder.system, root, dict(builder.nodes))


def _copy_into(builder, source, node_id, renaming=None, extra=(),
               replacements=()):
    '''Copy of a subproof under a transform, added to builder'''
    labels = source.nodes[node_id].sequent.labels()
    renaming = renaming or {}
    transform = Transform(
        tuple(sorted((a, renaming.get(a, a)) for a in labels)),
        frozenset(extra), sort_replacements(replacements))
    try:
        return Transport(builder, source).copy(node_id, transform)
    except (TransportError, ValueError, KeyError) as e:
        raise CutReductionError(f"Cannot copy {node_id}: {e}") from e


def invert_or_left(p, entry, i, split=1):
    """
    From a proof of R, G, phi0 + phi1 => psi, a proof of R, G, phi_i => psi
    where phi0 is the first split disjuncts of entry.

    Raises:
        CutReductionError: entry does not occur on the left of the
        conclusion, or the split is out of range.
    """
    if entry not in p.conclusion.lhs:
        raise CutReductionError(f"{entry} does not occur in {p.conclusion}")
    width = degree(entry)
    if not 1 <= split < width:
        raise CutReductionError(f"Split {split} out of range for {entry}")
    lo, hi = (0, split) if i == 0 else (split, width)
    builder = ProofBuilder(p.system)
    root = _copy_into(builder, p, p.root, replacements=[(entry, lo, hi)])
    return builder.build(root)


class _Reducer:
    def __init__(self, p, cut_id):
        self.p = p
        self.cut_id = cut_id
        self.builder = ProofBuilder(p.system)
        self.builder.nodes = dict(p.nodes)
        self.emit = _Emitter(self.builder, p.system, prefix=f'{cut_id}_r')

    def seq(self, node_id):
        return self.builder.nodes[node_id].sequent

    def expose(self, node_id):
        '''Replace a back-edge by a copy of the subproof it points to'''
        node = self.builder.nodes[node_id]
        if not isinstance(node.step, BackEdge):
            return node_id
        edge = node.step
        target = self.p.nodes[edge.target]
        inside = {(edge.mapping[a], edge.mapping[b])
                  for a, b in target.sequent.rel}
        extra = node.sequent.rel - inside if edge.grown else ()
        return _copy_into(self.builder, self.p, edge.target,
                          renaming=edge.mapping, extra=extra)

    def install(self, result_id):
        result = self.builder.nodes[result_id]
        self.builder.put(self.cut_id, result.sequent, result.step,
                         result.premisses)

    def run(self):
        node = self.p.nodes.get(self.cut_id)
        if node is None or node.rule != 'cut':
            raise CutReductionError(f"{self.cut_id} is not a cut")
        chi = node.step.cut_formula
        left_id = self.expose(node.premisses[0])
        right_id = node.premisses[1]
        left = self.builder.nodes[left_id]
        conclusion = node.sequent
        gamma2 = tuple((Counter(self.seq(right_id).lhs) - Counter([chi]))
                       .elements())
        rule = left.rule
        if rule == 'dis-orR':
            case = 'key'
            self.install(self._key(conclusion, chi, left, right_id))
        elif rule == 'botL':
            case = 'botL'
            self.install(self.emit.node(make_instance(
                'botL', conclusion, self.p.system,
                principal=left.step.principal)))
        elif rule == 'id':
            case = 'id'
            self.install(self._axiom(conclusion, chi, left, right_id,
                                     gamma2))
        elif rule in MULTIPLICATIVE:
            case = rule
            self.install(self._multiplicative(conclusion, chi, left,
                                              right_id, gamma2))
        elif rule == 'th':
            raise CutReductionError("Cut above thinning is not reduced")
        else:
            case = rule
            self.install(self._commute(conclusion, chi, left, right_id,
                                       gamma2))
        logger.debug("Reduced cut %s (%s)", self.cut_id, case)
        return self.builder.build(self.p.root), case

    def _key(self, conclusion, chi, left, right_id):
        step = left.step
        width = degree(chi)
        lo, hi = (0, step.split) if step.choice == 0 else (step.split, width)
        part = sliced(chi, lo, hi)
        right = _copy_into(self.builder, _snapshot(self.builder, self.p.root),
                           right_id, replacements=[(chi, lo, hi)])
        premiss = left.premisses[0]
        return self.emit.cut(conclusion, self.seq(premiss), self.seq(right),
                             part, premiss, right)

    def _axiom(self, conclusion, chi, left, right_id, gamma2):
        atom = [e for side, e in left.step.principal if side == 'L'][0]
        parts = disjuncts_of(chi)
        j = parts.index(atom)
        right = _copy_into(self.builder, _snapshot(self.builder, self.p.root),
                           right_id, replacements=[(chi, j, j + 1)])
        return self.emit.weaken(conclusion, gamma2 + (atom,),
                                lambda t: right)

    def _cut_above(self, premiss_id, premiss, target, chi, right_id):
        '''The old cut moved onto one premiss of the permuted rule'''
        extra = target.rel - self.seq(right_id).rel
        q = right_id
        if extra:
            q = _copy_into(self.builder, _snapshot(self.builder, self.p.root),
                           right_id, extra=extra)
        expected = Sequent(premiss.rel,
                           premiss.lhs + tuple(
                               (Counter(self.seq(q).lhs) - Counter([chi]))
                               .elements()),
                           self.seq(q).rhs)
        if expected != target:
            raise CutReductionError(
                f"Permuted premiss {target} does not match {expected}")
        return self.emit.cut(target, premiss, self.seq(q), chi, premiss_id, q)

    def _multiplicative(self, conclusion, chi, left, right_id, gamma2):
        step = left.step
        a1, a2 = left.premisses
        s2 = self.seq(a2)
        target = Sequent(s2.rel, s2.lhs + gamma2, conclusion.rhs)
        moved = self._cut_above(a2, s2, target, chi, right_id)
        new = RuleInstance(step.rule, conclusion, (self.seq(a1), target),
                           step.principal, cut_formula=step.cut_formula)
        return self.emit.node(new, [a1, moved])

    def _commute(self, conclusion, chi, left, right_id, gamma2):
        step = left.step
        premisses = list(left.premisses)
        fresh = step.fresh
        if fresh is not None:
            used = conclusion.labels() | self.seq(right_id).labels() \
                | left.sequent.labels()
            if fresh in used:
                renamed = fresh_label(used, fresh.rstrip('0123456789') or 'y')
                snapshot = _snapshot(self.builder, self.p.root)
                premisses = [_copy_into(self.builder, snapshot, c,
                                        renaming={fresh: renamed})
                             for c in premisses]
                fresh = renamed
        try:
            new = make_instance(
                step.rule, conclusion, self.p.system,
                principal=step.principal, fresh=fresh, witness=step.witness,
                atoms=step.atoms, choice=step.choice, split=step.split,
                generalized=step.generalized)
        except RuleError as e:
            raise CutReductionError(
                f"Cannot permute {step.rule} below the cut: {e}") from e
        children = []
        for premiss_id, target in zip(premisses, new.premisses):
            premiss = self.seq(premiss_id)
            if premiss.rhs == (chi,) and target.rhs == conclusion.rhs:
                children.append(self._cut_above(premiss_id, premiss, target,
                                                chi, right_id))
            else:
                children.append(self.emit.weaken(
                    target, premiss.lhs, lambda t, c=premiss_id: c))
        return self.emit.node(new, children)


def reduce_cut_step(p, cut):
    """
    One rewrite of the cut at node cut: the key case when its left premiss
    ends in dis-orR, otherwise the cut moves above the last rule of its left
    premiss. The conclusion of the cut node is unchanged.

    Raises:
        CutReductionError: no rewrite applies.
    """
    proof, _case = _Reducer(p, cut).run()
    return proof


def compute_bar(p, height):
    '''Leaves of the unfolding cut at height: closed axioms or cut-off positions'''
    tree = unfold(p, height)
    leaves = [n for n in tree.walk() if not n.children]
    return Bar(height, frozenset(n.position for n in leaves),
               {n.position: n.sequent for n in leaves})


def _topmost_cut(p, height, d):
    tree = unfold(p, height)
    candidates = [n for n in tree.walk()
                  if n.children and n.rule == 'cut'
                  and degree(p.nodes[n.origin].step.cut_formula) == d]
    if not candidates:
        return None
    candidates.sort(key=lambda n: (-len(n.position), n.position))
    return candidates[0].origin


def _bar_preserved(old, new):
    return all(any(s.rel >= t.rel for t in old.sequents.values())
               for s in new.sequents.values())


def push_cuts_above_bar(p, bar, d, max_steps=MAX_REDUCTION_STEPS):
    """
    Rewrite degree-d cuts beneath the bar, topmost first, until none is left
    beneath it or the step budget runs out.

    Returns:
        PushResult: the rewritten proof and the bar at the same height in it.
    """
    current, trace, preserved = p, [], True
    for steps in range(max_steps):
        cut = _topmost_cut(current, bar.height, d)
        if cut is None:
            new_bar = compute_bar(current, bar.height)
            return PushResult(current, new_bar, steps, trace, True, preserved)
        current, case = _Reducer(current, cut).run()
        trace.append({'cut': cut, 'case': case, 'degree': d})
        preserved = preserved and _bar_preserved(
            bar, compute_bar(current, bar.height))
    logger.warning("Cut pushing stopped after %d steps", max_steps)
    return PushResult(current, compute_bar(current, bar.height), max_steps,
                      trace, False, preserved)


def degree_reduce_bounded(p, max_height=MAX_HEIGHT,
                          max_steps=MAX_REDUCTION_STEPS):
    """
    Push the cuts of maximal degree above higher and higher bars until none
    is left.

    Returns:
        ReductionResult: finished only when every cut of the input degree is
        gone and the output passes the local and progress checks.
    """
    d = degree_of(p)
    if d <= 1:
        return ReductionResult(p, True, d)
    logger.info('RUNNING degree_reduce_bounded (degree %d)', d)
    current, trace = p, []
    for height in range(1, max_height + 1):
        pushed = push_cuts_above_bar(current, compute_bar(current, height), d,
                                     max_steps)
        current = pushed.proof
        trace += pushed.trace
        if degree_of(current) < d:
            ok = not check_local(current) \
                and check_progress(current).progressing
            logger.info('DONE degree_reduce_bounded: degree %d',
                        degree_of(current))
            return ReductionResult(current, ok, degree_of(current), trace)
        if not pushed.finished:
            break
    logger.info('DONE degree_reduce_bounded: unfinished')
    return ReductionResult(current, False, degree_of(current), trace)


def reduce_to_labelled(p, max_height=MAX_HEIGHT,
                       max_steps=MAX_REDUCTION_STEPS):
    '''Repeat degree reduction until only labelled-formula cuts remain'''
    current, trace = p, []
    while degree_of(current) > 1:
        result = degree_reduce_bounded(current, max_height, max_steps)
        trace += result.trace
        if not result.finished:
            return ReductionResult(result.proof, False, result.degree, trace)
        current = result.proof
    return ReductionResult(current, True, degree_of(current), trace)


def as_labelled_proof(p):
    """
    The same graph read in IK4, when no disjunction is left.

    Raises:
        CutReductionError: some sequent still carries a disjunction.
    """
    for node in p.nodes.values():
        s = node.sequent
        if any(degree(e) > 1 for e in s.lhs + s.rhs):
            raise CutReductionError(f"{node.id} still has a disjunction")
    return CyclicProof(SystemId.IK4, p.root, dict(p.nodes))
