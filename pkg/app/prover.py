#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from more_itertools import unique_everseen

from config import ConfigurationError, load_search_defaults
from cyclic_proof import (
    CertificateError,
    CyclicProof,
    ProofBuilder,
    backedge_relation,
    check_local,
    check_progress,
    compose,
    loop_progresses,
    make_backedge,
    path_relation,
)
from formula import And, Atom, Bottom, Box, Dia, Imp, Or
from global_variables import (
    JSON_INDENT,
    MAX_DEPTH,
    MAX_LABELS,
    MAX_STEPS,
    ROOT_LABEL,
)
from sequent_calculus import (
    LabelledFormula,
    Sequent,
    SequentSyntaxError,
    SystemId,
    disjuncts_of,
    entry_key,
    find_renaming,
    fresh_label,
    iter_renamings,
    macro_rules,
    make_instance,
    parse_sequent,
    saturation_violations,
)

logger = logging.getLogger(__name__)

COMPANION_POLICIES = ('ancestors_only', 'global')

PROVED, REFUTED, FAILED, UNKNOWN = 'proved', 'refuted', 'failed', 'unknown'

_FRONTIER_LIMIT = 50


class SearchBoundError(RuntimeError):
    '''A label, depth or step bound was exhausted'''


@dataclass
class SearchConfig:
    system: SystemId = SystemId.mIK4
    max_labels: int = MAX_LABELS
    max_depth: int = MAX_DEPTH
    max_steps: int = MAX_STEPS
    companion_policy: str = 'ancestors_only'

    def validate(self):
        """
        Raises:
            ConfigurationError: unsupported system, non-positive bound or
            unknown companion policy.
        """
        if not isinstance(self.system, SystemId) \
                or self.system is SystemId.dIK4:
            raise ConfigurationError(
                f"Proof search is not available for {self.system}")
        for name in ('max_labels', 'max_depth', 'max_steps'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(
                    f"{name} must be a positive integer, got {value!r}")
        if self.companion_policy not in COMPANION_POLICIES:
            raise ConfigurationError(
                f"Unknown companion policy {self.companion_policy!r}")
        return self

    @classmethod
    def from_defaults(cls, system, **overrides):
        '''Bounds from Data/search_defaults.yml and the environment'''
        params = load_search_defaults(system.value)
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(system=system, **params).validate()


@dataclass
class DenierNode:
    """
    One segment of a refutation: a run of sequents from a segment start
    through invertible steps to a saturated sequent.
    """
    id: str
    run: List[Sequent]
    successors: List[str] = field(default_factory=list)
    backlink: Optional[str] = None
    renaming: Dict[str, str] = field(default_factory=dict)

    @property
    def saturated(self):
        return self.run[-1]


@dataclass
class DenierTree:
    system: SystemId
    root: str
    nodes: Dict[str, DenierNode] = field(default_factory=dict)

    def parents(self):
        parent = {}
        for node in self.nodes.values():
            for child in node.successors:
                parent[child] = node.id
        return parent

    def path_to(self, node_id):
        '''Segment ids from the root down to node_id'''
        parent = self.parents()
        path = [node_id]
        while path[-1] in parent:
            path.append(parent[path[-1]])
        return list(reversed(path))


@dataclass
class Provable:
    proof: CyclicProof
    status = 'Provable'

    @property
    def system(self):
        '''System the certificate checks in'''
        return self.proof.system


@dataclass
class Refutable:
    denier: Optional[DenierTree]
    system: SystemId
    saturated: Optional[Sequent] = None
    status = 'Refutable'


@dataclass
class Unknown:
    reason: str
    frontier: List[Sequent] = field(default_factory=list)
    status = 'Unknown'


@dataclass
class PhaseNode:
    sequent: Sequent
    rule: Optional[str] = None
    children: List['PhaseNode'] = field(default_factory=list)
    closed: bool = False

    def leaves(self):
        if not self.children:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]

    def size(self):
        return 1 + sum(child.size() for child in self.children)


def _lf(label, formula):
    return LabelledFormula(label, formula)


def _dedup(s):
    return Sequent(s.rel, tuple(unique_everseen(s.lhs)),
                   tuple(unique_everseen(s.rhs)))


def closing_step(s, system):
    '''A botL or (generalized) id instance closing s, or None'''
    lhs = list(unique_everseen(s.lhs))
    for e in lhs:
        if isinstance(e, LabelledFormula) and isinstance(e.formula, Bottom):
            return make_instance('botL', s, system, principal=(('L', e),))
    for e in lhs:
        if not isinstance(e, LabelledFormula) \
                or not isinstance(e.formula, Atom):
            continue
        for r_entry in unique_everseen(s.rhs):
            if e in disjuncts_of(r_entry):
                strict = s.lhs == (e,) and s.rhs == (e,)
                return make_instance(
                    'id', s, system, principal=(('L', e), ('R', r_entry)),
                    generalized=not strict)
    return None


def _tr_step(s, system):
    if not system.transitive:
        return None
    for x, y in sorted(s.rel):
        for y2, z in sorted(s.rel):
            if y == y2 and (x, z) not in s.rel:
                return make_instance('tr', s, system, witness=(x, y, z),
                                     atoms=frozenset({(x, z)}))
    return None


def _right_invertible(s, system):
    '''impR, boxR and andR on the single goal of a single-succedent sequent'''
    e = s.rhs[0]
    if not isinstance(e, LabelledFormula):
        return None
    principal = (('R', e),)
    if isinstance(e.formula, Imp):
        return make_instance('impR', s, system, principal=principal)
    if isinstance(e.formula, Box):
        return make_instance('boxR', s, system, principal=principal,
                             fresh=fresh_label(s.labels()))
    if isinstance(e.formula, And):
        return make_instance('andR', s, system, principal=principal)
    return None


def _invertible_step(s, system):
    """
    Next invertible rule for a transitively closed, open sequent.

    Saturating systems take the first principal-retaining macro; IK4 works
    on its goal first, then on left formulas other than implications.
    """
    if system.single_succedent:
        step = _right_invertible(s, system)
        if step is not None:
            return step
        rules = [r for r in macro_rules(s, system) if r.rule != 'macro-impL']
    else:
        rules = macro_rules(s, system)
    return rules[0] if rules else None


def invertible_phase(s, system=SystemId.mIK4, max_labels=MAX_LABELS):
    """
    Apply tr and the invertible rules until every leaf is closed or
    saturated.

    Returns:
        PhaseNode: the phase tree rooted at s.

    Raises:
        SearchBoundError: a sequent exceeds max_labels labels.
    """
    def expand(current):
        if len(current.labels()) > max_labels:
            raise SearchBoundError(
                f"Label bound {max_labels} exceeded at {current}")
        closing = closing_step(current, system)
        if closing is not None:
            return PhaseNode(current, closing.rule, closed=True)
        step = _tr_step(current, system) or _invertible_step(current, system)
        if step is None:
            return PhaseNode(current)
        return PhaseNode(current, step.rule,
                         [expand(p) for p in step.premisses])

    return expand(s)


def _noninvertible_steps(s):
    steps = []
    labels = s.labels()
    for e in unique_everseen(s.rhs):
        if not isinstance(e, LabelledFormula):
            continue
        x, f = e.label, e.formula
        if isinstance(f, Imp):
            steps.append(('impR', e, None,
                          Sequent(s.rel, s.lhs + (_lf(x, f.left),),
                                  (_lf(x, f.right),))))
        elif isinstance(f, Box):
            y = fresh_label(labels)
            steps.append(('boxR', e, y,
                          Sequent(s.rel | {(x, y)}, s.lhs,
                                  (_lf(y, f.body),))))
    return steps


def noninvertible_expand(s):
    '''Successors of a saturated sequent, one per x:A -> B or x:[]A on the right'''
    return [successor for _, _, _, successor in _noninvertible_steps(s)]


def detect_companion(s, history):
    """
    First earlier sequent equal to s up to an injective label renaming.

    Returns:
        tuple or None: (index into history, renaming of its labels to s's).
    """
    for index, earlier in enumerate(history):
        renaming = find_renaming(earlier, s, 'equal')
        if renaming is not None:
            return index, renaming
    return None


def _weakening_steps(s, target, system):
    '''wL, wR then th steps from s down to a subsumed sequent'''
    steps, current = [], s
    for side, have, want in (('L', s.lhs, target.lhs),
                             ('R', s.rhs, target.rhs)):
        extra = Counter(have) - Counter(want)
        for entry in sorted(extra.elements(), key=entry_key):
            step = make_instance('w' + side, current, system,
                                 principal=((side, entry),))
            steps.append(step)
            current = step.premisses[0]
    atoms = current.rel - target.rel
    if atoms:
        step = make_instance('th', current, system, atoms=frozenset(atoms))
        steps.append(step)
        current = step.premisses[0]
    return steps, current


def _weakening_chain(s, target):
    '''Sequents visited by _weakening_steps(s, target), without the instances'''
    chain, lhs, rhs = [s], list(s.lhs), list(s.rhs)
    for items, want in ((lhs, target.lhs), (rhs, target.rhs)):
        extra = Counter(items) - Counter(want)
        for entry in sorted(extra.elements(), key=entry_key):
            items.remove(entry)
            chain.append(Sequent(s.rel, tuple(lhs), tuple(rhs)))
    if s.rel - target.rel:
        chain.append(Sequent(s.rel & target.rel, tuple(lhs), tuple(rhs)))
    return chain


@dataclass
class _Result:
    kind: str
    node: Optional[str] = None
    run: List[Sequent] = field(default_factory=list)
    successors: List[str] = field(default_factory=list)
    backlink: Optional[str] = None
    renaming: Dict[str, str] = field(default_factory=dict)
    reason: str = ''


@dataclass
class _Frame:
    sequent: Sequent
    node: Optional[str]
    segment: Optional[str]
    search: bool = True
    tr_closed: bool = False
    saturated: bool = False


class _Engine:
    """
    Depth-first search building the certificate while it goes.

    Every search node reserves its certificate id on entry so that
    descendants can loop back to it; ids of abandoned branches are pruned
    when the proof is built.
    """

    def __init__(self, config):
        self.config = config
        self.system = config.system
        self.builder = ProofBuilder(config.system)
        self.steps = 0
        self._progress = {}
        self.frontier = []
        self.proved = []
        self.segments = {}
        self._segment_count = 0
        self._node_count = 0

    def _reserve(self):
        node_id = self.builder.reserve(f'n{self._node_count}')
        self._node_count += 1
        return node_id

    def _new_segment(self):
        segment = f's{self._segment_count}'
        self._segment_count += 1
        return segment

    def _bound_hit(self, s, branch):
        if self._spent():
            return 'step budget exhausted'
        if len(s.labels()) > self.config.max_labels:
            return 'label bound exceeded'
        if len(branch) >= self.config.max_depth:
            return 'depth bound exceeded'
        return None

    def _spent(self):
        return self.steps > self.config.max_steps

    def _charge(self):
        '''Count one renaming attempt; True once the step budget is spent'''
        self.steps += 1
        return self._spent()

    def _progresses(self, relation):
        if relation not in self._progress:
            self._progress[relation] = loop_progresses(relation)
        return self._progress[relation]

    def _proved(self, s, node_id):
        if self.config.companion_policy == 'global':
            self.proved.append((s, node_id))
        return _Result(PROVED, node=node_id)

    def run(self, goal):
        root = Sequent(frozenset(), (), (_lf(ROOT_LABEL, goal),))
        segment = self._new_segment()
        return self.search(root, [], segment), segment

    def search(self, s, branch, segment):
        self.steps += 1
        bound = self._bound_hit(s, branch)
        if bound:
            if len(self.frontier) < _FRONTIER_LIMIT:
                self.frontier.append(s)
            logger.debug("%s at %s", bound, s)
            return _Result(UNKNOWN, reason=bound)
        node_id = self._reserve()
        closing = closing_step(s, self.system)
        if closing is not None:
            self.builder.put(node_id, s, closing)
            return self._proved(s, node_id)
        frame = _Frame(s, node_id, segment)
        step = _tr_step(s, self.system)
        if step is not None:
            return self._invertible(frame, step, branch, segment)
        frame.tr_closed = True
        closed = self._companion(s, node_id, branch)
        if closed is not None:
            return closed
        if self.system is not SystemId.mIK4 and self._repeats(s, branch):
            logger.debug("Non-progressing repeat at %s", s)
            if self.system.classical:
                return _Result(REFUTED, run=[s])
            return _Result(FAILED, reason='non-progressing loop')
        step = _invertible_step(s, self.system)
        if step is not None:
            return self._invertible(frame, step, branch, segment)
        frame.saturated = True
        if self.system.single_succedent:
            return self._choose(frame, branch)
        if self.system.classical:
            return _Result(REFUTED, run=[s])
        return self._expand(frame, branch, segment)

    def _invertible(self, frame, step, branch, segment):
        branch.append(frame)
        results = []
        for premiss in step.premisses:
            result = self.search(premiss, branch, segment)
            results.append(result)
            if result.kind in (REFUTED, FAILED):
                break
        branch.pop()
        if all(r.kind == PROVED for r in results):
            self.builder.put(frame.node, frame.sequent, step,
                             [r.node for r in results])
            return self._proved(frame.sequent, frame.node)
        for r in results:
            if r.kind == REFUTED:
                return _Result(REFUTED, run=[frame.sequent] + r.run,
                               successors=r.successors, backlink=r.backlink,
                               renaming=r.renaming)
        for r in results:
            if r.kind == UNKNOWN:
                return r
        return results[-1]

    def _companion(self, s, node_id, branch):
        """
        Close s by weakening it down to an earlier sequent and looping back,
        provided the loop is progressing.
        """
        for index, frame in enumerate(branch):
            if not frame.search or not frame.tr_closed:
                continue
            target = frame.sequent
            prefix = path_relation([f.sequent for f in branch[index:]] + [s])
            through = {}
            for sigma in iter_renamings(target, s, 'subsume',
                                        tick=self._charge):
                renamed = target.rename(sigma)
                chain = _weakening_chain(s, renamed)
                key = tuple((frozenset(c.labels()), c.rel) for c in chain)
                if key not in through:
                    through[key] = compose(prefix, path_relation(chain))
                relation = compose(through[key],
                                   backedge_relation(sigma, chain[-1], target))
                if self._progresses(relation):
                    logger.debug("Companion %s for %s via %s",
                                 frame.node, s, sigma)
                    steps, end = _weakening_steps(s, renamed, self.system)
                    return self._close(s, node_id, steps, end,
                                       frame.node, sigma)
            if self._spent():
                return _Result(UNKNOWN, reason='step budget exhausted')
        for target, target_id in self.proved:
            if self._charge():
                return _Result(UNKNOWN, reason='step budget exhausted')
            sigma = find_renaming(target, s, 'subsume')
            if sigma is not None:
                steps, end = _weakening_steps(s, target.rename(sigma),
                                              self.system)
                return self._close(s, node_id, steps, end, target_id, sigma)
        return None

    def _close(self, s, node_id, steps, end, target_id, sigma):
        ids = [node_id] + [self._reserve() for _ in steps]
        for i, step in enumerate(steps):
            self.builder.put(ids[i], step.conclusion, step, [ids[i + 1]])
        self.builder.put(ids[-1], end, make_backedge(target_id, sigma))
        return self._proved(s, node_id)

    def _loops(self, s, branch, pick):
        for index, frame in enumerate(branch):
            if not frame.search or not pick(frame):
                continue
            target = frame.sequent
            chain = [f.sequent for f in branch[index:]] + [s]
            prefix = path_relation(chain)
            for sigma in iter_renamings(_dedup(target), _dedup(s), 'equal',
                                        tick=self._charge):
                relation = compose(prefix,
                                   backedge_relation(sigma, s, target))
                if not self._progresses(relation):
                    return frame, sigma
            if self._spent():
                return None
        return None

    def _repeats(self, s, branch):
        return self._loops(s, branch, lambda f: f.tr_closed) is not None

    def _choose(self, frame, branch):
        '''IK4: try each non-invertible rule until one is fully proved'''
        s = frame.sequent
        choices = [r for r in macro_rules(s, self.system)
                   if r.rule == 'macro-impL']
        goal = s.rhs[0]
        if isinstance(goal, LabelledFormula):
            principal = (('R', goal),)
            if isinstance(goal.formula, Or):
                choices += [make_instance('orR', s, self.system,
                                          principal=principal, choice=i)
                            for i in (0, 1)]
            if isinstance(goal.formula, Dia):
                choices += [make_instance('diaR', s, self.system,
                                          principal=principal,
                                          witness=(goal.label, y))
                            for x, y in sorted(s.rel) if x == goal.label]
        outcome = _Result(FAILED, reason='no rule proves the goal')
        branch.append(frame)
        for step in choices:
            results = []
            for premiss in step.premisses:
                result = self.search(premiss, branch, None)
                results.append(result)
                if result.kind != PROVED:
                    break
            if all(r.kind == PROVED for r in results):
                branch.pop()
                self.builder.put(frame.node, s, step,
                                 [r.node for r in results])
                return self._proved(s, frame.node)
            if results[-1].kind == UNKNOWN:
                outcome = results[-1]
        branch.pop()
        return outcome

    def _drop_context(self, s, principal):
        steps, current = [], s
        extra = Counter(s.rhs) - Counter([principal])
        for entry in sorted(extra.elements(), key=entry_key):
            step = make_instance('wR', current, self.system,
                                 principal=(('R', entry),))
            steps.append(step)
            current = step.premisses[0]
        return steps

    def _expand(self, frame, branch, segment):
        '''mIK4 saturated node: Denier back-link, else non-invertible successors'''
        s = frame.sequent
        loop = self._loops(s, branch, lambda f: f.saturated)
        if loop is not None:
            target, sigma = loop
            logger.debug("Back-link from %s to segment %s", s, target.segment)
            return _Result(REFUTED, run=[s], backlink=target.segment,
                           renaming=sigma)
        expansions = _noninvertible_steps(s)
        if not expansions:
            return _Result(REFUTED, run=[s])
        children, unknown = [], None
        branch.append(frame)
        for rule, principal, fresh, _ in expansions:
            chain = self._drop_context(s, principal)
            conclusion = chain[-1].premisses[0] if chain else s
            step = make_instance(rule, conclusion, self.system,
                                 principal=(('R', principal),), fresh=fresh)
            artifacts = [_Frame(c.premisses[0], None, segment, search=False)
                         for c in chain]
            branch.extend(artifacts)
            child_segment = self._new_segment()
            result = self.search(step.premisses[0], branch, child_segment)
            del branch[len(branch) - len(artifacts):]
            if result.kind == PROVED:
                branch.pop()
                self._put_chain(frame.node, chain + [step], result.node)
                return self._proved(s, frame.node)
            if result.kind == REFUTED:
                self.segments[child_segment] = DenierNode(
                    child_segment, result.run, result.successors,
                    result.backlink, dict(result.renaming))
                children.append(child_segment)
            elif unknown is None:
                unknown = result
        branch.pop()
        if unknown is not None:
            return unknown
        return _Result(REFUTED, run=[s], successors=children)

    def _put_chain(self, first_id, steps, last_premiss):
        ids = [first_id] + [self._reserve() for _ in steps[1:]]
        for i, step in enumerate(steps):
            child = ids[i + 1] if i + 1 < len(ids) else last_premiss
            self.builder.put(ids[i], step.conclusion, step, [child])

    def denier_tree(self, root_segment):
        tree = DenierTree(self.system, root_segment)
        keep, stack = set(), [root_segment]
        while stack:
            node_id = stack.pop()
            if node_id in keep:
                continue
            keep.add(node_id)
            stack.extend(self.segments[node_id].successors)
        tree.nodes = {k: v for k, v in self.segments.items()
                           if k in keep}
        return tree

    def certify(self, root_id):
        proof = self.builder.build(root_id)
        problems = check_local(proof)
        report = check_progress(proof)
        if problems or not report.progressing:
            logger.error("Search produced an invalid certificate: %s",
                         problems or report.witness)
            return None
        return proof


def _run(goal, cfg):
    engine = _Engine(cfg)
    result, root_segment = engine.run(goal)
    logger.debug("%s search finished after %d steps: %s",
                 cfg.system.value, engine.steps, result.kind)
    if result.kind == PROVED:
        proof = engine.certify(result.node)
        if proof is not None:
            return Provable(proof)
        if cfg.companion_policy == 'global':
            return _run(goal, replace(cfg, companion_policy='ancestors_only'))
        return Unknown('certificate rejected', engine.frontier)
    if result.kind == REFUTED:
        if cfg.system is not SystemId.mIK4:
            saturated = result.run[-1] if result.run else None
            logger.info("%s refutation reached %s", cfg.system.value,
                        saturated)
            return Refutable(None, cfg.system, saturated)
        engine.segments[root_segment] = DenierNode(
            root_segment, result.run, result.successors, result.backlink,
            dict(result.renaming))
        return Refutable(engine.denier_tree(root_segment), cfg.system)
    if result.kind == FAILED:
        return Unknown('no proof found', engine.frontier)
    return Unknown(result.reason, engine.frontier)


def prove(f, cfg=None):
    """
    Search for a cyclic proof of x0:f, or a refutation.

    IK4 runs the goal-directed single-succedent engine first; when it finds
    no proof the multi-succedent saturation engine decides between a proof
    and a Denier tree. A proof found that way is an mIK4 certificate, as
    Provable.system reports.

    Returns:
        Provable | Refutable | Unknown

    Raises:
        ConfigurationError: invalid search configuration.
    """
    cfg = (cfg or SearchConfig()).validate()
    logger.info('RUNNING prove')
    if cfg.system is SystemId.IK4:
        outcome = _run(f, cfg)
        if not isinstance(outcome, Provable):
            fallback = _run(f, replace(cfg, system=SystemId.mIK4))
            if not isinstance(fallback, Unknown) \
                    or outcome.reason == 'no proof found':
                outcome = fallback
            if isinstance(outcome, Provable):
                logger.info("IK4 search found no proof; certificate is %s",
                            outcome.system.value)
    else:
        outcome = _run(f, cfg)
    logger.info('DONE prove: %s', outcome.status)
    return outcome


def validate_denier(tree):
    """
    Check the shape of a Denier tree.

    Returns:
        list: human readable problems, empty for a well formed tree.
    """
    problems = []
    if tree.root not in tree.nodes:
        return [f"root {tree.root} missing"]
    for node in tree.nodes.values():
        if not node.run:
            problems.append(f"{node.id}: empty run")
            continue
        for s in node.run:
            if closing_step(s, SystemId.mIK4) is not None:
                problems.append(f"{node.id}: initial sequent {s}")
        last = node.saturated
        if saturation_violations(last, SystemId.mIK4):
            problems.append(f"{node.id}: run does not end saturated")
        if node.backlink is not None:
            problems += _backlink_problems(tree, node)
            continue
        expected = sorted(str(s) for s in noninvertible_expand(last))
        missing = [c for c in node.successors if c not in tree.nodes]
        if missing:
            problems.append(f"{node.id}: unknown successors {missing}")
            continue
        got = sorted(str(tree.nodes[c].run[0]) for c in node.successors)
        if got != expected:
            problems.append(
                f"{node.id}: successors {got} differ from {expected}")
    return problems


def _backlink_problems(tree, node):
    path = tree.path_to(node.id)
    if node.backlink not in path[:-1]:
        return [f"{node.id}: back-link target {node.backlink} is not an "
                f"ancestor"]
    target = tree.nodes[node.backlink]
    if _dedup(target.saturated).rename(node.renaming) \
            != _dedup(node.saturated):
        return [f"{node.id}: back-link sequents differ"]
    chain = [target.saturated]
    for segment in path[path.index(node.backlink) + 1:]:
        chain += tree.nodes[segment].run
    relation = compose(path_relation(chain),
                       backedge_relation(node.renaming, node.saturated,
                                         target.saturated))
    if loop_progresses(relation):
        return [f"{node.id}: back-link loop is progressing"]
    return []


def denier_to_json(tree):
    nodes = []
    for node in tree.nodes.values():
        item = {
            'id': node.id,
            'run': [str(s) for s in node.run],
            'successors': list(node.successors),
        }
        if node.backlink is not None:
            item['backlink'] = {'target': node.backlink,
                                'renaming': dict(sorted(
                                    node.renaming.items()))}
        nodes.append(item)
    return {'system': tree.system.value, 'root': tree.root, 'nodes': nodes}


def denier_from_json(data):
    """
    Raises:
        CertificateError: malformed Denier tree JSON.
    """
    try:
        tree = DenierTree(SystemId(data['system']), data['root'])
        for item in data['nodes']:
            backlink = item.get('backlink')
            tree.nodes[item['id']] = DenierNode(
                item['id'],
                [parse_sequent(text) for text in item['run']],
                list(item.get('successors', [])),
                backlink['target'] if backlink else None,
                dict(backlink['renaming']) if backlink else {})
    except (KeyError, TypeError, ValueError, SequentSyntaxError) as e:
        raise CertificateError(f"Malformed Denier tree: {e}") from e
    return tree


def save_denier(tree, path):
    with open(path, 'w', encoding='utf-8') as out:
        json.dump(denier_to_json(tree), out, indent=JSON_INDENT)


def load_denier(path):
    try:
        with open(path, encoding='utf-8') as source:
            data = json.load(source)
    except (OSError, json.JSONDecodeError) as e:
        raise CertificateError(f"Cannot read {path}: {e}") from e
    return denier_from_json(data)
