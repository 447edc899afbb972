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
import re
import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import networkx as nx
import pandas as pd

from global_variables import JSON_INDENT
from sequent_calculus import (
    RuleInstance,
    Sequent,
    SystemId,
    check_sequent,
    disj,
    disjuncts_of,
    entry_key,
    find_renaming,
    fresh_label,
    parse_entry,
    parse_sequent,
    rule_violations,
)

logger = logging.getLogger(__name__)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class CertificateError(ValueError):
    '''Malformed certificate JSON'''


class TransportError(RuntimeError):
    '''A proof copy could not be folded back into a finite graph'''


@dataclass(frozen=True)
class BackEdge:
    """
    Link to an equal (up to renaming) sequent elsewhere in the proof.

    renaming maps labels of the target sequent to labels of this node. A
    grown back-edge allows this node's relational context to contain extra
    atoms: it stands for the target subproof with those atoms prepended.
    """
    target: str
    renaming: Tuple[Tuple[str, str], ...]
    grown: bool = False

    @property
    def mapping(self):
        return dict(self.renaming)


def make_backedge(target, renaming, grown=False):
    return BackEdge(target, tuple(sorted(renaming.items())), grown)


@dataclass
class ProofNode:
    id: str
    sequent: Sequent
    step: Union[RuleInstance, BackEdge]
    premisses: Tuple[str, ...] = ()

    @property
    def rule(self):
        if isinstance(self.step, BackEdge):
            return 'backedge'
        return self.step.rule


@dataclass
class CyclicProof:
    system: SystemId
    root: str
    nodes: Dict[str, ProofNode] = field(default_factory=dict)

    @property
    def conclusion(self):
        return self.nodes[self.root].sequent

    def successors(self, node_id):
        node = self.nodes[node_id]
        if isinstance(node.step, BackEdge):
            return [node.step.target]
        return list(node.premisses)

    def backedges(self):
        return [n for n in self.nodes.values()
                if isinstance(n.step, BackEdge)]

    def cuts(self):
        return [n for n in self.nodes.values() if n.rule == 'cut']


@dataclass(frozen=True)
class TraceRelation:
    '''Edges (x, y, progress) from labels of source to labels of target'''
    source: str
    target: str
    edges: FrozenSet[Tuple[str, str, bool]]


@dataclass
class ProgressReport:
    progressing: bool
    witness: Optional[List[str]] = None
    loops_checked: int = 0


def _normalize(edges):
    strict = {(a, b) for a, b, progress in edges if progress}
    return frozenset(
        (a, b, progress) for a, b, progress in edges
        if progress or (a, b) not in strict)


def compose(left, right):
    '''Relational composition of edge sets, progress dominating'''
    by_source = {}
    for b, c, progress in right:
        by_source.setdefault(b, []).append((c, progress))
    result = set()
    for a, b, p1 in left:
        for c, p2 in by_source.get(b, ()):
            result.add((a, c, p1 or p2))
    return _normalize(result)


def edge_trace_relation(p, parent_id, child_id):
    """
    Trace relation along one edge of the proof graph.

    Rule edges keep persisting labels (equal) and follow xRy atoms of the
    parent into the child (progress); back-edges map each current label
    back to the target label it renames.
    """
    parent, child = p.nodes[parent_id], p.nodes[child_id]
    if isinstance(parent.step, BackEdge):
        edges = backedge_relation(
            parent.step.mapping, parent.sequent, child.sequent)
    else:
        edges = sequent_edge_relation(parent.sequent, child.sequent)
    return TraceRelation(parent_id, child_id, edges)


def sequent_edge_relation(parent, child):
    '''Trace edges of a rule step from parent to child sequent'''
    child_labels = child.labels()
    edges = {(x, x, False) for x in parent.labels() & child_labels}
    edges |= {(x, y, True) for x, y in parent.rel if y in child_labels}
    return _normalize(edges)


def backedge_relation(mapping, current, target):
    '''Trace edges of a back-edge; mapping sends target labels to current ones'''
    current_labels, target_labels = current.labels(), target.labels()
    return _normalize(
        {(b, a, False) for a, b in mapping.items()
         if b in current_labels and a in target_labels})


def path_relation(sequents):
    '''Composite trace relation along a chain of rule steps'''
    relation = _normalize({(x, x, False) for x in sequents[0].labels()})
    for parent, child in zip(sequents, sequents[1:]):
        relation = compose(relation, sequent_edge_relation(parent, child))
    return relation


def loop_progresses(relation):
    """
    Whether a single loop with the given trace relation is progressing.

    Walks the powers of the relation until one is idempotent and asks for a
    progressing self-trace there.
    """
    power, seen = relation, set()
    while power not in seen:
        seen.add(power)
        if compose(power, power) == power:
            return any(a == b and progress for a, b, progress in power)
        power = compose(power, relation)
    return False


def _premiss_graph(p):
    graph = nx.DiGraph()
    graph.add_nodes_from(p.nodes)
    for node in p.nodes.values():
        for child in node.premisses:
            graph.add_edge(node.id, child)
    return graph


def check_local(p):
    """
    Local correctness of every node of a certificate.

    Returns:
        list: violation messages, empty when the certificate is locally
        correct.
    """
    problems = []
    if p.root not in p.nodes:
        return [f"root {p.root} is not a node"]
    for node in p.nodes.values():
        missing = [c for c in p.successors(node.id) if c not in p.nodes]
        if missing:
            problems.append(f"node {node.id}: unknown successors {missing}")
    if problems:
        return problems
    graph = _premiss_graph(p)
    if not nx.is_directed_acyclic_graph(graph):
        problems.append("premiss edges contain a cycle; use back-edges")
    full = graph.copy()
    for node in p.backedges():
        full.add_edge(node.id, node.step.target)
    unreachable = set(p.nodes) - nx.descendants(full, p.root) - {p.root}
    for node_id in sorted(unreachable):
        problems.append(f"node {node_id}: not reachable from the root")
    for node in p.nodes.values():
        problems += [f"node {node.id}: {msg}"
                     for msg in check_sequent(node.sequent, p.system)]
        if isinstance(node.step, BackEdge):
            problems += [f"node {node.id}: {msg}"
                         for msg in _backedge_violations(p, node)]
            continue
        step = node.step
        if step.conclusion != node.sequent:
            problems.append(
                f"node {node.id}: rule conclusion {step.conclusion} differs "
                f"from node sequent {node.sequent}")
        problems += [f"node {node.id}: {msg}"
                     for msg in rule_violations(step, p.system)]
        children = [p.nodes[c].sequent for c in node.premisses]
        if children != list(step.premisses):
            problems.append(
                f"node {node.id}: premisses do not match the children")
    return problems


def _backedge_violations(p, node):
    edge = node.step
    target = p.nodes[edge.target]
    mapping = edge.mapping
    problems = []
    if len(set(mapping.values())) != len(mapping):
        problems.append("back-edge renaming is not injective")
    if set(mapping) != target.sequent.labels():
        problems.append(
            "back-edge renaming must be defined exactly on the target labels")
        return problems
    renamed = target.sequent.rename(mapping)
    if edge.grown:
        ok = renamed.lhs == node.sequent.lhs \
            and renamed.rhs == node.sequent.rhs \
            and renamed.rel <= node.sequent.rel
    else:
        ok = renamed == node.sequent
    if not ok:
        problems.append(
            f"sequents differ: target {edge.target} renamed is {renamed}, "
            f"node is {node.sequent}")
    return problems


def _segments(p, companion):
    """
    Composite relations from a companion along premiss edges to each
    back-edge, then across it.

    Yields:
        (target, relation, path) with path a list of node ids from the
        companion through the back-edge node to its target.
    """
    graph = _premiss_graph(p)
    reachable = nx.descendants(graph, companion) | {companion}
    order = list(nx.topological_sort(graph.subgraph(reachable)))
    labels = p.nodes[companion].sequent.labels()
    start = frozenset((a, a, False) for a in labels)
    rels = {companion: {start: None}}
    for node_id in order:
        node = p.nodes[node_id]
        for relation, _pointer in list(rels.get(node_id, {}).items()):
            if isinstance(node.step, BackEdge):
                edge = edge_trace_relation(p, node_id, node.step.target)
                path = _walk_back(rels, node_id, relation)
                yield (node.step.target, compose(relation, edge.edges),
                       path + [node.step.target])
                continue
            for child in node.premisses:
                edge = edge_trace_relation(p, node_id, child)
                composed = compose(relation, edge.edges)
                rels.setdefault(child, {})
                if composed not in rels[child]:
                    rels[child][composed] = (node_id, relation)


def _walk_back(rels, node_id, relation):
    path = [node_id]
    pointer = rels[node_id][relation]
    while pointer is not None:
        node_id, relation = pointer
        path.append(node_id)
        pointer = rels[node_id][relation]
    return list(reversed(path))


def check_progress(p):
    """
    Decide the progress condition with the idempotent-loop criterion.

    Every cycle of the finite graph passes through a back-edge target.
    Composite trace relations between targets are closed under composition;
    the proof progresses iff each idempotent loop relation has a
    progressing self-pair (v, v, progress).

    Returns:
        ProgressReport: with a witness cycle of node ids on failure.
    """
    companions = sorted({n.step.target for n in p.backedges()})
    if not companions:
        return ProgressReport(True)
    closure = {}
    work = []
    for companion in companions:
        for target, relation, path in _segments(p, companion):
            key = (companion, target, relation)
            if key not in closure:
                closure[key] = path
                work.append(key)
    while work:
        a, b, rel_ab = work.pop()
        path_ab = closure[(a, b, rel_ab)]
        for (c, d, rel_cd), path_cd in list(closure.items()):
            candidates = []
            if c == b:
                candidates.append(
                    ((a, d, compose(rel_ab, rel_cd)), path_ab + path_cd[1:]))
            if d == a:
                candidates.append(
                    ((c, b, compose(rel_cd, rel_ab)), path_cd + path_ab[1:]))
            for key, path in candidates:
                if key not in closure:
                    closure[key] = path
                    work.append(key)
    loops = 0
    for (a, b, relation), path in sorted(
            closure.items(), key=lambda item: (len(item[1]), item[0][:2])):
        if a != b or compose(relation, relation) != relation:
            continue
        loops += 1
        if not any(x == y and progress for x, y, progress in relation):
            logger.debug("Non-progressing loop through %s", path)
            return ProgressReport(False, path, loops)
    return ProgressReport(True, None, loops)


# Copying proofs under renamings, prepended atoms and replacements

@dataclass(frozen=True)
class Transform:
    """
    How a source node is read in an output proof.

    renaming maps source labels to output labels, extra holds relational
    atoms (output labels) prepended to the context, replacements list
    (entry, lo, hi): one left occurrence of entry (source labels) is read
    as its slice of disjuncts [lo:hi].
    """
    renaming: Tuple[Tuple[str, str], ...] = ()
    extra: FrozenSet[Tuple[str, str]] = frozenset()
    replacements: Tuple[Tuple[object, int, int], ...] = ()

    @property
    def mapping(self):
        return dict(self.renaming)

    @staticmethod
    def identity(labels, extra=frozenset(), replacements=()):
        return Transform(tuple(sorted((a, a) for a in labels)),
                         frozenset(extra), sort_replacements(replacements))


def sort_replacements(replacements):
    return tuple(sorted(replacements,
                        key=lambda r: (entry_key(r[0]), r[1], r[2])))


def _stem(label):
    return re.sub(r'\d+$', '', label) or label


def sliced(entry, lo, hi):
    return disj(disjuncts_of(entry)[lo:hi])


def transformed_sequent(sequent, transform):
    lhs = list(sequent.lhs)
    added = []
    for entry, lo, hi in transform.replacements:
        lhs.remove(entry)
        added.append(sliced(entry, lo, hi))
    mapping = transform.mapping
    out = Sequent(sequent.rel, tuple(lhs) + tuple(added),
                  sequent.rhs).rename(mapping)
    return out.with_rel(out.rel | transform.extra)


class ProofBuilder:
    '''Collects output nodes while a proof is assembled'''

    def __init__(self, system):
        self.system = system
        self.nodes = {}
        self._reserved = set()

    def reserve(self, hint):
        base = hint or 'n'
        candidate, index = base, 0
        while candidate in self.nodes or candidate in self._reserved:
            index += 1
            candidate = f'{base}_{index}'
        self._reserved.add(candidate)
        return candidate

    def put(self, node_id, sequent, step, premisses=()):
        self._reserved.discard(node_id)
        self.nodes[node_id] = ProofNode(node_id, sequent, step,
                                        tuple(premisses))
        return node_id

    def add(self, hint, step, premisses=()):
        node_id = self.reserve(hint)
        return self.put(node_id, step.conclusion, step, premisses)

    def backedge(self, hint, sequent, target, renaming, grown=False):
        node_id = self.reserve(hint)
        return self.put(node_id, sequent,
                        make_backedge(target, renaming, grown))

    def sequent(self, node_id):
        return self.nodes[node_id].sequent

    def build(self, root):
        '''The proof rooted at root, unreachable nodes dropped'''
        proof = CyclicProof(self.system, root, dict(self.nodes))
        seen, stack = set(), [root]
        while stack:
            node_id = stack.pop()
            if node_id in seen:
                continue
            seen.add(node_id)
            stack.extend(proof.successors(node_id))
        proof.nodes = {k: v for k, v in self.nodes.items() if k in seen}
        return proof


def rename_step(step, conclusion, premisses, mapping, principal=None):
    '''A rule instance read through a label mapping'''
    def entry(e):
        return e.rename(mapping)
    if principal is None:
        principal = tuple((side, entry(e)) for side, e in step.principal)
    witness = None
    if step.witness is not None:
        witness = tuple(mapping[a] for a in step.witness)
    generalized = step.generalized or (
        step.rule == 'id' and (len(conclusion.lhs) > 1
                               or len(conclusion.rhs) > 1))
    return RuleInstance(
        step.rule, conclusion, tuple(premisses), principal,
        fresh=mapping.get(step.fresh) if step.fresh else None,
        witness=witness,
        atoms=frozenset((mapping[a], mapping[b]) for a, b in step.atoms),
        choice=step.choice, split=step.split,
        cut_formula=entry(step.cut_formula) if step.cut_formula else None,
        generalized=generalized)


class Transport:
    """
    Copies a source proof into a builder, node by node, under transforms.

    Thinning steps can be spliced out (their atoms become prepended extras)
    and left disjunctions can be replaced by slices. Back-edges of the
    source are folded onto already copied states whose sequents embed into
    the current one, giving (possibly grown) back-edges in the output.
    """

    def __init__(self, builder, proof, splice_thinning=False,
                 max_active=2000):
        self.builder = builder
        self.proof = proof
        self.splice_thinning = splice_thinning
        self.max_active = max_active
        self.memo = {}
        self.by_node = {}
        self.active = []

    def output_sequent(self, node_id, transform):
        return transformed_sequent(self.proof.nodes[node_id].sequent,
                                   transform)

    def copy_root(self, extra=frozenset(), replacements=(), node_id=None):
        node_id = node_id or self.proof.root
        labels = self.proof.nodes[node_id].sequent.labels()
        return self.copy(node_id,
                         Transform.identity(labels, extra, replacements))

    def copy(self, node_id, transform):
        node_id, transform = self._resolve(node_id, transform)
        key = (node_id, transform)
        if key in self.memo:
            target = self.memo[key]
            sequent = self.builder.sequent(target)
            return self.builder.backedge(
                node_id, sequent, target, {a: a for a in sequent.labels()})
        node = self.proof.nodes[node_id]
        if isinstance(node.step, BackEdge):
            return self._copy_backedge(node, transform)
        if len(self.active) > self.max_active:
            raise TransportError(
                f"Copy of {node_id} did not fold within {self.max_active} "
                "nested states")
        out_id = self.builder.reserve(node_id)
        self.memo[key] = out_id
        self.by_node.setdefault(node_id, []).append(key)
        self.active.append(key)
        try:
            step, children = self._plan(node, transform)
            outs = [self.copy(child, child_t) for child, child_t in children]
        finally:
            self.active.pop()
        premisses = [self.builder.sequent(o) for o in outs]
        step = RuleInstance(step.rule, step.conclusion, tuple(premisses),
                            step.principal, step.fresh, step.witness,
                            step.atoms, step.choice, step.split,
                            step.cut_formula, step.generalized)
        self.builder.put(out_id, step.conclusion, step, outs)
        return out_id

    def _resolve(self, node_id, transform):
        '''Skip spliced steps: thinning and dis-orL inside one slice'''
        while True:
            node = self.proof.nodes[node_id]
            step = node.step
            if isinstance(step, BackEdge):
                return node_id, transform
            if step.rule == 'th' and self.splice_thinning:
                mapping = transform.mapping
                child = node.premisses[0]
                extra = transform.extra | {
                    (mapping[a], mapping[b]) for a, b in step.atoms}
                transform = self._child_transform(
                    mapping, self.proof.nodes[child].sequent, extra,
                    transform.replacements)
                node_id = child
                continue
            if step.rule == 'dis-orL':
                spliced = self._splice_dis_or(node, transform)
                if spliced is not None:
                    node_id, transform = spliced
                    continue
            return node_id, transform

    def _principal_replacement(self, step, transform):
        principal = [e for side, e in step.principal if side == 'L']
        for index, (entry, lo, hi) in enumerate(transform.replacements):
            if principal and entry == principal[0]:
                rest = transform.replacements[:index] \
                    + transform.replacements[index + 1:]
                return (entry, lo, hi), rest
        return None, transform.replacements

    def _splice_dis_or(self, node, transform):
        step = node.step
        found, rest = self._principal_replacement(step, transform)
        if found is None:
            return None
        entry, lo, hi = found
        parts, k = disjuncts_of(entry), step.split
        if hi <= k:
            child, part, new, width = node.premisses[0], parts[:k], (lo, hi), k
        elif lo >= k:
            child, part = node.premisses[1], parts[k:]
            new, width = (lo - k, hi - k), len(parts) - k
        else:
            return None
        part = disj(part)
        replacements = rest
        if new != (0, width):
            replacements = rest + ((part, new[0], new[1]),)
        return child, self._child_transform(
            transform.mapping, self.proof.nodes[child].sequent,
            transform.extra, replacements)

    def _child_transform(self, mapping, premiss, extra, replacements):
        renaming = tuple(sorted((a, mapping[a]) for a in premiss.labels()))
        return Transform(renaming, frozenset(extra),
                         sort_replacements(replacements))

    def _plan(self, node, transform):
        """
        Output rule instance (premisses filled later) and the child states.
        """
        step = node.step
        conclusion = self.output_sequent(node.id, transform)
        mapping = transform.mapping
        if step.fresh:
            used = conclusion.labels() | set(mapping.values())
            out_fresh = step.fresh
            if out_fresh in used:
                out_fresh = fresh_label(used, _stem(step.fresh))
            mapping[step.fresh] = out_fresh
        premisses = [self.proof.nodes[c].sequent for c in node.premisses]
        found, context = self._principal_replacement(step, transform)
        routed = self._route_context(step, premisses, context)
        principal = None
        if found is not None and step.rule in ('wL', 'cL', 'dis-orL'):
            entry, lo, hi = found
            principal = (('L', sliced(entry, lo, hi).rename(mapping)),)
            if step.rule == 'cL':
                routed[0] = routed[0] + [found, found]
            elif step.rule == 'dis-orL':
                k = step.split
                head = disj(disjuncts_of(entry)[:k])
                tail = disj(disjuncts_of(entry)[k:])
                if lo > 0:
                    routed[0] = routed[0] + [(head, lo, k)]
                if hi < len(disjuncts_of(entry)):
                    routed[1] = routed[1] + [(tail, 0, hi - k)]
                step = RuleInstance(
                    step.rule, step.conclusion, step.premisses,
                    step.principal, split=k - lo)
        elif found is not None:
            routed = self._route_context(step, premisses,
                                         transform.replacements)
        out_step = rename_step(step, conclusion, (), mapping, principal)
        children = [
            (child, self._child_transform(mapping, premiss, transform.extra,
                                          routed[i]))
            for i, (child, premiss) in enumerate(zip(node.premisses,
                                                     premisses))]
        return out_step, children

    def _route_context(self, step, premisses, replacements):
        routed = [[] for _ in premisses]
        if not replacements:
            return routed
        if step.rule in ('impL', 'cut'):
            introduced = [Counter(), Counter()]
            if step.rule == 'cut':
                introduced[1][step.cut_formula] += 1
            else:
                entry = step.principal[0][1]
                introduced[1][type(entry)(entry.label,
                                          entry.formula.right)] += 1
            avail = [Counter(p.lhs) - introduced[i]
                     for i, p in enumerate(premisses)]
            for replacement in replacements:
                for i, counts in enumerate(avail):
                    if counts[replacement[0]] > 0:
                        counts[replacement[0]] -= 1
                        routed[i].append(replacement)
                        break
            return routed
        for i, premiss in enumerate(premisses):
            counts = Counter(premiss.lhs)
            for replacement in replacements:
                if counts[replacement[0]] > 0:
                    counts[replacement[0]] -= 1
                    routed[i].append(replacement)
        return routed

    def _copy_backedge(self, node, transform):
        edge = node.step
        rho = edge.mapping
        target = self.proof.nodes[edge.target]
        mapping = transform.mapping
        renaming = {a: mapping[rho[a]] for a in target.sequent.labels()}
        extra = set(transform.extra)
        if edge.grown:
            inside = {(rho[a], rho[b]) for a, b in target.sequent.rel}
            extra |= {(mapping[a], mapping[b])
                      for a, b in node.sequent.rel - inside}
        inverse = {v: k for k, v in rho.items()}
        replacements = [(e.rename(inverse), lo, hi)
                        for e, lo, hi in transform.replacements]
        target_t = Transform(tuple(sorted(renaming.items())),
                             frozenset(extra),
                             sort_replacements(replacements))
        target_id, target_t = self._resolve(edge.target, target_t)
        current = self.output_sequent(target_id, target_t)
        key = (target_id, target_t)
        if key in self.memo:
            out = self.memo[key]
            return self.builder.backedge(
                node.id, current, out, {a: a for a in current.labels()})
        folded = self._fold(target_id, target_t, current)
        if folded is not None:
            out, sigma, grown = folded
            return self.builder.backedge(node.id, current, out, sigma, grown)
        logger.debug("Unrolling back-edge %s -> %s", node.id, edge.target)
        return self.copy(target_id, target_t)

    def _fold(self, node_id, transform, current):
        keys = self.by_node.get(node_id, [])
        active = [k for k in keys if k in self.active]
        finished = [k for k in keys if k not in self.active]
        mapping = transform.mapping
        for key in active + finished:
            old = key[1].mapping
            seed = {old[a]: mapping[a] for a in old if a in mapping}
            candidate = self.output_sequent(*key)
            sigma = find_renaming(candidate, current, 'grown', seed)
            if sigma is None:
                continue
            grown = candidate.rename(sigma).rel != current.rel
            return self.memo[key], sigma, grown
        return None


def eliminate_thinning(p):
    """
    Remove every th step, keeping the removed atoms in all contexts above.

    Returns:
        CyclicProof: th-free proof of the same conclusion.

    Raises:
        TransportError: the copy could not be folded back, or progress was
        lost.
    """
    logger.info('RUNNING eliminate_thinning')
    builder = ProofBuilder(p.system)
    transport = Transport(builder, p, splice_thinning=True)
    root = transport.copy_root()
    out = builder.build(root)
    if check_progress(p).progressing and not check_progress(out).progressing:
        raise TransportError("Thinning elimination lost progress")
    logger.info('DONE eliminate_thinning')
    return out


@dataclass
class UnfoldNode:
    position: Tuple[int, ...]
    origin: str
    sequent: Sequent
    rule: str
    transform: Transform
    children: List['UnfoldNode'] = field(default_factory=list)

    @property
    def closed(self):
        '''True at axioms, False at positions cut off by the depth bound'''
        return not self.children and self.rule in ('id', 'botL')

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def _follow_backedges(p, node_id, transform):
    '''Resolve chains of back-edges to the rule node they stand for'''
    for _ in range(len(p.nodes) + 1):
        node = p.nodes[node_id]
        if not isinstance(node.step, BackEdge):
            return node_id, transform
        edge = node.step
        rho = edge.mapping
        target = p.nodes[edge.target]
        mapping = transform.mapping
        extra = set(transform.extra)
        if edge.grown:
            inside = {(rho[a], rho[b]) for a, b in target.sequent.rel}
            extra |= {(mapping[a], mapping[b])
                      for a, b in node.sequent.rel - inside}
        transform = Transform(
            tuple(sorted((a, mapping[rho[a]])
                         for a in target.sequent.labels())),
            frozenset(extra))
        node_id = edge.target
    raise CertificateError(f"Back-edge cycle without rules at {node_id}")


def unfold(p, depth):
    """
    Depth-bounded unfolding of the proof graph into a tree.

    Back-edges are expanded in place (they do not count as a step) with
    their renamings applied; fresh labels are renamed apart when a renamed
    context already uses them.

    Returns:
        UnfoldNode: the root of the finite tree.
    """
    builder_transport = Transport(ProofBuilder(p.system), p)

    def expand(node_id, transform, position, remaining):
        node_id, transform = _follow_backedges(p, node_id, transform)
        node = p.nodes[node_id]
        sequent = transformed_sequent(node.sequent, transform)
        tree = UnfoldNode(position, node_id, sequent, node.rule, transform)
        if remaining == 0:
            return tree
        _step, children = builder_transport._plan(node, transform)
        for index, (child, child_t) in enumerate(children):
            tree.children.append(
                expand(child, child_t, position + (index,), remaining - 1))
        return tree

    root_labels = p.nodes[p.root].sequent.labels()
    return expand(p.root, Transform.identity(root_labels), (), depth)


# Serialization

def step_to_json(step):
    data = {'rule': step.rule,
            'principal': [[side, str(e)] for side, e in step.principal]}
    if step.fresh is not None:
        data['fresh'] = step.fresh
    if step.witness is not None:
        data['witness'] = list(step.witness)
    if step.atoms:
        data['atoms'] = [list(a) for a in sorted(step.atoms)]
    if step.choice is not None:
        data['choice'] = step.choice
    if step.split is not None:
        data['split'] = step.split
    if step.cut_formula is not None:
        data['cut_formula'] = str(step.cut_formula)
    if step.generalized:
        data['generalized'] = True
    return data


def proof_to_json(p):
    nodes = []
    for node in p.nodes.values():
        if isinstance(node.step, BackEdge):
            data = {'id': node.id, 'sequent': str(node.sequent),
                    'rule': 'backedge', 'premisses': [], 'principal': [],
                    'backedge': {'target': node.step.target,
                                 'renaming': node.step.mapping}}
            if node.step.grown:
                data['backedge']['grown'] = True
        else:
            data = {'id': node.id, 'sequent': str(node.sequent)}
            data.update(step_to_json(node.step))
            data['premisses'] = list(node.premisses)
        nodes.append(data)
    return {'system': p.system.value, 'root': p.root, 'nodes': nodes}


def proof_from_json(data):
    """
    Rebuild a certificate from its JSON form.

    Raises:
        CertificateError: missing fields, unknown ids or bad syntax.
    """
    try:
        system = SystemId(data['system'])
        sequents = {n['id']: parse_sequent(n['sequent'])
                    for n in data['nodes']}
        proof = CyclicProof(system, data['root'])
        for n in data['nodes']:
            sequent = sequents[n['id']]
            if n['rule'] == 'backedge':
                edge = n['backedge']
                step = make_backedge(edge['target'], edge['renaming'],
                                     bool(edge.get('grown', False)))
                proof.nodes[n['id']] = ProofNode(n['id'], sequent, step)
                continue
            premisses = tuple(n.get('premisses', []))
            step = RuleInstance(
                n['rule'], sequent,
                tuple(sequents[c] for c in premisses),
                tuple((side, parse_entry(text))
                      for side, text in n.get('principal', [])),
                fresh=n.get('fresh'),
                witness=tuple(n['witness']) if 'witness' in n else None,
                atoms=frozenset(tuple(a) for a in n.get('atoms', [])),
                choice=n.get('choice'), split=n.get('split'),
                cut_formula=(parse_entry(n['cut_formula'])
                             if 'cut_formula' in n else None),
                generalized=bool(n.get('generalized', False)))
            proof.nodes[n['id']] = ProofNode(n['id'], sequent, step,
                                             premisses)
        return proof
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateError(f"Invalid certificate: {e}") from e


def load_proof(path):
    with open(path, encoding='utf-8') as proof_json:
        return proof_from_json(json.load(proof_json))


def save_proof(p, path):
    with open(path, 'w', encoding='utf-8') as proof_json:
        json.dump(proof_to_json(p), proof_json, indent=JSON_INDENT)


def proof_table(p):
    '''One row per node for pretty printing'''
    rows = [{'id': n.id, 'rule': n.rule,
             'premisses': ' '.join(p.successors(n.id)),
             'sequent': str(n.sequent)} for n in p.nodes.values()]
    return pd.DataFrame(rows, columns=['id', 'rule', 'premisses', 'sequent'])


def to_dot(p):
    """
    DOT rendering of the proof graph; edges carrying a progress pair are
    drawn red and back-edges dashed.
    """
    lines = ['digraph proof {', '  node [shape=box, fontname="monospace"];']
    for node in p.nodes.values():
        label = f'{node.id}: {node.rule}\\n{node.sequent}'
        lines.append(f'  "{node.id}" [label="{label}"];')
    for node in p.nodes.values():
        for child in p.successors(node.id):
            relation = edge_trace_relation(p, node.id, child)
            attrs = []
            if isinstance(node.step, BackEdge):
                renaming = ', '.join(f'{a}:{b}'
                                     for a, b in node.step.renaming)
                attrs += ['style=dashed', f'label="{renaming}"']
            if any(progress for _a, _b, progress in relation.edges):
                attrs.append('color=red')
            suffix = f' [{", ".join(attrs)}]' if attrs else ''
            lines.append(f'  "{node.id}" -> "{child}"{suffix};')
    lines.append('}')
    return '\n'.join(lines) + '\n'
