#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import itertools
import logging

import networkx as nx
import numpy as np

from cyclic_proof import BackEdge, ProofBuilder
from more_itertools import powerset

from formula import BOTTOM, And, Atom, Box, Dia, Imp, Or, neg
from global_variables import DEFAULT_SEED, ROOT_LABEL
from semantics import (
    BirelModel,
    KripkeStructure,
    check_igl_birel_class,
    check_igl_pred_class,
    interpretation_violations,
    kripke_violations,
    model_violations,
    seq_satisfied,
)
from sequent_calculus import (
    LabelledFormula,
    RuleError,
    RuleInstance,
    Sequent,
    SystemId,
    applicable_rules,
)

logger = logging.getLogger(__name__)

ATOMS = ('p', 'q')


def make_rng(seed=None):
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def random_formula(rng, max_depth, atoms=ATOMS):
    '''Uniform choice of connective at each level, atoms at depth 0'''
    if max_depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return BOTTOM
        return Atom(str(rng.choice(atoms)))
    kind = int(rng.integers(7))
    if kind == 0:
        return neg(random_formula(rng, max_depth - 1, atoms))
    if kind == 1:
        return Box(random_formula(rng, max_depth - 1, atoms))
    if kind == 2:
        return Dia(random_formula(rng, max_depth - 1, atoms))
    left = random_formula(rng, max_depth - 1, atoms)
    right = random_formula(rng, max_depth - 1, atoms)
    return (And, Or, Imp, Imp)[kind - 3](left, right)


def formula_corpus(n, seed=None, max_depth=3, atoms=ATOMS):
    rng = make_rng(seed)
    return [random_formula(rng, max_depth, atoms) for _ in range(n)]

    '''k, 4 and Lob instances over the atoms and their negations'''
def axiom_instances(atoms=ATOMS):
    '''Instances of the k, 4 and Lob schemas over the atoms and their negations'''
    bases = [Atom(a) for a in atoms]
    bases += [neg(b) for b in bases]
    instances = []
    for a in bases:
        instances.append(Imp(Box(a), Box(Box(a))))
        instances.append(Imp(Box(Imp(Box(a), a)), Box(a)))
        instances += [Imp(Box(Imp(a, b)), Imp(Box(a), Box(b)))
                      for b in bases if b != a]
    return instances


def soundness_corpus(n, seed=None, max_depth=3, atoms=ATOMS):
    '''n formulas: the axiom instances first, then random ones'''
    axioms = axiom_instances(atoms)[:n]
    return axioms + formula_corpus(n - len(axioms), seed, max_depth, atoms)


def _closure(pairs, n, reflexive):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(pairs)
    closed = set(nx.transitive_closure(graph, reflexive=False).edges())
    if reflexive:
        closed |= {(i, i) for i in range(n)}
    return closed


def _up_closed(leq, chosen):
    return {b for a, b in leq if a in chosen}


def random_igl_model(rng, n_worlds, atoms=ATOMS, attempts=200):
    """
    Rejection sampling of an IGL birelational model.

    Both relations are drawn forwards along the world order, so leq is a
    partial order and R is transitive and conversely well-founded; the frame
    conditions decide acceptance.

    Returns:
        BirelModel, or None when no sample passed within attempts.
    """
    names = tuple(f'w{i}' for i in range(n_worlds))
    forward = [(a, b) for a in range(n_worlds)
               for b in range(a + 1, n_worlds)]
    for _ in range(attempts):
        leq = _closure([e for e in forward if rng.random() < 0.4],
                       n_worlds, reflexive=True)
        acc = _closure([e for e in forward if rng.random() < 0.4],
                       n_worlds, reflexive=False)
        val = {}
        for atom in atoms:
            seeds = {i for i in range(n_worlds) if rng.random() < 0.3}
            for i in _up_closed(leq, seeds):
                val.setdefault(names[i], set()).add(atom)
        m = BirelModel(names,
                       frozenset((names[a], names[b]) for a, b in leq),
                       frozenset((names[a], names[b]) for a, b in acc),
                       val)
        if not model_violations(m) and check_igl_birel_class(m).ok:
            return m
    return None


def model_sample(n, max_worlds, atoms=ATOMS, seed=None):
    '''Yield n random IGL models of 1..max_worlds worlds'''
    rng = make_rng(seed)
    produced = 0
    while produced < n:
        m = random_igl_model(rng, int(rng.integers(1, max_worlds + 1)), atoms)
        if m is not None:
            produced += 1
            yield m


def random_kripke(rng, n_worlds, max_domain=2, atoms=ATOMS, attempts=200):
    """
    Rejection sampling of a monotone Kripke structure: domains, predicates
    and R grow along leq.

    Returns:
        KripkeStructure, or None when no sample passed within attempts.
    """
    names = tuple(f'w{i}' for i in range(n_worlds))
    forward = [(a, b) for a in range(n_worlds)
               for b in range(a + 1, n_worlds)]
    elements = [f'd{j}' for j in range(max_domain)]
    for _ in range(attempts):
        leq = _closure([e for e in forward if rng.random() < 0.5],
                       n_worlds, reflexive=True)
        domain, pred, rel = {}, {}, {}
        for i in range(n_worlds):
            below = [a for a, b in leq if b == i and a != i]
            base = set().union(*(domain[names[a]] for a in below)) \
                if below else {elements[0]}
            domain[names[i]] = base | {d for d in elements
                                       if rng.random() < 0.3}
            table = {}
            for atom in atoms:
                inherited = set().union(
                    *(pred[names[a]].get(atom, set()) for a in below)) \
                    if below else set()
                table[atom] = inherited | {d for d in domain[names[i]]
                                           if rng.random() < 0.3}
            pred[names[i]] = table
            inherited = set().union(*(rel[names[a]] for a in below)) \
                if below else set()
            ordered = sorted(domain[names[i]])
            fresh = {(d, e) for d, e in itertools.combinations(ordered, 2)
                     if rng.random() < 0.3}
            rel[names[i]] = inherited | fresh
        k = KripkeStructure(names,
                            frozenset((names[a], names[b]) for a, b in leq),
                            domain, pred, rel)
        if not kripke_violations(k):
            return k
    return None


def _world_options(domain, atoms):
    '''Every predicate table and R relation on one domain'''
    elements = sorted(domain)
    tables = itertools.product(
        *[list(powerset(elements)) for _ in atoms])
    tables = [dict(zip(atoms, map(frozenset, choice))) for choice in tables]
    relations = [frozenset(r) for r in
                 powerset(itertools.product(elements, repeat=2))]
    return list(itertools.product(tables, relations))


def enumerate_kripke(max_worlds, max_domain, atoms=ATOMS):
    """
    Every IGL Kripke structure whose worlds form a chain w0 <= w1 <= ...,
    with at most max_worlds worlds and domains drawn from d0, d1, ...

    Structures with an unordered pair of worlds evaluate like their
    one-world parts, so with max_worlds <= 2 this covers every structure
    up to that size.

    Yields:
        KripkeStructure
    """
    atoms = sorted(atoms)
    elements = [f'd{j}' for j in range(max_domain)]
    domains = [frozenset(c) for c in powerset(elements) if c]
    for n in range(1, max_worlds + 1):
        names = tuple(f'w{i}' for i in range(n))
        leq = frozenset((names[a], names[b])
                        for a in range(n) for b in range(a, n))
        for chain in itertools.product(domains, repeat=n):
            if any(not a <= b for a, b in zip(chain, chain[1:])):
                continue
            options = [_world_options(d, atoms) for d in chain]
            for choice in itertools.product(*options):
                k = KripkeStructure(
                    names, leq, dict(zip(names, chain)),
                    {w: table for w, (table, _) in zip(names, choice)},
                    {w: rel for w, (_, rel) in zip(names, choice)})
                if not kripke_violations(k) and check_igl_pred_class(k).ok:
                    yield k


def random_sequent(rng, labels=(ROOT_LABEL, 'y0'), max_depth=2,
                   atoms=ATOMS, single=True):
    rel = {(labels[0], b) for b in labels[1:] if rng.random() < 0.7}
    lhs = tuple(LabelledFormula(str(rng.choice(labels)),
                                random_formula(rng, max_depth, atoms))
                for _ in range(int(rng.integers(0, 3))))
    width = 1 if single else int(rng.integers(1, 3))
    rhs = tuple(LabelledFormula(str(rng.choice(labels)),
                                random_formula(rng, max_depth, atoms))
                for _ in range(width))
    return Sequent(frozenset(rel), lhs, rhs)


def failing_interpretations(m, s):
    '''Every interpretation of the labels of s into m falsifying s'''
    labels = sorted(s.labels())
    for worlds in itertools.product(m.worlds, repeat=len(labels)):
        i = dict(zip(labels, worlds))
        if not interpretation_violations(m, s, i) \
                and not seq_satisfied(m, i, s):
            yield i


def local_soundness_cases(n, seed=None, system=SystemId.IK4,
                          max_worlds=3):
    """
    Yield n triples (model, rule instance, interpretation) where the
    interpretation falsifies the conclusion of the instance.
    """
    rng = make_rng(seed)
    produced = 0
    while produced < n:
        m = random_igl_model(rng, int(rng.integers(1, max_worlds + 1)))
        if m is None:
            continue
        s = random_sequent(rng, single=system.single_succedent)
        try:
            rules = [r for r in applicable_rules(s, system)
                     if r.rule != 'cut']
        except RuleError:
            continue
        if not rules:
            continue
        r = rules[int(rng.integers(len(rules)))]
        i = next(failing_interpretations(m, s), None)
        if i is None:
            continue
        produced += 1
        yield m, r, i


def insert_leaf_thinning(p, rng):
    """
    Copy of p where some axiom leaves with a relational context sit under a
    th step removing part of it.
    """
    builder = ProofBuilder(p.system)
    builder.nodes = dict(p.nodes)
    for node in list(p.nodes.values()):
        if isinstance(node.step, BackEdge) or node.rule not in ('id', 'botL'):
            continue
        rel = sorted(node.sequent.rel)
        if not rel or rng.random() < 0.5:
            continue
        atoms = frozenset(a for a in rel if rng.random() < 0.5) \
            or frozenset(rel[:1])
        thinned = node.sequent.with_rel(node.sequent.rel - atoms)
        leaf = RuleInstance(node.step.rule, thinned, (),
                            node.step.principal,
                            generalized=node.step.generalized)
        leaf_id = builder.add(f'{node.id}_th', leaf)
        step = RuleInstance('th', node.sequent, (thinned,), atoms=atoms)
        builder.put(node.id, node.sequent, step, [leaf_id])
    return builder.build(p.root)
