#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import itertools
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from config import DATA_DIR
from formula import And, Atom, Bottom, Box, Dia, Imp, Or
from global_variables import JSON_INDENT
from sequent_calculus import (
    disjuncts_of,
    is_quasi_tree_like,
)

logger = logging.getLogger(__name__)


class ModelError(ValueError):
    '''Invalid model, unknown world, bad interpretation or failed lift'''


@dataclass
class BirelModel:
    """
    Finite birelational model.

    leq is the intuitionistic preorder (expected to be a partial order),
    acc the modal relation, val the atoms true at each world.
    """
    worlds: Tuple[str, ...]
    leq: FrozenSet[Tuple[str, str]]
    acc: FrozenSet[Tuple[str, str]]
    val: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.leq = frozenset(tuple(p) for p in self.leq)
        self.acc = frozenset(tuple(p) for p in self.acc)
        self.val = {w: frozenset(self.val.get(w, ())) for w in self.worlds}

    def above(self, w):
        '''Worlds w' with w <= w', in world order'''
        return [v for v in self.worlds if (w, v) in self.leq]

    def successors(self, w):
        return [v for v in self.worlds if (w, v) in self.acc]

    def matrices(self):
        '''Boolean leq and acc matrices indexed by world order'''
        index = {w: i for i, w in enumerate(self.worlds)}
        n = len(self.worlds)
        leq, acc = np.zeros((n, n), dtype=bool), np.zeros((n, n), dtype=bool)
        for a, b in self.leq:
            leq[index[a], index[b]] = True
        for a, b in self.acc:
            acc[index[a], index[b]] = True
        return leq, acc


@dataclass
class KripkeStructure:
    """
    Intuitionistic first-order Kripke structure over R and unary
    predicates: per-world domains, predicate tables and R relations.
    """
    worlds: Tuple[str, ...]
    leq: FrozenSet[Tuple[str, str]]
    domain: Dict[str, FrozenSet[str]]
    pred: Dict[str, Dict[str, FrozenSet[str]]]
    rel: Dict[str, FrozenSet[Tuple[str, str]]]

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.leq = frozenset(tuple(p) for p in self.leq)
        self.domain = {w: frozenset(self.domain.get(w, ()))
                       for w in self.worlds}
        self.pred = {w: {p: frozenset(ds) for p, ds in
                         (self.pred.get(w) or {}).items()}
                     for w in self.worlds}
        self.rel = {w: frozenset(tuple(p) for p in self.rel.get(w, ()))
                    for w in self.worlds}

    def above(self, w):
        return [v for v in self.worlds if (w, v) in self.leq]


@dataclass
class Environment:
    world: str
    values: Dict[str, str]


@dataclass
class ClassCheck:
    ok: bool
    reason: str = ''
    witness: Optional[List] = None


def _partial_order_violations(worlds, leq):
    problems = []
    known = set(worlds)
    for a, b in leq:
        if a not in known or b not in known:
            problems.append(f"leq mentions unknown world in {a} <= {b}")
    for w in worlds:
        if (w, w) not in leq:
            problems.append(f"leq is not reflexive at {w}")
    for a, b in leq:
        if a != b and (b, a) in leq:
            problems.append(f"leq is not antisymmetric on {a}, {b}")
        for b2, c in leq:
            if b == b2 and (a, c) not in leq:
                problems.append(f"leq is not transitive on {a} <= {b} <= {c}")
    return problems


def model_violations(m):
    """
    Partial order, frame conditions F1 / F2 and monotone valuation.

    Returns:
        list: violations, empty for a valid birelational model.
    """
    problems = _partial_order_violations(m.worlds, m.leq)
    known = set(m.worlds)
    if any(a not in known or b not in known for a, b in m.acc):
        problems.append("acc mentions an unknown world")
    if problems:
        return problems
    leq, acc = m.matrices()
    names = m.worlds
    for w, w2, v in zip(*np.nonzero(leq[:, :, None] & acc[:, None, :])):
        if not (leq[v, :] & acc[w2, :]).any():
            problems.append(
                f"F1 fails: {names[w]} <= {names[w2]}, {names[w]} R "
                f"{names[v]}")
    for w, v, v2 in zip(*np.nonzero(acc[:, :, None] & leq[None, :, :])):
        if not (leq[w, :] & acc[:, v2]).any():
            problems.append(
                f"F2 fails: {names[w]} R {names[v]}, {names[v]} <= "
                f"{names[v2]}")
    for a, b in m.leq:
        if not m.val[a] <= m.val[b]:
            problems.append(f"valuation not monotone on {a} <= {b}")
    return problems


def kripke_violations(k):
    problems = _partial_order_violations(k.worlds, k.leq)
    for w in k.worlds:
        if not k.domain[w]:
            problems.append(f"empty domain at {w}")
        for p, ds in k.pred[w].items():
            if not ds <= k.domain[w]:
                problems.append(f"{p} at {w} leaves the domain")
        if any(a not in k.domain[w] or b not in k.domain[w]
               for a, b in k.rel[w]):
            problems.append(f"R at {w} leaves the domain")
    for a, b in k.leq:
        if a not in k.domain or b not in k.domain:
            continue
        if not k.domain[a] <= k.domain[b]:
            problems.append(f"domains not monotone on {a} <= {b}")
        if not k.rel[a] <= k.rel[b]:
            problems.append(f"R not monotone on {a} <= {b}")
        for p, ds in k.pred[a].items():
            if not ds <= k.pred[b].get(p, frozenset()):
                problems.append(f"{p} not monotone on {a} <= {b}")
    return problems


class _BirelEvaluator:
    '''Memoised satisfaction over one model'''

    def __init__(self, m, classical=False):
        self.m = m
        self.classical = classical
        self.above = {w: m.above(w) for w in m.worlds}
        self.succ = {w: m.successors(w) for w in m.worlds}
        self.cache = {}

    def __call__(self, w, f):
        key = (w, f)
        if key not in self.cache:
            self.cache[key] = self._eval(w, f)
        return self.cache[key]

    def _eval(self, w, f):
        if isinstance(f, Atom):
            return f.name in self.m.val[w]
        if isinstance(f, Bottom):
            return False
        if isinstance(f, And):
            return self(w, f.left) and self(w, f.right)
        if isinstance(f, Or):
            return self(w, f.left) or self(w, f.right)
        later = [w] if self.classical else self.above[w]
        if isinstance(f, Imp):
            return all(not self(u, f.left) or self(u, f.right)
                       for u in later)
        if isinstance(f, Box):
            return all(self(v, f.body) for u in later for v in self.succ[u])
        if isinstance(f, Dia):
            return any(self(v, f.body) for v in self.succ[w])
        raise TypeError(f"Not a formula: {f!r}")


def birel_satisfies(m, w, f, classical=False):
    """
    B, w |= f.

    Implication and box look at every w' >= w (box then along acc), diamond
    only along acc from w. With classical=True the preorder is ignored.

    Raises:
        ModelError: w is not a world of m.
    """
    if w not in m.val:
        raise ModelError(f"Unknown world {w}")
    return _BirelEvaluator(m, classical)(w, f)


def kripke_satisfies(k, w, env, x, f):
    """
    K, w |=_env x:f.

    Raises:
        ModelError: unknown world or env undefined on x.
    """
    if w not in k.domain:
        raise ModelError(f"Unknown world {w}")
    if x not in env.values:
        raise ModelError(f"Environment undefined on {x}")
    d = env.values[x]
    if d not in k.domain[w]:
        raise ModelError(f"{d} is not in the domain of {w}")
    return _kripke_eval(k, w, d, f, {})


def _kripke_eval(k, w, d, f, cache):
    key = (w, d, f)
    if key in cache:
        return cache[key]
    if isinstance(f, Atom):
        result = d in k.pred[w].get(f.name, frozenset())
    elif isinstance(f, Bottom):
        result = False
    elif isinstance(f, And):
        result = _kripke_eval(k, w, d, f.left, cache) \
            and _kripke_eval(k, w, d, f.right, cache)
    elif isinstance(f, Or):
        result = _kripke_eval(k, w, d, f.left, cache) \
            or _kripke_eval(k, w, d, f.right, cache)
    elif isinstance(f, Imp):
        result = all(not _kripke_eval(k, u, d, f.left, cache)
                     or _kripke_eval(k, u, d, f.right, cache)
                     for u in k.above(w))
    elif isinstance(f, Box):
        result = all(_kripke_eval(k, u, e, f.body, cache)
                     for u in k.above(w)
                     for a, e in sorted(k.rel[u]) if a == d)
    elif isinstance(f, Dia):
        result = any(_kripke_eval(k, w, e, f.body, cache)
                     for a, e in sorted(k.rel[w]) if a == d)
    else:
        raise TypeError(f"Not a formula: {f!r}")
    cache[key] = result
    return result


def _composite_cycle(nodes, edges):
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    try:
        return nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None


def check_igl_birel_class(m):
    """
    acc transitive and (leq ; acc) terminating, i.e. acyclic on a finite
    model. A violation carries the offending triple or cycle.
    """
    for a, b in sorted(m.acc):
        for b2, c in sorted(m.acc):
            if b == b2 and (a, c) not in m.acc:
                return ClassCheck(False, 'acc is not transitive', [a, b, c])
    leq, acc = m.matrices()
    composite = (leq.astype(int) @ acc.astype(int)) > 0
    edges = [(m.worlds[i], m.worlds[j]) for i, j in zip(*np.nonzero(composite))]
    cycle = _composite_cycle(m.worlds, edges)
    if cycle is not None:
        return ClassCheck(False, '(leq ; acc) has a cycle', cycle)
    return ClassCheck(True)


def check_igl_pred_class(k):
    """
    R_w transitive at every world and (leq ; R) terminating on the pairs
    (w, d) with d in D_w.
    """
    for w in k.worlds:
        rel = k.rel[w]
        for a, b in sorted(rel):
            for b2, c in sorted(rel):
                if b == b2 and (a, c) not in rel:
                    return ClassCheck(
                        False, f'R is not transitive at {w}', [a, b, c])
    nodes = [(w, d) for w in k.worlds for d in sorted(k.domain[w])]
    edges = [((w, d), (u, e))
             for w, u in sorted(k.leq) for d in sorted(k.domain[w])
             for a, e in sorted(k.rel[u]) if a == d]
    cycle = _composite_cycle(nodes, edges)
    if cycle is not None:
        return ClassCheck(False, '(leq ; R) has a cycle', cycle)
    return ClassCheck(True)


def interpretation_violations(m, s, i):
    problems = [f"{x} is not interpreted" for x in sorted(s.labels())
                if x not in i]
    problems += [f"{x} is sent to unknown world {w}"
                 for x, w in sorted(i.items()) if w not in m.val]
    if problems:
        return problems
    return [f"{x}R{y} but {i[x]} does not see {i[y]}"
            for x, y in sorted(s.rel) if (i[x], i[y]) not in m.acc]


def _entry_holds(evaluate, i, entry):
    return any(evaluate(i[d.label], d.formula) for d in disjuncts_of(entry))


def seq_satisfied(m, i, s, classical=False):
    """
    B, I |= s: every left entry true at its world implies some right entry
    true at its world.

    Raises:
        ModelError: i is not an interpretation of s into m.
    """
    problems = interpretation_violations(m, s, i)
    if problems:
        raise ModelError('; '.join(problems))
    evaluate = _BirelEvaluator(m, classical)
    if not all(_entry_holds(evaluate, i, e) for e in s.lhs):
        return True
    return any(_entry_holds(evaluate, i, e) for e in s.rhs)


def _candidates(m, lower):
    '''lower first, then every other world above it'''
    return [lower] + [w for w in m.above(lower) if w != lower]


def lift_interpretation(m, s, i, x, w):
    """
    Move x up to w and every other label of s up along leq so that the
    relational atoms of s stay satisfied.

    Raises:
        ModelError: s is not quasi-tree-like, w is not above i(x), or no
        lift exists (the model breaks F1 / F2).
    """
    if not is_quasi_tree_like(s):
        raise ModelError(f"{s} is not quasi-tree-like")
    if (i[x], w) not in m.leq:
        raise ModelError(f"{w} is not above {i[x]}")
    graph = nx.Graph()
    graph.add_nodes_from(sorted(s.labels()))
    graph.add_edges_from(sorted(s.rel))
    order = [x] + [y for y in nx.bfs_tree(graph, x) if y != x]
    order += sorted(y for y in s.labels() if y not in order)
    lifted = _first_assignment(
        m, s, order, {y: ([w] if y == x else _candidates(m, i[y]))
                      for y in order},
        accept=lambda candidate: True)
    if lifted is None:
        raise ModelError(f"No lift of {x} to {w} exists in the model")
    return lifted


def _first_assignment(m, s, order, choices, accept):
    '''Backtracking over choices keeping the relational atoms of s'''
    assignment = {}

    def extend(index):
        if index == len(order):
            return dict(assignment) if accept(assignment) else None
        y = order[index]
        for v in choices[y]:
            assignment[y] = v
            if all((assignment[a], assignment[b]) in m.acc
                   for a, b in s.rel
                   if a in assignment and b in assignment):
                found = extend(index + 1)
                if found is not None:
                    return found
            del assignment[y]
        return None

    return extend(0)


def local_soundness_witness(m, r, i, classical=False):
    """
    A premiss of r and an interpretation falsifying it, each label moved
    at most upwards along leq.

    Returns:
        tuple: (premiss, interpretation).

    Raises:
        ModelError: i satisfies the conclusion, or no witness exists (the
        rule instance is not sound for the model).
    """
    if seq_satisfied(m, i, r.conclusion, classical):
        raise ModelError(f"{r.conclusion} holds under {i}")
    old = sorted(r.conclusion.labels())
    for premiss in r.premisses:
        new = sorted(premiss.labels() - set(old))
        order = [y for y in old if y in premiss.labels()] + new
        choices = {y: _candidates(m, i[y]) for y in old}
        choices.update({y: list(m.worlds) for y in new})
        found = _first_assignment(
            m, premiss, order, choices,
            accept=lambda a, p=premiss: not seq_satisfied(m, a, p, classical))
        if found is not None:
            for y in old:
                found.setdefault(y, i[y])
            return premiss, found
    raise ModelError(f"No premiss of {r.rule} is falsified above {i}")


def pair_world(w, d):
    return f'{w}.{d}'


def pred_to_birel(k):
    """
    Birelational model on the pairs (w, d): (w, d) <= (w', d) when w <= w',
    (w, d) R (w, e) when d R_w e, atoms p with d in Pr_w(p).
    """
    worlds = [pair_world(w, d) for w in k.worlds for d in sorted(k.domain[w])]
    leq = {(pair_world(w, d), pair_world(u, d))
           for w, u in k.leq for d in k.domain[w]}
    acc = {(pair_world(w, d), pair_world(w, e))
           for w in k.worlds for d, e in k.rel[w]}
    val = {pair_world(w, d): {p for p, ds in k.pred[w].items() if d in ds}
           for w in k.worlds for d in k.domain[w]}
    return BirelModel(tuple(worlds), frozenset(leq), frozenset(acc), val)


def _partial_orders(n, strict=False):
    """All (strict) partial orders on range(n) as boolean matrices"""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        matrix = np.eye(n, dtype=bool) if not strict \
            else np.zeros((n, n), dtype=bool)
        for (a, b), bit in zip(pairs, bits):
            matrix[a, b] = bit
        if (matrix & matrix.T & ~np.eye(n, dtype=bool)).any():
            continue
        if ((matrix.astype(int) @ matrix.astype(int) > 0) & ~matrix).any():
            continue
        yield matrix


def _up_sets(leq):
    n = len(leq)
    for bits in itertools.product((False, True), repeat=n):
        chosen = np.array(bits, dtype=bool)
        if not (leq[chosen] & ~chosen).any():
            yield chosen


def _frame_ok(leq, acc):
    for w, w2, v in zip(*np.nonzero(leq[:, :, None] & acc[:, None, :])):
        if not (leq[v, :] & acc[w2, :]).any():
            return False
    for w, v, v2 in zip(*np.nonzero(acc[:, :, None] & leq[None, :, :])):
        if not (leq[w, :] & acc[:, v2]).any():
            return False
    composite = (leq.astype(int) @ acc.astype(int)) > 0
    return not composite.diagonal().any() and _acyclic(composite)


def _acyclic(matrix):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(matrix)))
    graph.add_edges_from(zip(*np.nonzero(matrix)))
    return nx.is_directed_acyclic_graph(graph)


def canonical_form(leq, acc, valuation):
    """
    Smallest encoding over all world permutations, equal exactly for
    isomorphic models.
    """
    n = len(leq)
    best = None
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        key = (leq[np.ix_(p, p)].tobytes(), acc[np.ix_(p, p)].tobytes(),
               tuple(column[p].tobytes() for column in valuation))
        if best is None or key < best:
            best = key
    return best


def model_canonical_form(m, atoms=None):
    leq, acc = m.matrices()
    atoms = sorted(atoms if atoms is not None
                   else set().union(*m.val.values()))
    valuation = [np.array([a in m.val[w] for w in m.worlds], dtype=bool)
                 for a in atoms]
    return canonical_form(leq, acc, valuation)


def enumerate_igl_models(max_worlds, atoms):
    """
    Every IGL birelational model with at most max_worlds worlds over the
    given atoms, one per isomorphism class.

    Yields:
        BirelModel: worlds named w0, w1, ...
    """
    atoms = sorted(atoms)
    logger.info('RUNNING enumerate_igl_models')
    count = 0
    for n in range(1, max_worlds + 1):
        names = tuple(f'w{i}' for i in range(n))
        seen = set()
        stricts = list(_partial_orders(n, strict=True))
        for leq in _partial_orders(n):
            up_sets = list(_up_sets(leq))
            for acc in stricts:
                if not _frame_ok(leq, acc):
                    continue
                for valuation in itertools.product(up_sets,
                                                   repeat=len(atoms)):
                    key = canonical_form(leq, acc, valuation)
                    if key in seen:
                        continue
                    seen.add(key)
                    count += 1
                    yield _model_from_matrices(names, leq, acc, atoms,
                                               valuation)
    logger.info('DONE enumerate_igl_models: %d models', count)


def _model_from_matrices(names, leq, acc, atoms, valuation):
    return BirelModel(
        names,
        frozenset((names[a], names[b]) for a, b in zip(*np.nonzero(leq))),
        frozenset((names[a], names[b]) for a, b in zip(*np.nonzero(acc))),
        {w: {atom for atom, column in zip(atoms, valuation) if column[i]}
         for i, w in enumerate(names)})


def model_to_json(m):
    return {
        'worlds': list(m.worlds),
        'leq': [list(p) for p in sorted(m.leq)],
        'acc': [list(p) for p in sorted(m.acc)],
        'val': {w: sorted(m.val[w]) for w in m.worlds},
    }


def model_from_json(data):
    """
    Raises:
        ModelError: malformed JSON or a model failing its invariants.
    """
    try:
        worlds = tuple(data['worlds'])
        m = BirelModel(worlds,
                       frozenset(tuple(p) for p in data.get('leq', [])),
                       frozenset(tuple(p) for p in data.get('acc', [])),
                       {w: set(atoms) for w, atoms in
                        (data.get('val') or {}).items()})
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"Malformed model JSON: {e}") from e
    if any(w not in worlds for w in (data.get('val') or {})):
        raise ModelError("val mentions an unknown world")
    problems = model_violations(m)
    if problems:
        raise ModelError('; '.join(problems))
    return m


def load_model(path):
    try:
        with open(path, encoding='utf-8') as source:
            data = json.load(source)
    except (OSError, json.JSONDecodeError) as e:
        raise ModelError(f"Cannot read {path}: {e}") from e
    return model_from_json(data)


def save_model(m, path):
    with open(path, 'w', encoding='utf-8') as out:
        json.dump(model_to_json(m), out, indent=JSON_INDENT, sort_keys=True)


def kripke_to_json(k):
    return {
        'worlds': list(k.worlds),
        'leq': [list(p) for p in sorted(k.leq)],
        'domain': {w: sorted(k.domain[w]) for w in k.worlds},
        'pred': {w: {p: sorted(ds) for p, ds in sorted(k.pred[w].items())}
                 for w in k.worlds},
        'rel': {w: [list(p) for p in sorted(k.rel[w])] for w in k.worlds},
    }


def kripke_from_json(data):
    try:
        k = KripkeStructure(
            tuple(data['worlds']),
            frozenset(tuple(p) for p in data.get('leq', [])),
            {w: set(ds) for w, ds in data['domain'].items()},
            {w: {p: set(ds) for p, ds in table.items()}
             for w, table in (data.get('pred') or {}).items()},
            {w: {tuple(p) for p in pairs}
             for w, pairs in (data.get('rel') or {}).items()})
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ModelError(f"Malformed Kripke structure JSON: {e}") from e
    problems = kripke_violations(k)
    if problems:
        raise ModelError('; '.join(problems))
    return k


def example3_model():
    '''Five-world model falsifying <>p -> <>(p & []~p) at w1'''
    return load_model(os.path.join(DATA_DIR, 'example3_model.json'))


def model_table(m):
    '''One row per world for --pretty output'''
    return pd.DataFrame(
        [{'world': w,
          'above': ' '.join(v for v in m.above(w) if v != w),
          'successors': ' '.join(m.successors(w)),
          'atoms': ' '.join(sorted(m.val[w]))} for w in m.worlds],
        columns=['world', 'above', 'successors', 'atoms'])


def model_to_dot(m):
    '''DOT text: solid edges for acc, dashed for strict leq'''
    lines = ['digraph model {']
    for w in m.worlds:
        atoms = ','.join(sorted(m.val[w]))
        lines.append(f'  "{w}" [label="{w}\\n{atoms}"];')
    for a, b in sorted(m.acc):
        lines.append(f'  "{a}" -> "{b}";')
    for a, b in sorted(m.leq):
        if a != b:
            lines.append(f'  "{a}" -> "{b}" [style=dashed];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def entry_world_table(m, i, s):
    '''Truth of every entry of s under i, used by the modelcheck command'''
    evaluate = _BirelEvaluator(m)
    rows = []
    for side, entries in (('L', s.lhs), ('R', s.rhs)):
        for e in entries:
            rows.append({'side': side, 'entry': str(e),
                         'holds': _entry_holds(evaluate, i, e)})
    return pd.DataFrame(rows, columns=['side', 'entry', 'holds'])