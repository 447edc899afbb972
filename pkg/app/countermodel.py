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
from dataclasses import dataclass, field
from typing import Dict, List

import networkx as nx
import pandas as pd

from formula import Atom
from global_variables import JSON_INDENT, ROOT_LABEL
from prover import validate_denier
from semantics import (
    Environment,
    KripkeStructure,
    ModelError,
    check_igl_pred_class,
    kripke_satisfies,
    kripke_to_json,
    kripke_violations,
)
from sequent_calculus import LabelledFormula, Sequent, disjuncts_of

logger = logging.getLogger(__name__)


@dataclass
class Segment:
    id: str
    sequents: List[Sequent]

    @property
    def saturated(self):
        return self.sequents[-1]

    def uncontained(self):
        '''Run sequents not contained in the final one'''
        last = self.saturated
        return [s for s in self.sequents
                if not (s.rel <= last.rel and set(s.lhs) <= set(last.lhs)
                        and set(s.rhs) <= set(last.rhs))]


@dataclass
class Countermodel:
    structure: KripkeStructure
    root: str
    env: Environment
    provenance: Dict[str, List[str]] = field(default_factory=dict)
    saturated: Dict[str, List[Sequent]] = field(default_factory=dict)

    def __iter__(self):
        return iter((self.structure, self.root, self.env))


@dataclass
class Verification:
    ok: bool
    failures: List[str] = field(default_factory=list)


def _classes(d):
    '''Segments folded by back-links, as a representative per segment'''
    representative = {node_id: node_id for node_id in d.nodes}

    def find(a):
        while representative[a] != a:
            representative[a] = representative[representative[a]]
            a = representative[a]
        return a

    for node in d.nodes.values():
        if node.backlink is None:
            continue
        path = d.path_to(node.id)
        for segment in path[path.index(node.backlink):]:
            representative[find(segment)] = find(node.backlink)
    return {node_id: find(node_id) for node_id in d.nodes}


def extract_countermodel(d):
    """
    Kripke structure with one world per segment of a Denier tree.

    Worlds are ordered by segment descent; the domain of a world is the
    set of labels of its relational context together with the root label;
    predicates and R are read off the saturated sequent. Segments joined by
    a back-link share one world.

    Returns:
        Countermodel: unpacks as (structure, root world, environment).

    Raises:
        ModelError: the Denier tree is malformed.
    """
    problems = validate_denier(d)
    if problems:
        raise ModelError(f"Invalid Denier tree: {'; '.join(problems)}")
    logger.info('RUNNING extract_countermodel')
    segments = {node_id: Segment(node_id, list(node.run))
                for node_id, node in d.nodes.items()}
    for segment in segments.values():
        if segment.uncontained():
            raise ModelError(
                f"Segment {segment.id} has sequents outside its final one")
    rep = _classes(d)
    order = list(nx.bfs_tree(_segment_graph(d), d.root))
    names = {}
    for segment_id in order:
        if rep[segment_id] not in names:
            names[rep[segment_id]] = f'w{len(names)}'
    world_of = {segment_id: names[rep[segment_id]] for segment_id in order}
    below = nx.DiGraph()
    below.add_nodes_from(names.values())
    for node in d.nodes.values():
        for child in node.successors:
            if world_of[node.id] != world_of[child]:
                below.add_edge(world_of[node.id], world_of[child])
    closure = nx.transitive_closure(below, reflexive=False)
    leq = {(w, w) for w in names.values()} | set(closure.edges())
    domain, pred, rel, saturated, provenance = {}, {}, {}, {}, {}
    for segment_id in order:
        w = world_of[segment_id]
        last = segments[segment_id].saturated
        if w in saturated:
            saturated[w].append(last)
            continue
        saturated[w] = [last]
        provenance[w] = d.path_to(segment_id)
        domain[w] = last.rel_labels() | {ROOT_LABEL}
        rel[w] = set(last.rel)
        table = {}
        for e in last.lhs:
            if isinstance(e, LabelledFormula) and isinstance(e.formula, Atom):
                table.setdefault(e.formula.name, set()).add(e.label)
        pred[w] = table
    worlds = tuple(names.values())
    structure = KripkeStructure(worlds, frozenset(leq), domain, pred, rel)
    root = world_of[d.root]
    logger.info('DONE extract_countermodel: %d worlds', len(worlds))
    return Countermodel(structure, root,
                        Environment(root, {ROOT_LABEL: ROOT_LABEL}),
                        provenance, saturated)


def _segment_graph(d):
    graph = nx.DiGraph()
    graph.add_nodes_from(d.nodes)
    for node in d.nodes.values():
        for child in node.successors:
            graph.add_edge(node.id, child)
    return graph


def _entry_holds(k, w, entry):
    return any(kripke_satisfies(k, w, Environment(w, {e.label: e.label}),
                                e.label, e.formula)
               for e in disjuncts_of(entry))


def verify_countermodel(k, root, env, goal, saturated=None):
    """
    Independent check that k refutes goal at root.

    Recomputes the class conditions and the truth of x0:goal; when the
    saturated sequents of every world are given (one per segment folded
    into it), also checks that each antecedent holds and each succedent
    fails there.

    Returns:
        Verification: ok with no failures, or the list of failures.
    """
    failures = kripke_violations(k)
    if failures:
        return Verification(False, failures)
    check = check_igl_pred_class(k)
    if not check.ok:
        failures.append(f"class check: {check.reason} {check.witness}")
    try:
        if kripke_satisfies(k, root, env, ROOT_LABEL, goal):
            failures.append(f"{ROOT_LABEL}:goal holds at {root}")
    except ModelError as e:
        failures.append(f"cannot evaluate the goal: {e}")
    for w, group in sorted((saturated or {}).items()):
        for s in ([group] if isinstance(group, Sequent) else group):
            try:
                for e in s.lhs:
                    if not _entry_holds(k, w, e):
                        failures.append(
                            f"{w}: antecedent {e} is not satisfied")
                for e in s.rhs:
                    if _entry_holds(k, w, e):
                        failures.append(f"{w}: succedent {e} is satisfied")
            except ModelError as e:
                failures.append(f"{w}: {e}")
    return Verification(not failures, failures)


def countermodel_to_json(model):
    data = kripke_to_json(model.structure)
    data['root'] = model.root
    data['environment'] = dict(model.env.values)
    data['provenance'] = {w: path for w, path in model.provenance.items()}
    return data


def save_countermodel(model, path):
    with open(path, 'w', encoding='utf-8') as out:
        json.dump(countermodel_to_json(model), out, indent=JSON_INDENT,
                  sort_keys=True)


def countermodel_table(model):
    k = model.structure
    rows = []
    for w in k.worlds:
        rows.append({
            'world': w,
            'segments': ' '.join(model.provenance.get(w, [])),
            'domain': ' '.join(sorted(k.domain[w])),
            'R': ' '.join(f'{a}R{b}' for a, b in sorted(k.rel[w])),
            'atoms': ' '.join(f'{p}({d})' for p, ds in sorted(k.pred[w].items())
                              for d in sorted(ds)),
        })
    return pd.DataFrame(rows, columns=['world', 'segments', 'domain', 'R',
                                       'atoms'])
