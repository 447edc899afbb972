#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import pytest

from countermodel import (
    countermodel_table,
    countermodel_to_json,
    extract_countermodel,
    verify_countermodel,
)
from formula import parse_formula
from prover import Refutable, SearchConfig, denier_from_json, prove
from semantics import (
    ModelError,
    birel_satisfies,
    check_igl_pred_class,
    kripke_violations,
    pair_world,
    pred_to_birel,
)
from sequent_calculus import SystemId, parse_sequent

ATOM_DENIER = {
    'system': 'mIK4',
    'root': 's0',
    'nodes': [{'id': 's0', 'run': ['=> x0:p'], 'successors': []}],
}


def refute(text):
    goal = parse_formula(text)
    outcome = prove(goal, SearchConfig(system=SystemId.mIK4))
    assert isinstance(outcome, Refutable)
    return goal, outcome.denier


class TestExtraction:
    """Kripke structures read off Denier trees."""

    def test_01_single_segment(self):
        model = extract_countermodel(denier_from_json(ATOM_DENIER))
        k, root, env = model
        assert k.worlds == ('w0',)
        assert root == 'w0'
        assert k.domain['w0'] == {'x0'}
        assert env.values == {'x0': 'x0'}

    def test_02_single_segment_verifies(self):
        model = extract_countermodel(denier_from_json(ATOM_DENIER))
        verdict = verify_countermodel(*model, parse_formula('p'),
                                      model.saturated)
        assert verdict.ok
        assert verdict.failures == []

    def test_03_wrong_goal_is_not_refuted(self):
        model = extract_countermodel(denier_from_json(ATOM_DENIER))
        verdict = verify_countermodel(*model, parse_formula('p -> p'))
        assert not verdict.ok

    def test_04_malformed_tree(self):
        data = dict(ATOM_DENIER)
        data['nodes'] = [{'id': 's0', 'run': ['=> x0:p'],
                          'successors': ['s9']}]
        with pytest.raises(ModelError):
            extract_countermodel(denier_from_json(data))

    def test_05_initial_sequent_in_a_run(self):
        data = dict(ATOM_DENIER)
        data['nodes'] = [{'id': 's0', 'run': ['x0:p => x0:p'],
                          'successors': []}]
        with pytest.raises(ModelError):
            extract_countermodel(denier_from_json(data))


    def test_06_every_segment_sequent_is_checked(self):
        model = extract_countermodel(denier_from_json(ATOM_DENIER))
        extra = {'w0': model.saturated['w0']
                 + [parse_sequent('x0:p => x0:q')]}
        verdict = verify_countermodel(*model, parse_formula('p'), extra)
        assert not verdict.ok
        assert 'w0: antecedent x0:p is not satisfied' in verdict.failures

class TestSearchRefutations:
    """Countermodels for refuted search goals."""

    def test_01_contra_lob(self):
        goal, denier = refute('<>p -> <>(p & []~p)')
        model = extract_countermodel(denier)
        assert kripke_violations(model.structure) == []
        assert check_igl_pred_class(model.structure).ok
        assert verify_countermodel(*model, goal, model.saturated).ok

    def test_02_excluded_middle(self):
        goal, denier = refute('p | ~p')
        model = extract_countermodel(denier)
        assert verify_countermodel(*model, goal, model.saturated).ok
        assert len(model.structure.worlds) >= 2

    def test_03_pair_model_agrees(self):
        goal, denier = refute('<>p -> <>(p & []~p)')
        k, root, env = extract_countermodel(denier)
        m = pred_to_birel(k)
        assert not birel_satisfies(m, pair_world(root, env.values['x0']),
                                   goal)

    def test_04_output_formats(self):
        goal, denier = refute('p | ~p')
        model = extract_countermodel(denier)
        data = countermodel_to_json(model)
        assert data['root'] == model.root
        assert data['environment'] == {'x0': 'x0'}
        table = countermodel_table(model)
        assert len(table) == len(model.structure.worlds)

    def test_05_merged_segments_keep_their_sequents(self):
        goal, denier = refute('<>p -> <>(p & []~p)')
        model = extract_countermodel(denier)
        assert sum(len(g) for g in model.saturated.values()) \
            == len(denier.nodes)
        assert verify_countermodel(*model, goal, model.saturated).ok
