#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import time

import pytest

from config import ConfigurationError
from cyclic_proof import check_local, check_progress
from formula import parse_formula
from prover import (
    Provable,
    Refutable,
    SearchBoundError,
    SearchConfig,
    Unknown,
    closing_step,
    denier_from_json,
    denier_to_json,
    detect_companion,
    invertible_phase,
    noninvertible_expand,
    prove,
    validate_denier,
)
from sequent_calculus import SystemId, parse_sequent

LOB = '[]([]p -> p) -> []p'
CONTRA_LOB = '<>p -> <>(p & []~p)'
CONSISTENCY = '~[]false -> ~[]~[]false'


def run(text, system):
    return prove(parse_formula(text), SearchConfig(system=system))


def assert_certified(outcome, system):
    assert isinstance(outcome, Provable)
    assert outcome.proof.system is system
    assert check_local(outcome.proof) == []
    assert check_progress(outcome.proof).progressing


class TestSearchConfig:
    """Bounds and policies."""

    def test_01_defaults_validate(self):
        assert SearchConfig().validate().system is SystemId.mIK4

    def test_02_non_positive_bound(self):
        with pytest.raises(ConfigurationError):
            SearchConfig(max_steps=0).validate()

    def test_03_unknown_policy(self):
        with pytest.raises(ConfigurationError):
            SearchConfig(companion_policy='nearest').validate()

    def test_04_disjunctive_system_has_no_search(self):
        with pytest.raises(ConfigurationError):
            SearchConfig(system=SystemId.dIK4).validate()

    def test_05_bounds_from_yaml(self):
        cfg = SearchConfig.from_defaults(SystemId.K)
        assert cfg.max_labels == 8
        assert cfg.max_depth == 400

    def test_06_environment_overrides_yaml(self, monkeypatch):
        monkeypatch.setenv('IGL_MAX_LABELS', '5')
        assert SearchConfig.from_defaults(SystemId.IK4).max_labels == 5

    def test_07_explicit_overrides_win(self, monkeypatch):
        monkeypatch.setenv('IGL_MAX_LABELS', '5')
        cfg = SearchConfig.from_defaults(SystemId.IK4, max_labels=3,
                                         max_depth=None)
        assert cfg.max_labels == 3
        assert cfg.max_depth == 400

    def test_08_bad_environment_value(self, monkeypatch):
        monkeypatch.setenv('IGL_MAX_STEPS', 'many')
        with pytest.raises(ConfigurationError):
            SearchConfig.from_defaults(SystemId.IK4)


class TestPhases:
    """Closing steps, invertible phase and companions."""

    def test_01_bottom_closes(self):
        step = closing_step(parse_sequent('x:false => x:p'), SystemId.IK4)
        assert step.rule == 'botL'

    def test_02_open_sequent(self):
        assert closing_step(parse_sequent('x:p => x:q'), SystemId.IK4) is None

    def test_03_identity_in_context_is_generalized(self):
        step = closing_step(parse_sequent('x:q, x:p => x:p'), SystemId.IK4)
        assert step.rule == 'id'
        assert step.generalized

    def test_04_invertible_phase_closes_box_instance(self):
        tree = invertible_phase(parse_sequent('xRy | x:[]p => y:p'))
        assert tree.rule == 'macro-boxL'
        assert all(leaf.closed for leaf in tree.leaves())

    def test_05_label_bound(self):
        with pytest.raises(SearchBoundError):
            invertible_phase(parse_sequent('xRy, yRz | => z:p'),
                             max_labels=2)

    def test_06_noninvertible_successors(self):
        s = parse_sequent('x:p => x:q -> r, x:[]s')
        assert sorted(str(t) for t in noninvertible_expand(s)) == sorted([
            'x:p, x:q => x:r', 'xRy0 | x:p => y0:s'])

    def test_07_companion_up_to_renaming(self):
        history = [parse_sequent('x:p => x:q'),
                   parse_sequent('xRy | x:[]p => y:p')]
        found = detect_companion(parse_sequent('xRz | x:[]p => z:p'),
                                 history)
        assert found == (1, {'x': 'x', 'y': 'z'})

    def test_08_no_companion(self):
        history = [parse_sequent('x:p => x:q')]
        assert detect_companion(parse_sequent('x:q => x:p'), history) is None


class TestProve:
    """Decisions on the standard examples."""

    def test_01_lob_in_igl(self):
        assert_certified(run(LOB, SystemId.IK4), SystemId.IK4)

    def test_02_lob_multi_succedent(self):
        assert_certified(run(LOB, SystemId.mIK4), SystemId.mIK4)

    def test_03_contra_lob_is_classical_only(self):
        assert_certified(run(CONTRA_LOB, SystemId.K4), SystemId.K4)
        outcome = run(CONTRA_LOB, SystemId.mIK4)
        assert isinstance(outcome, Refutable)
        assert validate_denier(outcome.denier) == []

    def test_04_contra_lob_in_igl_falls_back_to_refutation(self):
        outcome = run(CONTRA_LOB, SystemId.IK4)
        assert isinstance(outcome, Refutable)
        assert outcome.denier is not None

    def test_05_excluded_middle(self):
        assert_certified(run('p | ~p', SystemId.K), SystemId.K)
        assert isinstance(run('p | ~p', SystemId.IK4), Refutable)

    def test_06_atom_is_refutable(self):
        outcome = run('p', SystemId.mIK4)
        assert isinstance(outcome, Refutable)
        assert len(outcome.denier.nodes) == 1

    def test_07_transitivity_axiom(self):
        assert_certified(run('[]p -> [][]p', SystemId.IK4), SystemId.IK4)

    def test_08_distribution_axiom(self):
        assert_certified(run('[](p -> q) -> []p -> []q', SystemId.IK4),
                         SystemId.IK4)

    def test_09_step_bound_gives_unknown(self):
        outcome = prove(parse_formula(LOB),
                        SearchConfig(system=SystemId.mIK4, max_steps=1))
        assert isinstance(outcome, Unknown)
        assert outcome.status == 'Unknown'

    def test_10_global_companions(self):
        outcome = prove(parse_formula(LOB),
                        SearchConfig(system=SystemId.IK4,
                                     companion_policy='global'))
        assert_certified(outcome, SystemId.IK4)

    def test_11_denier_json_round_trip(self):
        outcome = run(CONTRA_LOB, SystemId.mIK4)
        again = denier_from_json(denier_to_json(outcome.denier))
        assert validate_denier(again) == []
        assert set(again.nodes) == set(outcome.denier.nodes)

    def test_12_provable_reports_its_system(self):
        outcome = run(LOB, SystemId.IK4)
        assert outcome.system is SystemId.IK4

    def test_13_classical_refutation_keeps_saturated_sequent(self):
        outcome = run('p', SystemId.K4)
        assert isinstance(outcome, Refutable)
        assert outcome.denier is None
        assert str(outcome.saturated) == str(parse_sequent('=> x0:p'))


class TestBudget:
    """Companion search is charged to the step budget."""

    def _timed(self, cfg):
        start = time.monotonic()
        outcome = prove(parse_formula(CONSISTENCY), cfg)
        return outcome, time.monotonic() - start

    def test_01_small_budget_stops_quickly(self):
        outcome, elapsed = self._timed(
            SearchConfig(system=SystemId.IK4, max_steps=200))
        assert isinstance(outcome, (Provable, Unknown))
        assert elapsed < 30

    def test_02_default_bounds_terminate(self):
        outcome, elapsed = self._timed(SearchConfig(system=SystemId.IK4))
        assert isinstance(outcome, (Provable, Unknown))
        if isinstance(outcome, Provable):
            assert_certified(outcome, outcome.system)
        assert elapsed < 120

    def test_03_few_labels_prove_it(self):
        outcome, _ = self._timed(
            SearchConfig(system=SystemId.IK4, max_labels=6, max_depth=40,
                         max_steps=200000))
        assert isinstance(outcome, Provable)
        assert_certified(outcome, outcome.system)
