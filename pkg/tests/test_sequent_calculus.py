#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import pytest

from formula import Atom, Box, parse_formula
from sequent_calculus import (
    LabelledFormula,
    RuleError,
    RuleInstance,
    Sequent,
    SequentSyntaxError,
    SystemId,
    apply_rule,
    applicable_rules,
    check_sequent,
    degree,
    find_renaming,
    fresh_label,
    is_quasi_tree_like,
    is_saturated,
    iter_renamings,
    macro_rules,
    make_instance,
    parse_entry,
    parse_sequent,
    rule_violations,
)


def lf(text):
    return parse_entry(text)


class TestSequentSyntax:
    """Parsing and printing of labelled sequents."""

    def test_01_relational_prefix(self):
        s = parse_sequent('xRy, yRz | x:p, y:[]q => z:r')
        assert s.rel == {('x', 'y'), ('y', 'z')}
        assert s.lhs == (LabelledFormula('x', Atom('p')),
                         LabelledFormula('y', Box(Atom('q'))))
        assert s.rhs == (LabelledFormula('z', Atom('r')),)

    def test_02_printing_is_stable(self):
        text = 'xRy, yRz | x:p, y:[]q => z:r'
        assert str(parse_sequent(text)) == text

    def test_03_formula_disjunction_is_not_a_relational_prefix(self):
        s = parse_sequent('x:p | q => x:q | p')
        assert not s.rel
        assert s.lhs == (LabelledFormula('x', parse_formula('p | q')),)

    def test_04_sequent_disjunction(self):
        s = parse_sequent('x:p => x:p + y:q')
        assert len(s.rhs) == 1
        assert degree(s.rhs[0]) == 2

    def test_05_multisets_ignore_order(self):
        assert parse_sequent('x:q, x:p => x:p') \
            == parse_sequent('x:p, x:q => x:p')
        assert parse_sequent('x:p, x:p => x:p') \
            != parse_sequent('x:p => x:p')

    def test_06_missing_arrow(self):
        with pytest.raises(SequentSyntaxError):
            parse_sequent('x:p')

    def test_07_missing_label(self):
        with pytest.raises(SequentSyntaxError):
            parse_sequent('p => x:p')

    def test_08_empty_sides(self):
        s = parse_sequent('xRy | => y:p')
        assert s.rel == {('x', 'y')}
        assert s.lhs == ()


class TestSystems:
    """Shape invariants and rule availability per system."""

    def test_01_single_succedent(self):
        s = parse_sequent('x:p => x:p, x:q')
        assert check_sequent(s, SystemId.IK4)
        assert not check_sequent(s, SystemId.mIK4)

    def test_02_disjunctions_only_in_the_disjunctive_system(self):
        s = parse_sequent('x:p => x:p + x:q')
        assert check_sequent(s, SystemId.mIK4)
        assert not check_sequent(s, SystemId.dIK4)

    def test_03_tr_needs_a_transitive_system(self):
        s = parse_sequent('xRy, yRz | => z:p')
        r = make_instance('tr', s, SystemId.IK4, witness=('x', 'y', 'z'),
                          atoms=frozenset({('x', 'z')}))
        assert not rule_violations(r, SystemId.IK4)
        assert rule_violations(r, SystemId.IK)

    def test_04_weakening_on_the_right_needs_several_formulas(self):
        s = parse_sequent('x:p => x:p')
        r = RuleInstance('wR', s, (parse_sequent('x:p =>'),),
                         (('R', lf('x:p')),))
        assert rule_violations(r, SystemId.IK4)

    def test_05_fresh_labels(self):
        assert fresh_label({'x0'}) == 'y0'
        assert fresh_label({'y0', 'y1'}) == 'y2'


class TestRuleSchemas:
    """Premisses generated from conclusions and parameters."""

    def test_01_box_right_introduces_a_fresh_successor(self):
        r = make_instance('boxR', parse_sequent('=> x:[]p'), SystemId.IK4,
                          principal=(('R', lf('x:[]p')),), fresh='y')
        assert list(r.premisses) == [parse_sequent('xRy | => y:p')]

    def test_02_box_right_rejects_a_used_label(self):
        with pytest.raises(RuleError):
            make_instance('boxR', parse_sequent('xRy | => x:[]p'),
                          SystemId.IK4, principal=(('R', lf('x:[]p')),),
                          fresh='y')

    def test_03_macro_box_left_keeps_its_principal(self):
        s = parse_sequent('xRy | x:[]p => y:p')
        r = make_instance('macro-boxL', s, SystemId.IK4,
                          principal=(('L', lf('x:[]p')),),
                          witness=('x', 'y'))
        assert list(r.premisses) == [
            parse_sequent('xRy | x:[]p, y:p => y:p')]

    def test_04_strict_identity(self):
        s = parse_sequent('x:p => x:p')
        r = RuleInstance('id', s, (), (('L', lf('x:p')), ('R', lf('x:p'))))
        assert not rule_violations(r, SystemId.IK4)

    def test_05_identity_with_context_must_be_generalized(self):
        s = parse_sequent('x:q, x:p => x:p')
        principal = (('L', lf('x:p')), ('R', lf('x:p')))
        assert rule_violations(RuleInstance('id', s, (), principal),
                               SystemId.IK4)
        assert not rule_violations(
            RuleInstance('id', s, (), principal, generalized=True),
            SystemId.IK4)

    def test_06_identity_against_a_disjunct(self):
        s = parse_sequent('x:p => y:q + x:p')
        r = RuleInstance('id', s, (), (('L', lf('x:p')),
                                       ('R', lf('y:q + x:p'))),
                         generalized=True)
        assert not rule_violations(r, SystemId.dIK4)

    def test_07_tr_refuses_an_existing_atom(self):
        s = parse_sequent('xRy, yRz, xRz | => z:p')
        with pytest.raises(RuleError):
            make_instance('tr', s, SystemId.IK4, witness=('x', 'y', 'z'))

    def test_08_split_disjunction_on_the_left(self):
        s = parse_sequent('x:p + x:q + x:r => x:s')
        r = make_instance('dis-orL', s, SystemId.dIK4,
                          principal=(('L', lf('x:p + x:q + x:r')),), split=1)
        assert list(r.premisses) == [parse_sequent('x:p => x:s'),
                                     parse_sequent('x:q + x:r => x:s')]

    def test_09_cut_contexts_must_add_up(self):
        conclusion = parse_sequent('x:p => x:q')
        left = parse_sequent('x:p => x:r')
        right = parse_sequent('x:r => x:q')
        good = RuleInstance('cut', conclusion, (left, right),
                            cut_formula=lf('x:r'))
        assert not rule_violations(good, SystemId.IK4)
        bad = RuleInstance('cut', conclusion, (left, left),
                           cut_formula=lf('x:r'))
        assert rule_violations(bad, SystemId.IK4)

    def test_10_apply_rule_checks_the_instance(self):
        s = parse_sequent('x:p => x:q')
        r = RuleInstance('id', s, (), (('L', lf('x:p')), ('R', lf('x:q'))))
        with pytest.raises(RuleError):
            apply_rule(r, SystemId.IK4)

    def test_11_applicable_rules_are_valid(self):
        s = parse_sequent('xRy | x:[]p, x:p & q => y:p')
        found = applicable_rules(s, SystemId.IK4)
        assert found
        assert all(not rule_violations(r, SystemId.IK4) for r in found)
        assert 'boxL' in {r.rule for r in found}


class TestSaturation:
    """Saturation and principal-retaining macros."""

    def test_01_unsaturated_box(self):
        ok, violations = is_saturated(parse_sequent('xRy | x:[]p => y:q'))
        assert not ok
        assert violations == [('L', lf('x:[]p'))]

    def test_02_saturated(self):
        ok, _ = is_saturated(parse_sequent('xRy | x:[]p, y:p => y:q'))
        assert ok

    def test_03_missing_transitive_atom(self):
        ok, violations = is_saturated(parse_sequent('xRy, yRz | => z:p'))
        assert not ok
        assert ('rel', ('x', 'y', 'z')) in violations

    def test_04_macros_cover_the_violations(self):
        s = parse_sequent('xRy | x:[]p => y:q, x:q & p')
        rules = {r.rule for r in macro_rules(s, SystemId.mIK4)}
        assert rules == {'macro-boxL', 'macro-andR'}


class TestShapes:
    """Quasi-tree-like sequents and renamings."""

    def test_01_chain_is_quasi_tree_like(self):
        assert is_quasi_tree_like(parse_sequent('xRy, yRz, xRz | => z:p'))

    def test_02_two_roots_are_not(self):
        assert not is_quasi_tree_like(parse_sequent('xRz, yRz | => z:p'))

    def test_03_no_relations_single_label(self):
        assert is_quasi_tree_like(parse_sequent('x:p => x:q'))
        assert not is_quasi_tree_like(parse_sequent('y:p => x:q'))

    def test_04_renaming_between_copies(self):
        src = parse_sequent('xRy | x:[]p => y:p')
        dst = parse_sequent('xRz | x:[]p => z:p')
        assert find_renaming(src, dst) == {'x': 'x', 'y': 'z'}

    def test_05_grown_renaming(self):
        src = parse_sequent('xRy | x:[]p => y:p')
        dst = parse_sequent('xRz, zRw | x:[]p => z:p')
        assert find_renaming(src, dst) is None
        assert find_renaming(src, dst, mode='grown') == {'x': 'x', 'y': 'z'}

    def test_06_tick_stops_the_enumeration(self):
        src = parse_sequent('x:p, y:p, z:p => w:q')
        dst = parse_sequent('v:p, x:p, y:p, z:p => w:q')
        assert len(list(iter_renamings(src, dst, 'subsume'))) == 24
        calls = []

        def tick():
            calls.append(1)
            return len(calls) >= 5

        found = list(iter_renamings(src, dst, 'subsume', tick=tick))
        assert found == [{'w': 'w', 'x': 'v', 'y': 'x', 'z': 'y'}]
        assert len(calls) == 5
