#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import pytest

from formula import (
    BOTTOM,
    And,
    Atom,
    Box,
    Dia,
    FormulaSyntaxError,
    Imp,
    Or,
    atoms,
    depth,
    neg,
    parse_formula,
    render_first_order,
    render_formula,
    size,
    standard_translation,
    subformula_closure,
)

P, Q, R = Atom('p'), Atom('q'), Atom('r')


class TestParser:
    """Concrete syntax, precedence and error reporting."""

    def test_01_lob_axiom_shape(self):
        f = parse_formula('[]([]p -> p) -> []p')
        assert f == Imp(Box(Imp(Box(P), P)), Box(P))

    def test_02_implication_associates_to_the_right(self):
        assert parse_formula('p -> q -> r') == Imp(P, Imp(Q, R))

    def test_03_conjunction_binds_tighter_than_disjunction(self):
        assert parse_formula('p & q | r') == Or(And(P, Q), R)
        assert parse_formula('p | q & r') == Or(P, And(Q, R))

    def test_04_negation_is_sugar(self):
        assert parse_formula('~p') == Imp(P, BOTTOM)
        assert parse_formula('~~p') == neg(neg(P))
        assert parse_formula('false') == BOTTOM

    def test_05_modalities_are_prefix_operators(self):
        assert parse_formula('<>[]p & q') == And(Dia(Box(P)), Q)

    def test_06_error_at_end_of_input(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula('p &')
        assert info.value.offset == 3
        assert info.value.expected

    def test_07_error_on_unexpected_token(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula('p q')
        assert info.value.offset == 2

    def test_08_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            parse_formula('(p')


class TestRender:
    """Minimal-parenthesis printing."""

    @pytest.mark.parametrize('text', [
        '[]([]p -> p) -> []p',
        'p | ~p',
        '<>p -> <>(p & []~p)',
        '(p -> q) -> r',
        '[]p -> [][]p',
        '~(p | q)',
    ])
    def test_01_rendering_is_stable(self, text):
        assert render_formula(parse_formula(text)) == text

    def test_02_redundant_parentheses_are_dropped(self):
        assert render_formula(parse_formula('((p)) & (q)')) == 'p & q'
        assert render_formula(parse_formula('p -> (q -> r)')) == 'p -> q -> r'


class TestStructure:
    """Size, depth, atoms and subformulas."""

    def test_01_size_and_depth(self):
        f = parse_formula('[]p -> p')
        assert size(f) == 4
        assert depth(f) == 2

    def test_02_atoms(self):
        assert atoms(parse_formula('p & []q -> false')) == {'p', 'q'}

    def test_03_subformula_closure_shares_repeats(self):
        closure = subformula_closure(parse_formula('[]p -> p'))
        assert closure == {Imp(Box(P), P), Box(P), P}


class TestStandardTranslation:
    """First-order shape over R and unary predicates."""

    def test_01_box(self):
        fo = standard_translation('x0', Box(P))
        assert render_first_order(fo) == 'forall y0 (x0Ry0 -> p(y0))'

    def test_02_diamond(self):
        fo = standard_translation('x0', Dia(P))
        assert render_first_order(fo) == 'exists y0 (x0Ry0 & p(y0))'

    def test_03_bound_variables_avoid_the_free_label(self):
        fo = standard_translation('y0', Box(Box(P)))
        assert render_first_order(fo) == \
            'forall y1 (y0Ry1 -> forall y2 (y1Ry2 -> p(y2)))'

    def test_04_propositional_connectives(self):
        fo = standard_translation('x', parse_formula('p -> q | false'))
        assert render_first_order(fo) == '(p(x) -> (q(x) | false))'
