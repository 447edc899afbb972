#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import pytest

from cutelim import (
    CutReductionError,
    EmbeddingError,
    as_labelled_proof,
    compute_bar,
    cut_infos,
    degree_of,
    degree_reduce_bounded,
    embed_multisuccedent,
    invert_or_left,
    push_cuts_above_bar,
    reduce_cut_step,
    reduce_to_labelled,
)
from cyclic_proof import ProofBuilder, check_local, check_progress
from formula import parse_formula
from prover import Provable, SearchConfig, prove
from sequent_calculus import (
    RuleInstance,
    SystemId,
    make_instance,
    parse_entry,
    parse_sequent,
)

DIK4 = SystemId.dIK4
CHI = parse_entry('x:p + x:q')


def _id(s, left, right, generalized=False):
    return RuleInstance('id', parse_sequent(s),
                        principal=(('L', parse_entry(left)),
                                   ('R', parse_entry(right))),
                        generalized=generalized)


def key_cut_proof():
    """
    x:p => x:p + x:q by a cut on x:p + x:q whose left premiss picks the
    first disjunct and whose right premiss splits it.
    """
    builder = ProofBuilder(DIK4)
    conclusion = parse_sequent('x:p => x:p + x:q')
    left = make_instance('dis-orR', conclusion, DIK4,
                         principal=(('R', CHI),), split=1, choice=0)
    right = make_instance('dis-orL',
                          parse_sequent('x:p + x:q => x:p + x:q'), DIK4,
                          principal=(('L', CHI),), split=1)
    cut = RuleInstance('cut', conclusion,
                       (left.conclusion, right.conclusion), cut_formula=CHI)
    builder.put('c', conclusion, cut, ['l', 'r'])
    builder.put('l', left.conclusion, left, ['l0'])
    builder.put('l0', left.premisses[0],
                _id('x:p => x:p', 'x:p', 'x:p'))
    builder.put('r', right.conclusion, right, ['r0', 'r1'])
    builder.put('r0', right.premisses[0],
                _id('x:p => x:p + x:q', 'x:p', 'x:p + x:q', True))
    builder.put('r1', right.premisses[1],
                _id('x:q => x:p + x:q', 'x:q', 'x:p + x:q', True))
    return builder.build('c')


def multi_succedent_lob():
    outcome = prove(parse_formula('[]([]p -> p) -> []p'),
                    SearchConfig(system=SystemId.mIK4))
    assert isinstance(outcome, Provable)
    return outcome.proof


class TestCutDegree:
    """Cut bookkeeping."""

    def test_01_cut_free_proof(self, lob_certificate):
        assert degree_of(lob_certificate) == 0
        assert cut_infos(lob_certificate) == []

    def test_02_disjunctive_cut(self):
        p = key_cut_proof()
        assert check_local(p) == []
        assert degree_of(p) == 2
        assert [info.node for info in cut_infos(p)] == ['c']


class TestReduction:
    """Single rewrites and bounded degree reduction."""

    def test_01_key_case(self):
        out = reduce_cut_step(key_cut_proof(), 'c')
        assert out.conclusion == parse_sequent('x:p => x:p + x:q')
        assert degree_of(out) == 1
        assert check_local(out) == []

    def test_02_not_a_cut(self):
        with pytest.raises(CutReductionError):
            reduce_cut_step(key_cut_proof(), 'l')

    def test_03_degree_reduction(self):
        result = degree_reduce_bounded(key_cut_proof(), max_height=3)
        assert result.finished
        assert result.degree == 1
        assert [item['case'] for item in result.trace] == ['key']

    def test_04_push_below_a_bar(self):
        p = key_cut_proof()
        pushed = push_cuts_above_bar(p, compute_bar(p, 1), 2)
        assert pushed.finished
        assert pushed.steps == 1
        assert degree_of(pushed.proof) == 1

    def test_05_disjunction_left_in_the_conclusion(self):
        result = reduce_to_labelled(key_cut_proof())
        assert result.finished
        with pytest.raises(CutReductionError):
            as_labelled_proof(result.proof)

    def test_06_invert_disjunction_on_the_left(self):
        p = key_cut_proof()
        right = ProofBuilder(DIK4)
        right.nodes = dict(p.nodes)
        inverted = invert_or_left(right.build('r'), CHI, 1)
        assert inverted.conclusion == parse_sequent('x:q => x:p + x:q')
        assert check_local(inverted) == []

    def test_07_invert_needs_the_entry(self, lob_certificate):
        with pytest.raises(CutReductionError):
            invert_or_left(lob_certificate, CHI, 0)


class TestBar:
    """Bars of the unfolding."""

    def test_01_bar_is_an_antichain(self, lob_certificate):
        bar = compute_bar(lob_certificate, 4)
        assert bar.is_antichain()
        assert (0, 0, 0, 1) in bar.positions
        assert bar.height == 4

    def test_02_push_without_cuts(self, lob_certificate):
        pushed = push_cuts_above_bar(
            lob_certificate, compute_bar(lob_certificate, 3), 2)
        assert pushed.finished
        assert pushed.steps == 0
        assert pushed.trace_preserved


class TestEmbedding:
    """Multi-succedent proofs read in the disjunctive system."""

    def test_01_classical_proofs_are_rejected(self, contra_lob_certificate):
        with pytest.raises(EmbeddingError):
            embed_multisuccedent(contra_lob_certificate)

    def test_02_disjunctive_proofs_pass_through(self):
        p = key_cut_proof()
        assert embed_multisuccedent(p) is p

    def test_03_cuts_are_rejected(self):
        builder = ProofBuilder(SystemId.mIK4)
        s = parse_sequent('x:p => x:p')
        builder.put('c', s, RuleInstance('cut', s, (s, s),
                                         cut_formula=parse_entry('x:p')),
                    ['a', 'b'])
        builder.put('a', s, _id('x:p => x:p', 'x:p', 'x:p'))
        builder.put('b', s, _id('x:p => x:p', 'x:p', 'x:p'))
        with pytest.raises(EmbeddingError):
            embed_multisuccedent(builder.build('c'))

    def test_04_lob_embeds(self):
        p = multi_succedent_lob()
        q = embed_multisuccedent(p)
        assert q.system is DIK4
        assert q.conclusion == p.conclusion
        assert check_local(q) == []
        assert check_progress(q).progressing

    def test_05_lob_reduces_to_a_labelled_proof(self):
        q = embed_multisuccedent(multi_succedent_lob())
        result = reduce_to_labelled(q)
        assert result.finished
        assert result.degree <= 1
        labelled = as_labelled_proof(result.proof)
        assert labelled.system is SystemId.IK4
        assert check_local(labelled) == []
        assert check_progress(labelled).progressing
