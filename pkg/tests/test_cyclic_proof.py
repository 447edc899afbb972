#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import json
import os

import pytest

from cyclic_proof import (
    CertificateError,
    ProofBuilder,
    check_local,
    check_progress,
    compose,
    edge_trace_relation,
    eliminate_thinning,
    loop_progresses,
    proof_from_json,
    proof_table,
    proof_to_json,
    to_dot,
    unfold,
)
from sequent_calculus import SystemId, make_instance, parse_entry, parse_sequent


def _read(data_dir, name):
    with open(os.path.join(data_dir, name), encoding='utf-8') as source:
        return json.load(source)


def _idle_loop():
    '''x:q => x:p proved by contracting and weakening forever'''
    builder = ProofBuilder(SystemId.IK4)
    top = parse_sequent('x:q => x:p')
    q = parse_entry('x:q')
    contract = make_instance('cL', top, SystemId.IK4, principal=(('L', q),))
    weaken = make_instance('wL', contract.premisses[0], SystemId.IK4,
                           principal=(('L', q),))
    builder.put('a', top, contract, ['b'])
    builder.put('b', weaken.conclusion, weaken, ['c'])
    builder.backedge('c', top, 'a', {'x': 'x'})
    return builder.build('a')


class TestLocalCheck:
    """Rule-by-rule correctness of certificates."""

    def test_01_lob_certificate_is_locally_correct(self, lob_certificate):
        assert check_local(lob_certificate) == []

    def test_02_contra_lob_certificate_is_locally_correct(
            self, contra_lob_certificate):
        assert check_local(contra_lob_certificate) == []

    def test_03_wrong_backedge_renaming(self, data_dir):
        data = _read(data_dir, 'lob_ik4.json')
        data['nodes'][-1]['backedge']['renaming'] = {'x': 'x', 'y': 'y'}
        problems = check_local(proof_from_json(data))
        assert any('n9' in p for p in problems)

    def test_04_tampered_premiss(self, data_dir):
        data = _read(data_dir, 'lob_ik4.json')
        data['nodes'][1]['fresh'] = 'x'
        assert check_local(proof_from_json(data))

    def test_05_unknown_successor(self, data_dir):
        data = _read(data_dir, 'lob_ik4.json')
        data['nodes'][0]['premisses'] = ['missing']
        with pytest.raises(CertificateError):
            proof_from_json(data)

    def test_06_malformed_certificate(self):
        with pytest.raises(CertificateError):
            proof_from_json({'system': 'IK4', 'root': 'n0', 'nodes': [
                {'id': 'n0', 'sequent': 'x:p', 'rule': 'id'}]})

    def test_07_rule_from_another_system(self, data_dir):
        data = _read(data_dir, 'contra_lob_k4.json')
        data['system'] = 'IK4'
        assert check_local(proof_from_json(data))


class TestProgress:
    """Global trace condition."""

    def test_01_lob_certificate_progresses(self, lob_certificate):
        report = check_progress(lob_certificate)
        assert report.progressing
        assert report.loops_checked >= 1

    def test_02_contra_lob_certificate_progresses(
            self, contra_lob_certificate):
        assert check_progress(contra_lob_certificate).progressing

    def test_03_idle_loop_has_no_progress(self):
        p = _idle_loop()
        assert check_local(p) == []
        report = check_progress(p)
        assert not report.progressing
        assert report.witness[0] == 'a'
        assert report.witness[-1] == 'a'

    def test_04_relational_step_is_a_progress_point(self, lob_certificate):
        relation = edge_trace_relation(lob_certificate, 'n6', 'n7')
        assert ('y', 'z', True) in relation.edges
        assert ('x', 'x', False) in relation.edges

    def test_05_backedge_maps_back_to_target_labels(self, lob_certificate):
        relation = edge_trace_relation(lob_certificate, 'n9', 'n2')
        assert relation.edges == {('x', 'x', False), ('z', 'y', False)}

    def test_06_idempotent_power_decides(self):
        swap = frozenset({('x', 'y', True), ('y', 'x', False)})
        assert loop_progresses(swap)
        assert not loop_progresses(frozenset({('x', 'x', False)}))

    def test_07_progress_dominates_in_composition(self):
        left = frozenset({('x', 'y', False), ('x', 'y', True)})
        assert compose(left, frozenset({('y', 'y', False)})) \
            == {('x', 'y', True)}


class TestUnfolding:
    """Depth-bounded trees and thinning elimination."""

    def test_01_root_only(self, lob_certificate):
        tree = unfold(lob_certificate, 0)
        assert tree.children == []
        assert not tree.closed

    def test_02_axiom_leaf(self, lob_certificate):
        tree = unfold(lob_certificate, 4)
        leaves = {n.position: n for n in tree.walk() if not n.children}
        assert leaves[(0, 0, 0, 1)].origin == 'n5'
        assert leaves[(0, 0, 0, 1)].closed

    def test_03_backedges_unfold_in_place(self, lob_certificate):
        tree = unfold(lob_certificate, 9)
        nodes = {n.position: n for n in tree.walk()}
        again = nodes[(0,) * 8]
        assert again.origin == 'n2'
        assert str(again.sequent) == 'xRz | x:[]([]p -> p) => z:p'

    def test_04_thinning_elimination(self, lob_certificate):
        out = eliminate_thinning(lob_certificate)
        assert out.conclusion == lob_certificate.conclusion
        assert all(n.rule != 'th' for n in out.nodes.values())


class TestSerialization:
    """JSON, table and DOT output."""

    def test_01_json_round_trip(self, lob_certificate):
        again = proof_from_json(proof_to_json(lob_certificate))
        assert again.nodes == lob_certificate.nodes
        assert again.system is SystemId.IK4

    def test_02_table_has_a_row_per_node(self, lob_certificate):
        table = proof_table(lob_certificate)
        assert len(table) == len(lob_certificate.nodes)
        assert list(table.columns) == ['id', 'rule', 'premisses', 'sequent']

    def test_03_dot_marks_backedges(self, lob_certificate):
        dot = to_dot(lob_certificate)
        assert dot.startswith('digraph proof {')
        assert '"n9" -> "n2" [style=dashed' in dot


def _verdict(data):
    try:
        p = proof_from_json(data)
    except CertificateError:
        return 'malformed'
    if check_local(p):
        return 'local'
    if not check_progress(p).progressing:
        return 'progress'
    return 'valid'


def _without_atoms(data):
    '''Certificates with one relational atom dropped from one node'''
    for index, node in enumerate(data['nodes']):
        if ' | ' not in node['sequent']:
            continue
        rel, rest = node['sequent'].split(' | ', 1)
        atoms = rel.split(', ')
        for atom in atoms:
            kept = [a for a in atoms if a != atom]
            mutant = json.loads(json.dumps(data))
            mutant['nodes'][index]['sequent'] = \
                f"{', '.join(kept)} | {rest}" if kept else rest
            yield node['id'], atom, mutant


def _redirected(data):
    '''Certificates with a back-edge sent to another node'''
    edges = [i for i, n in enumerate(data['nodes'])
             if n['rule'] == 'backedge']
    for index in edges:
        target = data['nodes'][index]['backedge']['target']
        for node in data['nodes']:
            if node['rule'] == 'backedge' or node['id'] == target:
                continue
            mutant = json.loads(json.dumps(data))
            mutant['nodes'][index]['backedge']['target'] = node['id']
            yield node['id'], mutant


def _splice_idle_loop(p, node_id):
    '''Replace the subproof at node_id by a cL/wL loop back to it'''
    builder = ProofBuilder(p.system)
    builder.nodes = dict(p.nodes)
    s = p.nodes[node_id].sequent
    entry = s.lhs[0]
    contract = make_instance('cL', s, p.system, principal=(('L', entry),))
    weaken = make_instance('wL', contract.premisses[0], p.system,
                           principal=(('L', entry),))
    middle = builder.reserve(f'{node_id}c')
    back = builder.backedge(f'{node_id}w', weaken.premisses[0], node_id,
                            {x: x for x in s.labels()})
    builder.put(node_id, s, contract, [middle])
    builder.put(middle, weaken.conclusion, weaken, [back])
    return builder.build(p.root)


class TestMutations:
    """Damaged certificates are rejected."""

    FILES = ('lob_ik4.json', 'contra_lob_k4.json')

    def test_01_dropped_atoms(self, data_dir):
        verdicts = {}
        for name in self.FILES:
            for node_id, atom, mutant in _without_atoms(_read(data_dir, name)):
                verdicts[(name, node_id, atom)] = _verdict(mutant)
        assert len(verdicts) == 30
        assert [k for k, v in verdicts.items() if v == 'valid'] == []

    def test_02_redirected_backedges(self, data_dir):
        verdicts = {}
        for name in self.FILES:
            for target, mutant in _redirected(_read(data_dir, name)):
                verdicts[(name, target)] = _verdict(mutant)
        assert len(verdicts) == 18
        assert [k for k, v in verdicts.items() if v == 'valid'] == []

    def test_03_idle_loops_fail_with_a_witness(self, lob_certificate,
                                                contra_lob_certificate):
        spliced = 0
        for p in (lob_certificate, contra_lob_certificate):
            for node_id, node in sorted(p.nodes.items()):
                if not node.sequent.lhs:
                    continue
                mutant = _splice_idle_loop(p, node_id)
                assert check_local(mutant) == []
                report = check_progress(mutant)
                assert not report.progressing
                assert node_id in report.witness
                spliced += 1
        assert spliced == 20

    def test_04_original_certificates_stay_valid(self, data_dir):
        for name in self.FILES:
            assert _verdict(_read(data_dir, name)) == 'valid'
