#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import pytest

from config import ConfigurationError, get_seed
from corpus import (
    axiom_instances,
    formula_corpus,
    insert_leaf_thinning,
    local_soundness_cases,
    make_rng,
    model_sample,
    random_kripke,
    soundness_corpus,
)
from cyclic_proof import check_local, check_progress, eliminate_thinning
from formula import Box, Imp
from global_variables import DEFAULT_SEED
from prover import Provable, SearchConfig, prove
from semantics import (
    birel_satisfies,
    check_igl_birel_class,
    check_igl_pred_class,
    enumerate_igl_models,
    kripke_violations,
    local_soundness_witness,
    model_violations,
    seq_satisfied,
)
from sequent_calculus import SystemId


class TestSeeds:
    """Seeded generation."""

    def test_01_default_seed(self):
        assert get_seed() == DEFAULT_SEED

    def test_02_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv('IGL_SEED', '17')
        assert get_seed() == 17

    def test_03_bad_seed(self, monkeypatch):
        monkeypatch.setenv('IGL_SEED', 'seventeen')
        with pytest.raises(ConfigurationError):
            get_seed()

    def test_04_corpus_is_reproducible(self):
        assert formula_corpus(20, seed=3) == formula_corpus(20, seed=3)


class TestRandomModels:
    """Sampled models stay inside the class."""

    def test_01_birelational_samples(self):
        models = list(model_sample(10, 3, seed=1))
        assert len(models) == 10
        for m in models:
            assert model_violations(m) == []
            assert check_igl_birel_class(m).ok

    def test_02_kripke_samples(self):
        rng = make_rng(5)
        for n in (1, 2, 3):
            k = random_kripke(rng, n)
            assert k is not None
            assert kripke_violations(k) == []
            assert check_igl_pred_class(k).ok


class TestLocalSoundness:
    """Rules of the labelled calculus are locally sound on sampled models."""

    def test_01_falsified_premiss_above_the_conclusion(self):
        cases = list(local_soundness_cases(500, seed=2))
        assert len(cases) == 500
        for m, r, i in cases:
            assert not seq_satisfied(m, i, r.conclusion)
            premiss, j = local_soundness_witness(m, r, i)
            assert premiss in r.premisses
            assert not seq_satisfied(m, j, premiss)
            assert all((i[x], j[x]) in m.leq for x in i)

    def test_02_implication_left_is_sampled(self):
        rules = {r.rule for _, r, _ in local_soundness_cases(500, seed=2)}
        assert 'impL' in rules


class TestSoundness:
    """Provable formulas hold in every small IGL model."""

    def test_01_corpus_starts_with_axioms(self):
        corpus = soundness_corpus(50, seed=0)
        axioms = axiom_instances()
        assert len(corpus) == 50
        assert corpus[:len(axioms)] == axioms
        assert all(isinstance(f, Imp) and isinstance(f.left, Box)
                   for f in axioms)

    def test_02_provable_formulas_are_valid(self):
        cfg = SearchConfig(system=SystemId.IK4, max_labels=8, max_steps=3000)
        provable = [f for f in soundness_corpus(50, seed=0)
                    if isinstance(prove(f, cfg), Provable)]
        assert len(provable) >= 3
        violations = []
        for m in enumerate_igl_models(3, ['p', 'q']):
            for f in provable:
                violations += [(w, f) for w in m.worlds
                               if not birel_satisfies(m, w, f)]
        assert violations == []


class TestThinning:
    """Thinning inserted above axioms keeps certificates valid, and
    elimination removes it again."""

    def test_01_inserted_thinning(self, lob_certificate):
        for seed in range(4):
            p = insert_leaf_thinning(lob_certificate, make_rng(seed))
            assert check_local(p) == []
            assert check_progress(p).progressing

    def test_02_elimination_on_generated_proofs(self, lob_certificate,
                                                contra_lob_certificate):
        generated = [insert_leaf_thinning(p, make_rng(seed))
                     for p in (lob_certificate, contra_lob_certificate)
                     for seed in range(50)]
        for p in generated:
            assert any(n.rule == 'th' for n in p.nodes.values())
            out = eliminate_thinning(p)
            assert all(n.rule != 'th' for n in out.nodes.values())
            assert out.nodes[out.root].sequent == p.nodes[p.root].sequent
            assert check_local(out) == []
            assert check_progress(out).progressing \
                == check_progress(p).progressing
