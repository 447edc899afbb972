#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import os
import sys

import pytest

TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(os.path.dirname(TESTS_DIR), 'app'))

from cyclic_proof import load_proof  # noqa: E402


@pytest.fixture
def data_dir():
    return os.path.join(TESTS_DIR, 'data')


@pytest.fixture
def lob_certificate(data_dir):
    '''Hand-written IK4 cyclic proof of []([]p -> p) -> []p'''
    return load_proof(os.path.join(data_dir, 'lob_ik4.json'))


@pytest.fixture
def contra_lob_certificate(data_dir):
    '''Hand-written K4 cyclic proof of <>p -> <>(p & []~p)'''
    return load_proof(os.path.join(data_dir, 'contra_lob_k4.json'))


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch):
    for var_name in ('IGL_SEED', 'IGL_MAX_LABELS', 'IGL_MAX_DEPTH',
                     'IGL_MAX_STEPS', 'LOG_LEVEL'):
        monkeypatch.delenv(var_name, raising=False)
