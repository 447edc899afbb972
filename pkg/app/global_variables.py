#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""

# proof search bounds
MAX_LABELS = 12
MAX_DEPTH = 400
MAX_STEPS = 20000

# label generation
ROOT_LABEL = 'x0'
FRESH_STEM = 'y'

# cut rewriting
MAX_HEIGHT = 12
MAX_REDUCTION_STEPS = 5000

# model enumeration
MAX_ENUMERATION_WORLDS = 4
DEFAULT_SEED = 0

# serialization
JSON_INDENT = 2

# command line exit codes
EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3

# surface system names accepted by the command line
SYSTEM_ALIASES = {
    'gl': 'K4',
    'k': 'K',
    'k4': 'K4',
    'igl': 'IK4',
    'migl': 'mIK4',
}
