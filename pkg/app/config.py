#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import logging
import os

import yaml
from dotenv import load_dotenv

from global_variables import (
    DEFAULT_SEED,
    MAX_DEPTH,
    MAX_LABELS,
    MAX_STEPS,
)

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'Data')


class ConfigurationError(ValueError):
    pass


def get_config_params():
    """
    Retrieve configuration parameters from environment variables.

    Variables from a .env file are loaded into the environment first.

    Returns:
        dict: environment variable name to value (None when unset).
    """
    load_dotenv()
    env_variables = [
        'IGL_SEED',
        'IGL_MAX_LABELS',
        'IGL_MAX_DEPTH',
        'IGL_MAX_STEPS',
        'LOG_LEVEL'
    ]
    config_params = {}
    for var_name in env_variables:
        config_params[var_name] = os.getenv(var_name)
    return config_params


def _as_int(value, name):
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{name} must be an integer: {e}") from e


def get_seed():
    '''Seed for random corpora, IGL_SEED or the default'''
    seed = get_config_params()['IGL_SEED']
    if seed is None or seed == '':
        return DEFAULT_SEED
    return _as_int(seed, 'IGL_SEED')


def load_search_defaults(system_name, path=None):
    """
    Search bounds for one system.

    Values come from Data/search_defaults.yml, overridden by the
    IGL_MAX_LABELS / IGL_MAX_DEPTH / IGL_MAX_STEPS environment variables.

    Returns:
        dict: with keys max_labels, max_depth, max_steps.

    Raises:
        ConfigurationError: unreadable YAML or a non-positive bound.
    """
    path = path or os.path.join(DATA_DIR, 'search_defaults.yml')
    bounds = {'max_labels': MAX_LABELS, 'max_depth': MAX_DEPTH,
              'max_steps': MAX_STEPS}
    try:
        with open(path, encoding='utf-8') as defaults_yml:
            defaults = yaml.safe_load(defaults_yml) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Cannot read {path}: {e}") from e
    bounds.update(defaults.get('default', {}) or {})
    bounds.update(defaults.get(system_name, {}) or {})
    params = get_config_params()
    for key, var_name in (('max_labels', 'IGL_MAX_LABELS'),
                          ('max_depth', 'IGL_MAX_DEPTH'),
                          ('max_steps', 'IGL_MAX_STEPS')):
        if params[var_name]:
            bounds[key] = params[var_name]
    for key in bounds:
        bounds[key] = _as_int(bounds[key], key)
        if bounds[key] < 1:
            raise ConfigurationError(f"{key} must be at least 1")
    logger.debug("Search bounds for %s: %s", system_name, bounds)
    return bounds
