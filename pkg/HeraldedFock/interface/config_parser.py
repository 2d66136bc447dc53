# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import copy
import json
import os

from ..core.errors import InvalidConfigError

COMMANDS = ('two-mode', 'fidelity-sweep', 'optimize-mode', 'fock-n', 'wick-check', 'intensity-sweep', 'bunching')

default_config = {
    "command": None,

    "params": {
        "epsilon": None,
        "eps_over_gamma": 0.001,
        "gamma": 1.0,
        "eta_t": 1.0,
        "eta_s": 1.0,
        },

    "clicks": {
        "times": [0.0, 0.0],
        },

    "grid": {
        "step": 0.01,    # units of 1/gamma
        "window": 20.0,
        },

    "optimizer": {
        "basis_size": 5,
        "max_iters": 2000,
        "tol": 1e-9,
        "restarts": 3,
        "method": "nelder-mead",
        "seed": 0,
        "trigger_width": None,
        "use_optimal": True,
        "refine_iters": 0,
        },

    "sweep": {
        "range": "0:10:0.1",
        },

    "fock": {
        "n": 3,
        "pattern": "equal",
        },

    "two_mode": {
        "r": [0.5],
        "n_max": 50,
        },

    "wick": {
        "split": "50/50",
        "detectors": None,
        "seed": 0,
        },

    "output": {
        "path": None,
        "format": "csv",
        },

    "resources": {
        "threads": 1,
        },
}


def update_config(config_new, config_default):

    '''
    Updates the loaded method configuration with default values.
    '''
    for k, v in list(config_new.items()):
        if isinstance(v, dict) and isinstance(config_default.get(k), dict):
            update_config(v, config_default[k])
        else:
            config_default[k] = v
    return config_default


def set_dotted(config, key, value):
    '''
    Sets config['a']['b'] for the key 'a.b'.
    '''
    parts = key.split('.')
    node = config
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value
    return config


def _parse_value(text):
    text = text.strip()
    try:
        return json.loads(text)
    except ValueError:
        pass
    # unquoted lists such as 0, 0.08
    if ',' in text:
        return [_parse_value(item) for item in text.split(',') if item.strip()]
    return text


def parse_flat(lines):
    '''
    Reads 'key = value' lines; '#' starts a comment and dotted keys address nested entries.
    '''
    config = {}
    for number, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise InvalidConfigError('line {}: expected "key = value", got "{}"'.format(number, line))
        key, value = line.split('=', 1)
        key = key.strip()
        if not key:
            raise InvalidConfigError('line {}: empty key'.format(number))
        set_dotted(config, key, _parse_value(value))
    return config


def parser(input_file_path='config.json'):
    '''
    Parser for the configuration file of a run, either JSON or flat key-value text.
    '''
    if not os.path.isfile(input_file_path):
        raise InvalidConfigError('Config file "' + input_file_path + '" not found.')
    with open(input_file_path, 'r') as config_file:
        text = config_file.read()

    if input_file_path.endswith('.json') or text.lstrip().startswith('{'):
        try:
            config_new = json.loads(text)
        except ValueError as e:
            raise InvalidConfigError('Config file "' + input_file_path + '" not loaded properly: ' + str(e))
    else:
        config_new = parse_flat(text.splitlines())

    return update_config(config_new, copy.deepcopy(default_config))
