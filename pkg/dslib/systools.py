#!/usr/bin/env python
# ****************************************************************************
# systools.py
#
# DESCRIPTION:
# Collection of system tools: configuration loading and merging, output
# directories and atomic file writes.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import os
import copy
import tempfile
import yaml

DEFAULTS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'defaults.yaml')


def check_dir(full_file_name):
    '''Check if directory exists, creates it if needed'''
    odir = os.path.dirname(full_file_name)
    if odir and not os.path.isdir(odir):
        os.makedirs(odir)
    return


def load_config(config_file):
    '''
    Load a yaml configuration file.
    '''
    assert os.path.isfile(config_file), 'Error - file not found: {}'.format(config_file)
    with open(config_file, 'r') as f:
        config = yaml.load(f, Loader=yaml.FullLoader)
    return config if config is not None else {}


def _merge(base, upd):
    for k, v in upd.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _merge(base[k], v)
        else:
            base[k] = copy.deepcopy(v)
    return base


def get_config(config_file=None, overrides=None):
    '''
    Packaged defaults, updated by a user yaml file and a nested dict of
    overrides (in this order).
    '''
    config = load_config(DEFAULTS_FILE)
    if config_file is not None:
        _merge(config, load_config(config_file))
    if overrides is not None:
        _merge(config, overrides)
    return config


def write_atomic(ofile, text):
    '''Write text to ofile through a temporary file in the same directory and os.replace.'''
    check_dir(ofile)
    odir = os.path.dirname(os.path.abspath(ofile))
    fd, tmp = tempfile.mkstemp(dir=odir, prefix='.tmp_', suffix=os.path.basename(ofile))
    try:
        with os.fdopen(fd, 'w') as f:
            f.write(text)
        os.replace(tmp, ofile)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return
