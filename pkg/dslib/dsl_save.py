#!/usr/bin/env python
# ****************************************************************************
# dsl_save.py
#
# DESCRIPTION:
# Writers for dslib objects and reports: JSON documents (complex scalars as
# [re, im] pairs, sorted keys), JSON-lines report streams and text tables
# rendered with pandas. Files are written atomically.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import os
import json
import logging
import numpy as np
import pandas as pd

from .systools import write_atomic

ANSI_RED = '\033[31m'
ANSI_GREEN = '\033[32m'
ANSI_RESET = '\033[0m'


def complex_to_json(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def array_to_json(a):
    '''Nested lists; complex entries as [re, im].'''
    a = np.asarray(a)
    if a.ndim == 0:
        return complex_to_json(a) if np.iscomplexobj(a) else a.item()
    return [array_to_json(x) for x in a]


def _default(obj):
    if isinstance(obj, np.ndarray):
        return array_to_json(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if hasattr(obj, 'to_dict'):
        return obj.to_dict()
    raise TypeError('cannot serialize object of type {}'.format(type(obj).__name__))


def to_json(obj, indent=None):
    return json.dumps(obj, sort_keys=True, indent=indent, default=_default)


def measure_to_dict(mu):
    if mu.kind == 'atomic':
        atoms = [{'angle': float(th), 'weight': array_to_json(w.astype(complex))} for th, w in zip(mu.angles, mu.weights)]
        return {'dimE': mu.dimE, 'kind': 'atomic', 'atoms': atoms}
    assert mu.kind == 'trig', 'Error - cannot serialize measure of kind {}'.format(mu.kind)
    coeffs = {str(s): array_to_json(c.astype(complex)) for s, c in sorted(mu.coeffs.items())}
    return {'dimE': mu.dimE, 'kind': 'trig', 'coeffs': coeffs}


def polynomial_to_dict(f):
    return {'dimE': f.dimE, 'coeffs': array_to_json(f.coeffs.astype(complex))}


def tuple_to_dict(mtuple):
    return {'m': mtuple.m, 'measures': [measure_to_dict(mu) for mu in mtuple.measures]}


def operator_to_dict(T, kernel=None):
    T = np.asarray(T, dtype=complex)
    out = {'dim': T.shape[0], 'matrix': array_to_json(T)}
    if kernel is not None:
        out['kernel'] = array_to_json(np.asarray(kernel, dtype=complex).T)
    return out


def moments_to_dict(seq):
    return {'dimE': seq.dimE, 'moments': array_to_json(seq.matrices)}


def report_lines(rows):
    '''JSON-lines text, one sorted-key document per report.'''
    return ''.join([to_json(r.to_dict() if hasattr(r, 'to_dict') else r) + '\n' for r in rows])


def reports_table(rows, color=None):
    '''
    Text table of report dicts. Pass/fail is highlighted with ANSI colors
    unless color is False or DSL_NO_COLOR is set.
    '''
    if color is None:
        color = os.environ.get('DSL_NO_COLOR') is None
    rows = [r.to_dict() if hasattr(r, 'to_dict') else dict(r) for r in rows]
    if len(rows) == 0:
        return '(no reports)\n'
    df = pd.DataFrame(rows)
    first = [c for c in ['identity', 'n', 'residual', 'tol', 'pass'] if c in df.columns]
    df = df[first + [c for c in df.columns if c not in first]]
    for c in df.columns:
        df[c] = [v if not isinstance(v, (list, dict)) else json.dumps(v, sort_keys=True, default=_default) for v in df[c]]
    if 'pass' in df.columns:
        labels = ['PASS' if p else 'FAIL' for p in df['pass']]
        if color:
            labels = ['{}{}{}'.format(ANSI_GREEN if p else ANSI_RED, l, ANSI_RESET) for p, l in zip(df['pass'], labels)]
        df['pass'] = labels
    return df.to_string(index=False) + '\n'


def save_json(ofile, obj):
    '''Save a single JSON document (indented, sorted keys).'''
    log = logging.getLogger(__name__)
    write_atomic(ofile, to_json(obj, indent=1) + '\n')
    log.info('written to {}'.format(ofile))


def save_lines(ofile, rows):
    '''Save a JSON-lines report stream.'''
    log = logging.getLogger(__name__)
    write_atomic(ofile, report_lines(rows))
    log.info('{:,} reports written to {}'.format(len(rows), ofile))
