#!/usr/bin/env python
# ****************************************************************************
# dsl_load.py
#
# DESCRIPTION:
# Strict readers for the JSON documents used by dslib: measures,
# polynomials, measure tuples, operators, moment sequences and scenario
# files (YAML or JSON). Complex scalars are [re, im] pairs (plain numbers
# are accepted as real). Unknown or missing keys raise ParseError naming
# the key and the document it belongs to.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import os
import json
import logging
import numpy as np
import yaml

from .errors import ParseError
from .measures import make_atomic, make_trig, MomentSequence
from .polynomials import VectorPolynomial
from .spaces import MeasureTuple

SCENARIO_KINDS = ['identities', 'gram', 'classify', 'recover', 'roundtrip', 'wold', 'quadrature']
SCENARIO_KEYS = ['kind', 'inputs', 'tol', 'seed', 'degree', 'order', 'm', 'cap', 'radii', 'grid', 'nmax',
                 'corpus', 'name', 'K']


def _check_keys(obj, where, allowed, required=()):
    if not isinstance(obj, dict):
        raise ParseError('{} must be a JSON object, got {}'.format(where, type(obj).__name__))
    for k in obj.keys():
        if k not in allowed:
            raise ParseError("unknown key '{}' in {}".format(k, where))
    for k in required:
        if k not in obj:
            raise ParseError("missing key '{}' in {}".format(k, where))


def parse_int(v, key):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError("key '{}' must be an integer, got {!r}".format(key, v))
    return v


def parse_complex(v, key):
    if isinstance(v, bool):
        raise ParseError("key '{}' holds a boolean where a number is expected".format(key))
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all([isinstance(x, (int, float)) and not isinstance(x, bool) for x in v]):
        return complex(v[0], v[1])
    raise ParseError("key '{}' must hold a number or an [re, im] pair, got {!r}".format(key, v))


def parse_vector(v, key):
    if not isinstance(v, (list, tuple)):
        raise ParseError("key '{}' must hold a list".format(key))
    return np.array([parse_complex(x, key) for x in v], dtype=complex)


def parse_matrix(v, key):
    if not isinstance(v, (list, tuple)) or len(v) == 0:
        raise ParseError("key '{}' must hold a nonempty list of rows".format(key))
    rows = [parse_vector(r, key) for r in v]
    if len(set([len(r) for r in rows])) != 1:
        raise ParseError("key '{}' holds rows of unequal length".format(key))
    return np.array(rows, dtype=complex)


def parse_measure(obj, where='measure'):
    '''{"dimE": n, "kind": "atomic"|"trig", "atoms": [...], "coeffs": {...}}'''
    _check_keys(obj, where, ['dimE', 'kind', 'atoms', 'coeffs'], ['dimE', 'kind'])
    dimE = parse_int(obj['dimE'], 'dimE')
    kind = obj['kind']
    if kind == 'atomic':
        if 'coeffs' in obj:
            raise ParseError("unknown key 'coeffs' in atomic {}".format(where))
        atoms = []
        for i, a in enumerate(obj.get('atoms', [])):
            _check_keys(a, 'atom {} of {}'.format(i, where), ['angle', 'weight'], ['angle', 'weight'])
            if isinstance(a['angle'], bool) or not isinstance(a['angle'], (int, float)):
                raise ParseError("key 'angle' must be a real number in atom {}".format(i))
            atoms.append((float(a['angle']), parse_matrix(a['weight'], 'weight')))
        return make_atomic(atoms, dimE=dimE)
    if kind == 'trig':
        if 'atoms' in obj:
            raise ParseError("unknown key 'atoms' in trig {}".format(where))
        coeffs = {}
        for s, c in obj.get('coeffs', {}).items():
            try:
                si = int(s)
            except ValueError:
                raise ParseError("coefficient key '{}' is not an integer".format(s))
            coeffs[si] = parse_matrix(c, 'coeffs.{}'.format(s))
        return make_trig(coeffs, dimE=dimE)
    raise ParseError("key 'kind' must be 'atomic' or 'trig', got {!r}".format(kind))


def parse_polynomial(obj, where='polynomial'):
    '''{"dimE": n, "coeffs": [vector, ...]}'''
    _check_keys(obj, where, ['dimE', 'coeffs'], ['dimE', 'coeffs'])
    dimE = parse_int(obj['dimE'], 'dimE')
    coeffs = [parse_vector(c, 'coeffs') for c in obj['coeffs']]
    if len(coeffs) == 0:
        return VectorPolynomial(np.zeros((1, dimE), dtype=complex))
    if any([len(c) != dimE for c in coeffs]):
        raise ParseError("key 'coeffs' holds vectors not of length dimE={}".format(dimE))
    return VectorPolynomial(np.array(coeffs))


def parse_tuple(obj, where='tuple'):
    '''{"m": int, "measures": [measure, ...]}'''
    _check_keys(obj, where, ['m', 'measures'], ['m', 'measures'])
    m = parse_int(obj['m'], 'm')
    if not isinstance(obj['measures'], list) or len(obj['measures']) != m - 1:
        raise ParseError("key 'measures' must list m-1 = {} measures".format(m - 1))
    return MeasureTuple([parse_measure(mu, 'measure {} of {}'.format(i + 1, where)) for i, mu in enumerate(obj['measures'])])


def parse_operator(obj, where='operator'):
    '''{"dim": n, "matrix": [[...]], "kernel": [vector, ...] (optional)}. Returns (T, kernel or None).'''
    _check_keys(obj, where, ['dim', 'matrix', 'kernel'], ['dim', 'matrix'])
    dim = parse_int(obj['dim'], 'dim')
    T = parse_matrix(obj['matrix'], 'matrix')
    if T.shape != (dim, dim):
        raise ParseError("key 'matrix' has shape {}, expected ({}, {})".format(T.shape, dim, dim))
    kernel = None
    if 'kernel' in obj:
        kernel = np.array([parse_vector(v, 'kernel') for v in obj['kernel']]).T
        if kernel.shape[0] != dim:
            raise ParseError("key 'kernel' holds vectors not of length dim={}".format(dim))
    return T, kernel


def parse_moments(obj, where='moments'):
    '''{"dimE": n, "moments": [m(-S), ..., m(S)]}'''
    _check_keys(obj, where, ['dimE', 'moments'], ['dimE', 'moments'])
    dimE = parse_int(obj['dimE'], 'dimE')
    mats = [parse_matrix(c, 'moments') for c in obj['moments']]
    if len(mats) % 2 != 1 or any([c.shape != (dimE, dimE) for c in mats]):
        raise ParseError("key 'moments' must hold 2S+1 matrices of size {}".format(dimE))
    return MomentSequence(np.array(mats))


def parse_scenario(obj, where='scenario'):
    '''Validated scenario dict; file paths are kept as given.'''
    _check_keys(obj, where, SCENARIO_KEYS, ['kind'])
    if obj['kind'] not in SCENARIO_KINDS:
        raise ParseError("key 'kind' must be one of {}, got {!r}".format(SCENARIO_KINDS, obj['kind']))
    for k in ['seed', 'degree', 'order', 'm', 'cap', 'nmax', 'K']:
        if k in obj and obj[k] is not None:
            parse_int(obj[k], k)
    obj = dict(obj)
    if 'tol' in obj and obj['tol'] is not None:
        # YAML reads 1e-8 (no dot) as a string
        try:
            assert not isinstance(obj['tol'], bool)
            obj['tol'] = float(obj['tol'])
        except (AssertionError, TypeError, ValueError):
            raise ParseError("key 'tol' must be a number, got {!r}".format(obj['tol']))
    inputs = obj.get('inputs', {})
    if inputs is None:
        inputs = {}
    _check_keys(inputs, 'inputs of {}'.format(where), ['measure', 'polynomial', 'tuple', 'operator', 'moments', 'unitary'])
    return dict(obj, inputs=dict(inputs))


def read_document(ifile):
    '''Parse a JSON (or YAML) document; ParseError on malformed content.'''
    log = logging.getLogger(__name__)
    if not os.path.isfile(ifile):
        raise FileNotFoundError('file not found: {}'.format(ifile))
    log.info('Loading {}'.format(ifile))
    with open(ifile, 'r') as f:
        text = f.read()
    try:
        if ifile.endswith('.yaml') or ifile.endswith('.yml'):
            return yaml.safe_load(text)
        return json.loads(text)
    except (ValueError, yaml.YAMLError) as err:
        raise ParseError('malformed document {}: {}'.format(ifile, err))


def load_measure(ifile):
    return parse_measure(read_document(ifile))


def load_polynomial(ifile):
    return parse_polynomial(read_document(ifile))


def load_tuple(ifile):
    return parse_tuple(read_document(ifile))


def load_operator(ifile):
    return parse_operator(read_document(ifile))


def load_moments(ifile):
    return parse_moments(read_document(ifile))


def load_scenario(ifile):
    return parse_scenario(read_document(ifile))
