# ****************************************************************************
# conftest.py
#
# DESCRIPTION:
# Shared pytest fixtures and the hypothesis profile of the dslib tests.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import json
import pytest
from hypothesis import settings, HealthCheck

from dslib.measures import make_atomic, lebesgue
from dslib.dsl_save import to_json

settings.register_profile('dslib', max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('dslib')


@pytest.fixture
def dirac():
    '''Unit point mass at zeta = 1.'''
    return make_atomic([(0.0, [[1.0]])])


@pytest.fixture
def sigma():
    return lebesgue(1)


@pytest.fixture
def write_doc(tmp_path):
    '''Writes a dict / list as JSON into tmp_path and returns the path.'''
    def _write(name, obj):
        ofile = tmp_path / name
        ofile.write_text(obj if isinstance(obj, str) else to_json(obj))
        return str(ofile)
    return _write


@pytest.fixture
def small_config(tmp_path):
    '''Configuration file with a small built-in corpus.'''
    cfg = {'corpus': {'seed': 7, 'ntriples': 6, 'ntuples': 3, 'm': [2, 3], 'dimE': [1, 2],
                      'degree': [0, 5], 'nmax': 3},
           'quadrature': {'cases': 2}}
    ofile = tmp_path / 'small.yaml'
    ofile.write_text(json.dumps(cfg))
    return str(ofile)
