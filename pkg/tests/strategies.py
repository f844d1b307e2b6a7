# ****************************************************************************
# strategies.py
#
# DESCRIPTION:
# Hypothesis strategies for dslib tests. Objects are drawn through a seed
# and built with the seeded generators of dslib.corpus, so every failing
# example shrinks to a seed that reproduces it.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import numpy as np
from hypothesis import strategies as st

from dslib.corpus import get_rng, random_atomic, random_trig, random_polynomial, random_tuple, random_unitary_matrix

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=3)


@st.composite
def atomic_measures(draw, dimE=None, maxatoms=4):
    d = draw(dims) if dimE is None else dimE
    return random_atomic(get_rng(draw(seeds)), d, maxatoms=maxatoms)


@st.composite
def trig_measures(draw, dimE=None, order=2):
    d = draw(dims) if dimE is None else dimE
    return random_trig(get_rng(draw(seeds)), d, order)


@st.composite
def measures(draw, dimE=None):
    if draw(st.booleans()):
        return draw(atomic_measures(dimE))
    return draw(trig_measures(dimE))


@st.composite
def polynomials(draw, dimE=1, maxdeg=12):
    return random_polynomial(get_rng(draw(seeds)), dimE, draw(st.integers(min_value=0, max_value=maxdeg)))


@st.composite
def measure_and_polynomial(draw, maxdeg=12):
    mu = draw(measures())
    return mu, draw(polynomials(mu.dimE, maxdeg))


@st.composite
def tuples(draw, mmax=5, dimE_max=3, kind='atomic'):
    m = draw(st.integers(min_value=2, max_value=mmax))
    d = draw(st.integers(min_value=1, max_value=dimE_max))
    return random_tuple(get_rng(draw(seeds)), m, d, kind)


@st.composite
def unitaries(draw, dim):
    return random_unitary_matrix(get_rng(draw(seeds)), dim)


def moments_of(values):
    '''Scalar moment array m(0..S), shape (S+1, 1, 1).'''
    return np.array(values, dtype=complex).reshape((-1, 1, 1))
