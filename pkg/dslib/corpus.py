#!/usr/bin/env python
# ****************************************************************************
# corpus.py
#
# DESCRIPTION:
# Seeded generation of test objects: atomic and trigonometric measures,
# vector polynomials, measure tuples, unitaries, m-isometric and expansive
# sample matrices, and the built-in corpus of (measure, polynomial, order)
# triples driven by the corpus recipe of the configuration.
#
# Everything is derived from a single numpy Generator, so a given seed
# always produces the same objects in the same order.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
import numpy as np

from .linalg import adj, binom
from .measures import make_atomic, make_trig
from .polynomials import VectorPolynomial
from .spaces import MeasureTuple
from .operators import random_unitary, jordan_block, weighted_shift

DEFAULT_RECIPE = {
    'seed': 20261019,
    'ntriples': 500,
    'ntuples': 100,
    'm': [2, 5],
    'dimE': [1, 3],
    'atoms': [1, 4],
    'degree': [0, 12],
    'nmax': 6,
    'trig_order': 2,
}


def get_rng(seed):
    return np.random.default_rng(seed)


def random_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_psd(rng, dimE, rank=None, scale=1.0):
    '''Random PSD matrix A A*/rank with A of shape (dimE, rank).'''
    rank = dimE if rank is None else rank
    A = random_complex(rng, (dimE, rank))
    return scale * (A @ adj(A)) / rank


def random_angles(rng, natoms, min_sep=0.0, maxtries=1000):
    '''natoms angles in [0, 2pi) with pairwise circular distance >= min_sep.'''
    for _ in range(maxtries):
        th = np.sort(rng.uniform(0.0, 2.0 * np.pi, natoms))
        if natoms < 2 or min_sep <= 0.0:
            return th
        gaps = np.diff(np.concatenate([th, [th[0] + 2.0 * np.pi]]))
        if np.min(gaps) >= min_sep:
            return th
    assert False, 'Error - could not place {} atoms with separation {}'.format(natoms, min_sep)


def random_atomic(rng, dimE=1, natoms=None, maxatoms=4, min_sep=0.0):
    natoms = int(rng.integers(1, maxatoms + 1)) if natoms is None else natoms
    th = random_angles(rng, natoms, min_sep)
    return make_atomic([(t, random_psd(rng, dimE)) for t in th], dimE=dimE)


def random_trig(rng, dimE=1, order=2):
    '''
    Density F*F with F(t) = sum_k A_k e^{-ikt}, so C_s = sum_k A_k* A_{k+s}
    and the density is PSD by construction.
    '''
    A = [random_complex(rng, (dimE, dimE), 1.0 / np.sqrt(order + 1)) for _ in range(order + 1)]
    coeffs = {}
    for s in range(-order, order + 1):
        c = np.zeros((dimE, dimE), dtype=complex)
        for k in range(order + 1):
            if 0 <= k + s <= order:
                c += adj(A[k]) @ A[k + s]
        coeffs[s] = c
    return make_trig(coeffs, dimE)


def random_measure(rng, dimE=1, kind=None, maxatoms=4, order=2):
    kind = ('atomic', 'trig')[int(rng.integers(0, 2))] if kind is None else kind
    assert kind in ['atomic', 'trig'], 'Error - unknown measure kind {}'.format(kind)
    if kind == 'atomic':
        return random_atomic(rng, dimE, maxatoms=maxatoms)
    return random_trig(rng, dimE, order)


def random_polynomial(rng, dimE=1, degree=4):
    return VectorPolynomial(random_complex(rng, (degree + 1, dimE)))


def random_tuple(rng, m, dimE=1, kind='atomic', maxatoms=4, order=2):
    '''Tuple (mu_1..mu_{m-1}) of independent random measures.'''
    assert m >= 2, 'Error - tuple order must be at least 2, got {}'.format(m)
    return MeasureTuple([random_measure(rng, dimE, kind, maxatoms, order) for _ in range(m - 1)])


def random_unitary_matrix(rng, dim):
    return random_unitary(dim, rng)


def isometric_matrix(rng, m, size=None):
    '''
    Unitarily rotated Jordan-type matrix lambda I + c N of block size s with
    2s - 1 <= m, |lambda| = 1; an isometry of order 2s - 1.
    '''
    s = (m + 1) // 2 if size is None else size
    assert 2 * s - 1 <= m, 'Error - block size {} too large for order {}'.format(s, m)
    lam = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    J = lam * np.eye(s, dtype=complex) + rng.uniform(0.2, 1.0) * jordan_block(0.0, s)
    U = random_unitary(s, rng)
    return adj(U) @ J @ U


def expansive_matrix(rng, dim, smax=2.0):
    '''U diag(s) V with singular values s in [1, smax]; T*T >= I.'''
    s = rng.uniform(1.0, smax, dim)
    return random_unitary(dim, rng) @ np.diag(s) @ random_unitary(dim, rng)


def isometric_shift_weights(coeffs, n):
    '''
    Weights w_k = sqrt(p(k+1)/p(k)), k < n, for p(k) = 1 + sum_j c_j C(k, j)
    (j >= 1, c_j >= 0); the weighted shift is an isometry of order deg p + 1.
    '''
    def p(k):
        return 1.0 + sum([c * binom(k, j) for j, c in enumerate(coeffs, start=1)])
    assert all([c >= 0 for c in coeffs]), 'Error - coefficients must be nonnegative'
    return np.array([np.sqrt(p(k + 1) / p(k)) for k in range(n)])


def isometric_shift(coeffs, S):
    return weighted_shift(isometric_shift_weights(coeffs, S), S)


def _draw(rng, bounds):
    return int(rng.integers(bounds[0], bounds[1] + 1))


def builtin_corpus(recipe=None):
    '''
    List of triples {'index', 'mu', 'f', 'n'} following the recipe (see
    DEFAULT_RECIPE); measures alternate between atomic and trig kinds.
    '''
    log = logging.getLogger(__name__)
    rc = dict(DEFAULT_RECIPE)
    rc.update(recipe if recipe is not None else {})
    rng = get_rng(rc['seed'])
    out = []
    for i in range(rc['ntriples']):
        dimE = _draw(rng, rc['dimE'])
        kind = 'atomic' if i % 2 == 0 else 'trig'
        mu = random_measure(rng, dimE, kind, maxatoms=rc['atoms'][1], order=rc['trig_order'])
        f = random_polynomial(rng, dimE, _draw(rng, rc['degree']))
        n = int(rng.integers(0, rc['nmax'] + 1))
        out.append({'index': i, 'mu': mu, 'f': f, 'n': n})
    log.info('built-in corpus: {} triples from seed {}'.format(len(out), rc['seed']))
    return out


def tuple_corpus(recipe=None, kind='atomic', dimE_max=None, m_max=None):
    '''List of seeded measure tuples following the recipe.'''
    rc = dict(DEFAULT_RECIPE)
    rc.update(recipe if recipe is not None else {})
    rng = get_rng(rc['seed'] + 1)
    mb = [rc['m'][0], min(rc['m'][1], m_max) if m_max is not None else rc['m'][1]]
    db = [rc['dimE'][0], min(rc['dimE'][1], dimE_max) if dimE_max is not None else rc['dimE'][1]]
    return [random_tuple(rng, _draw(rng, mb), _draw(rng, db), kind, rc['atoms'][1], rc['trig_order'])
            for _ in range(rc['ntuples'])]
