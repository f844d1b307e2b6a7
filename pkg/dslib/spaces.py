#!/usr/bin/env python
# ****************************************************************************
# spaces.py
#
# DESCRIPTION:
# The model space H_mu(E) defined by a measure tuple mu = (mu_1..mu_{m-1}):
#
#   |f|^2_mu = |f|^2_{H^2} + sum_j D_{mu_j, j}(f).
#
# All statements about the shift M_z are realized as sesquilinear forms on
# polynomials: tuple inner products, Gram matrices on the monomial basis,
# the defect forms <beta_r(M_z) f, g> and the forms
#
#   Q_r(f) = <beta_r f, f> - sum_{n>=1} <beta_{r+1} L^n f, L^n f>.
#
# Gram matrices follow the convention G[u, v] = <b_v, b_u> for the basis
# b_{(k,i)} = z^k e_i (index k*dimE + i), so that c* G c = |sum c_v b_v|^2.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
import numpy as np

from .errors import DimensionMismatch, BadRange
from .linalg import binom, min_eig, max_abs, adj, numerical_rank
from .measures import conjugate
from .polynomials import h2_inner, shift_power, lshift, lshift_power, dilate, sub
from .dirichlet import dirichlet_form, dirichlet_value, dirichlet_gram, gram_value
from .dirichlet import relative_residual, make_report, inputs_digest

GRAM_PSD_TOL = 1.0e-9


class MeasureTuple(object):
    '''
    Ordered tuple (mu_1, ..., mu_{m-1}) of measures (or moment sequences)
    sharing dimE. m = len(measures) + 1.
    '''
    def __init__(self, measures):
        measures = tuple(measures)
        if len(measures) < 1:
            raise BadRange('a measure tuple needs at least one measure (m >= 2)')
        dims = sorted(set([mu.dimE for mu in measures]))
        if len(dims) != 1:
            raise DimensionMismatch('measures of the tuple have dimensions {}'.format(dims))
        self._measures = measures
        self._dimE = dims[0]

    @property
    def m(self):
        return len(self._measures) + 1

    @property
    def dimE(self):
        return self._dimE

    @property
    def measures(self):
        return self._measures

    def measure(self, r):
        '''mu_r, 1 <= r <= m-1.'''
        if not (1 <= r <= len(self._measures)):
            raise BadRange('measure index {} outside 1..{}'.format(r, len(self._measures)))
        return self._measures[r - 1]

    def __len__(self):
        return len(self._measures)

    def __repr__(self):
        return 'MeasureTuple(m={}, dimE={})'.format(self.m, self._dimE)


class GramModel(object):
    '''
    Gram matrix of H_mu(E) on polynomials of degree <= d (k-major basis).
    '''
    ordering = 'k-major'

    def __init__(self, mtuple, d, matrix):
        self._tuple = mtuple
        self._d = int(d)
        self._matrix = np.array(matrix, dtype=complex)
        self._matrix.setflags(write=False)
        self._min_eig = min_eig(self._matrix)

    @property
    def tuple(self):
        return self._tuple

    @property
    def d(self):
        return self._d

    @property
    def dimE(self):
        return self._tuple.dimE

    @property
    def matrix(self):
        return self._matrix

    @property
    def min_eig(self):
        return self._min_eig

    def block(self, k, l):
        n = self.dimE
        return self._matrix[k * n:(k + 1) * n, l * n:(l + 1) * n]

    def to_dict(self):
        return {'d': self._d, 'dimE': self.dimE, 'ordering': self.ordering, 'matrix': self._matrix}


def make_tuple(measures):
    return MeasureTuple(measures)


def conjugate_tuple(mtuple, V):
    '''The tuple (V* mu_j V)_j.'''
    return MeasureTuple([conjugate(mu, V) for mu in mtuple.measures])


def _check(mtuple, f, g=None):
    if f.dimE != mtuple.dimE or (g is not None and g.dimE != mtuple.dimE):
        raise DimensionMismatch('tuple of dimension {} paired with polynomials of other dimension'.format(mtuple.dimE))


def tuple_inner(mtuple, f, g):
    '''<f, g>_mu = <f, g>_{H^2} + sum_j D_{mu_j, j}(f, g).'''
    _check(mtuple, f, g)
    out = h2_inner(f, g)
    for j, mu in enumerate(mtuple.measures, start=1):
        out += dirichlet_form(mu, j, f, g)
    return complex(out)


def tuple_norm_sq(mtuple, f):
    return float(tuple_inner(mtuple, f, f).real)


def gram(mtuple, d):
    '''
    Gram model of degree d: block (k,l) = delta_{kl} I + sum_j C(min(k,l), j) mu_j^(k-l).

    Entry [(k,i), (l,j)] is <z^l e_j, z^k e_i>, the complex conjugate of
    <z^k e_i, z^l e_j>; with this ordering c* G c = |sum c_v b_v|^2 and a
    unitary change of basis U acts as U* G U.
    '''
    log = logging.getLogger(__name__)
    assert d >= 0, 'Error - degree must be nonnegative, got {}'.format(d)
    n = mtuple.dimE
    G = np.eye((d + 1) * n, dtype=complex)
    for j, mu in enumerate(mtuple.measures, start=1):
        G += dirichlet_gram(mu, j, d)
    herm = max_abs(G - adj(G))
    assert herm <= 1.0e-12 * max(1.0, max_abs(G)), 'Error - Gram matrix not Hermitian ({:.3e})'.format(herm)
    model = GramModel(mtuple, d, G)
    if model.min_eig < -GRAM_PSD_TOL:
        log.warning('Gram matrix of degree {} is not PSD (smallest eigenvalue {:.3e})'.format(d, model.min_eig))
    return model


def defect_form(mtuple, r, f, g):
    '''<beta_r(M_z) f, g>_mu = sum_j (-1)^(r-j) C(r,j) <z^j f, z^j g>_mu.'''
    assert r >= 0, 'Error - defect order must be nonnegative, got {}'.format(r)
    out = 0.0 + 0.0j
    for j in range(r + 1):
        out += (-1)**(r - j) * binom(r, j) * tuple_inner(mtuple, shift_power(f, j), shift_power(g, j))
    return complex(out)


def defect_value(mtuple, r, f):
    return float(defect_form(mtuple, r, f, f).real)


def q_form(mtuple, r, f, g):
    '''
    Polarized Q_r(f,g) = <beta_r f, g> - sum_{n>=1} <beta_{r+1} L^n f, L^n g>.
    The series is finite on polynomials.
    '''
    out = defect_form(mtuple, r, f, g)
    for n in range(1, min(f.length, g.length)):
        out -= defect_form(mtuple, r + 1, lshift_power(f, n), lshift_power(g, n))
    return complex(out)


def inequality_form(mtuple, r, f):
    '''
    Q_r(f) for 1 <= r <= m-1. Returns (value, residual) where residual is
    the relative deviation of Q_r(f) from D_{mu_r,0}(f).
    '''
    if not (1 <= r <= mtuple.m - 1):
        raise BadRange('inequality form order {} outside 1..{}'.format(r, mtuple.m - 1))
    val = float(q_form(mtuple, r, f, f).real)
    ref = dirichlet_value(mtuple.measure(r), 0, f)
    return val, relative_residual(val, ref)


def wandering_span_dim(mtuple, d, tol=1.0e-10):
    '''Dimension of span{z^n x : x in E, n <= d}, by the rank of its Gram matrix.'''
    return numerical_rank(gram(mtuple, d).matrix, tol)


def defect_blocks(G, dimE, r, d):
    '''
    Pairings <beta_r T^a x_k, T^b x_i> at row (b,i), column (a,k), a,b <= d,
    computed from a pairing matrix G[(b,i),(a,k)] = <T^a x_k, T^b x_i> of
    degree >= d + r.
    '''
    D = G.shape[0] // dimE - 1
    assert d + r <= D, 'Error - pairings of degree {} cannot give defect blocks of order {} up to degree {}'.format(D, r, d)
    size = (d + 1) * dimE
    out = np.zeros((size, size), dtype=complex)
    for t in range(r + 1):
        c = (-1)**(r - t) * binom(r, t)
        out += c * G[t * dimE:t * dimE + size, t * dimE:t * dimE + size]
    return out


def q_blocks(G, dimE, r, d):
    '''
    Pairings <Q_r T^a x_k, T^b x_i>, with L^n T^a x = T^(a-n) x for x in
    ker T* (zero for n > a). Needs G of degree >= d + r + 1.
    '''
    out = defect_blocks(G, dimE, r, d)
    B = defect_blocks(G, dimE, r + 1, d)
    size = (d + 1) * dimE
    for n in range(1, d + 1):
        o = n * dimE
        out[o:, o:] -= B[:size - o, :size - o]
    return out


def defect_gram(mtuple, r, d):
    '''Gram matrix of beta_r(M_z) on polynomials of degree <= d.'''
    return defect_blocks(gram(mtuple, d + r).matrix, mtuple.dimE, r, d)


def q_gram(mtuple, r, d):
    '''Gram matrix of Q_r on polynomials of degree <= d.'''
    return q_blocks(gram(mtuple, d + r + 1).matrix, mtuple.dimE, r, d)


def dilation_convergence(mtuple, f, r_grid):
    '''
    |f_r - f|^2_mu along the sorted r-grid. Returns (values, nonincreasing flag).
    '''
    r_grid = sorted([float(r) for r in r_grid])
    vals = [tuple_norm_sq(mtuple, sub(dilate(f, r), f)) for r in r_grid]
    scale = max(1.0, tuple_norm_sq(mtuple, f))
    ok = all([b <= a + 1.0e-12 * scale for a, b in zip(vals[:-1], vals[1:])])
    return vals, ok


def shimorin_form(mtuple, f):
    '''
    <beta_1 f, f> - <beta_1 Lf, Lf> - <beta_2 f, f>; nonnegative for all f
    exactly when beta_2 <= beta_1 - L* beta_1 L holds on the model.
    '''
    Lf = lshift(f)
    return defect_value(mtuple, 1, f) - defect_value(mtuple, 1, Lf) - defect_value(mtuple, 2, f)


def verify_model_identities(mtuple, f, tol=1.0e-8):
    '''
    Reports for the model shift at f, evaluated through one Gram matrix of
    degree deg f + m + 1:
      m_isometry  |<beta_m(M_z) f, f>| / (1 + |f|^2_mu)
      q_identity  Q_r(f) = D_{mu_r,0}(f), r = 1..m-1, against the exact form
    '''
    _check(mtuple, f)
    m = mtuple.m
    n = mtuple.dimE
    d = max(f.degree(), 0)
    G = gram(mtuple, d + m + 1).matrix
    digest = inputs_digest(f, *mtuple.measures)
    norm = gram_value(G[:(d + 1) * n, :(d + 1) * n], f)
    beta = gram_value(defect_blocks(G, n, m, d), f)
    reports = [make_report('m_isometry', m, abs(beta) / (1.0 + norm), tol, digest)]
    for r in range(1, m):
        q = gram_value(q_blocks(G, n, r, d), f)
        ref = dirichlet_value(mtuple.measure(r), 0, f)
        reports.append(make_report('q_identity', r, relative_residual(q, ref), tol, digest, m=int(m)))
    return reports
