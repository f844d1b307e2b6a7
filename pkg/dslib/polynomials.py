#!/usr/bin/env python
# ****************************************************************************
# polynomials.py
#
# DESCRIPTION:
# E-valued polynomials f(z) = sum_k f^(k) z^k stored as dense coefficient
# arrays of shape (d+1, dimE). Provides the shift (multiplication by z), the
# backward shift L f = (f - f(0))/z, r-dilation, derivatives, the H^2 pairing
# and the D_{alpha,Q} semi-norms.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import numpy as np
from scipy.special import poch

from .errors import DimensionMismatch, BadRadius, NonPSDQ
from .linalg import as_square, adj, max_abs, min_eig


class VectorPolynomial(object):
    '''
    E-valued polynomial by its coefficient sequence.

    :param coeffs: array-like of shape (d+1, dimE) (or (d+1,) for dimE=1)
    :param dimE: dimension of E, required for empty coefficient lists
    '''
    def __init__(self, coeffs, dimE=None):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 1:
            if dimE is None or dimE == 1 or c.size == 0:
                c = c.reshape((-1, 1 if dimE is None else dimE))
            else:
                raise DimensionMismatch('1D coefficient array given for dimE={}'.format(dimE))
        if c.ndim != 2:
            raise DimensionMismatch('coefficients must have shape (d+1, dimE), got {}'.format(c.shape))
        if dimE is not None and c.shape[1] != dimE:
            raise DimensionMismatch('coefficients have dimension {}, expected {}'.format(c.shape[1], dimE))
        if c.shape[0] == 0:
            c = np.zeros((1, c.shape[1]), dtype=complex)
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self):
        return self._c

    @property
    def dimE(self):
        return self._c.shape[1]

    @property
    def length(self):
        '''Number of stored coefficients (trailing zeros included).'''
        return self._c.shape[0]

    def degree(self):
        '''Largest index with a nonzero coefficient, -1 for the zero polynomial.'''
        nz = np.nonzero(np.any(self._c != 0, axis=1))[0]
        return int(nz[-1]) if len(nz) > 0 else -1

    def coeff(self, k):
        '''f^(k), zero beyond the stored range.'''
        if k < 0 or k >= self.length:
            return np.zeros(self.dimE, dtype=complex)
        return self._c[k]

    def is_zero(self):
        return self.degree() < 0

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return 'VectorPolynomial(dimE={}, degree={})'.format(self.dimE, self.degree())


def zero(dimE):
    return VectorPolynomial(np.zeros((1, dimE)), dimE=dimE)


def monomial(k, e):
    '''z^k e.'''
    e = np.asarray(e, dtype=complex).reshape(-1)
    c = np.zeros((k + 1, len(e)), dtype=complex)
    c[k] = e
    return VectorPolynomial(c)


def from_scalar(p, e):
    '''p(z) e for a scalar polynomial with coefficients p_0..p_d.'''
    p = np.asarray(p, dtype=complex).reshape(-1)
    e = np.asarray(e, dtype=complex).reshape(-1)
    return VectorPolynomial(np.outer(p, e))


def _check_dims(f, g):
    if f.dimE != g.dimE:
        raise DimensionMismatch('polynomials have dimensions {} and {}'.format(f.dimE, g.dimE))


def _padded(f, n):
    out = np.zeros((n, f.dimE), dtype=complex)
    out[:f.length] = f.coeffs
    return out


def add(f, g):
    _check_dims(f, g)
    n = max(f.length, g.length)
    return VectorPolynomial(_padded(f, n) + _padded(g, n))


def sub(f, g):
    _check_dims(f, g)
    n = max(f.length, g.length)
    return VectorPolynomial(_padded(f, n) - _padded(g, n))


def scale(f, c):
    return VectorPolynomial(complex(c) * f.coeffs)


def trim(f):
    '''Drop trailing zero coefficients.'''
    return VectorPolynomial(f.coeffs[:max(f.degree() + 1, 1)])


def truncate(f, l):
    '''The partial sum s_l(f) = sum_{k<=l} f^(k) z^k.'''
    assert l >= 0, 'Error - truncation degree must be nonnegative, got {}'.format(l)
    return VectorPolynomial(f.coeffs[:l + 1])


def evaluate(f, z):
    '''f(z) as a vector (Horner scheme).'''
    z = complex(z)
    out = np.zeros(f.dimE, dtype=complex)
    for k in range(f.length - 1, -1, -1):
        out = out * z + f.coeffs[k]
    return out


def evaluate_many(f, zs):
    '''f at an array of points, shape (N, dimE).'''
    zs = np.asarray(zs, dtype=complex).reshape(-1)
    out = np.zeros((len(zs), f.dimE), dtype=complex)
    for k in range(f.length - 1, -1, -1):
        out = out * zs[:, None] + f.coeffs[k][None, :]
    return out


def shift(f):
    '''Multiplication by z.'''
    c = np.zeros((f.length + 1, f.dimE), dtype=complex)
    c[1:] = f.coeffs
    return VectorPolynomial(c)


def lshift(f):
    '''Backward shift L f = (f - f(0))/z.'''
    if f.length <= 1:
        return zero(f.dimE)
    return VectorPolynomial(f.coeffs[1:])


def lshift_power(f, k):
    '''L^k f.'''
    if k >= f.length:
        return zero(f.dimE)
    return VectorPolynomial(f.coeffs[k:])


def shift_power(f, k):
    '''z^k f.'''
    c = np.zeros((f.length + k, f.dimE), dtype=complex)
    c[k:] = f.coeffs
    return VectorPolynomial(c)


def dilate(f, r):
    '''f_r(z) = f(rz).'''
    r = float(r)
    if not (0.0 < r <= 1.0):
        raise BadRadius('dilation parameter must lie in (0,1], got {}'.format(r))
    return VectorPolynomial(f.coeffs * (r**np.arange(f.length))[:, None])


def derivative(f, n):
    '''n-th complex derivative, coefficient k = (k+n)!/k! f^(k+n).'''
    assert n >= 0, 'Error - derivative order must be nonnegative, got {}'.format(n)
    if n == 0:
        return f
    if n >= f.length:
        return zero(f.dimE)
    k = np.arange(f.length - n)
    fac = poch(k + 1, n)
    return VectorPolynomial(fac[:, None] * f.coeffs[n:])


def h2_inner(f, g):
    '''Hardy space pairing sum_k <f^(k), g^(k)>.'''
    _check_dims(f, g)
    n = min(f.length, g.length)
    return complex(np.sum(np.conj(g.coeffs[:n]) * f.coeffs[:n]))


def h2_norm_sq(f):
    return float(np.sum(np.abs(f.coeffs)**2))


def dalpha_norm_sq(f, alpha, Q=None):
    '''
    sum_k (k+1)^alpha <Q f^(k), f^(k)> for a PSD Q (identity by default).
    '''
    if Q is None:
        Q = np.eye(f.dimE, dtype=complex)
    Q = as_square(Q, name='Q')
    if Q.shape[0] != f.dimE:
        raise DimensionMismatch('Q has dimension {}, polynomial has {}'.format(Q.shape[0], f.dimE))
    if max_abs(Q - adj(Q)) > 1.0e-12 or min_eig(Q) < -1.0e-10:
        raise NonPSDQ('Q must be Hermitian PSD (smallest eigenvalue {:.3e})'.format(min_eig(Q)))
    k = np.arange(f.length)
    quad = np.real(np.einsum('ki,ij,kj->k', np.conj(f.coeffs), Q, f.coeffs))
    return float(np.sum((k + 1.0)**alpha * quad))


def allclose(f, g, atol=1.0e-12):
    '''Coefficientwise comparison ignoring trailing zeros.'''
    _check_dims(f, g)
    n = max(f.length, g.length)
    return bool(np.allclose(_padded(f, n), _padded(g, n), rtol=0.0, atol=atol))
