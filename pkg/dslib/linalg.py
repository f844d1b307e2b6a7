#!/usr/bin/env python
# ****************************************************************************
# linalg.py
#
# DESCRIPTION:
# Small dense linear algebra helpers shared by all modules: validation of
# Hermitian / positive semidefinite / unitary matrices, binomial
# coefficients, adjoints and the block index convention (k-major).
#
# Positive semidefiniteness is always tested through the Hermitian
# eigen-decomposition with a threshold at -tol, never through Cholesky
# (Cholesky fails on semidefinite boundary cases such as rank deficient
# Toeplitz matrices).
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import numpy as np
import scipy.linalg as sla
from scipy.special import comb

from .errors import NonHermitianWeight, NonPSDWeight, DimensionMismatch, NotUnitary

# tolerances for validated values
HERMITIAN_TOL = 1.0e-12
PSD_TOL = 1.0e-10
UNITARY_TOL = 1.0e-10


def binom(n, k):
    '''Binomial coefficient C(n,k) as exact integer, 0 if k<0 or k>n.'''
    if k < 0 or n < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def adj(a):
    '''Conjugate transpose.'''
    return np.conj(np.transpose(a))


def as_square(a, name='matrix'):
    '''
    Returns `a` as a complex square 2D array. Raises DimensionMismatch if the
    input is not square.
    '''
    arr = np.array(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape((1, 1))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch('{} must be square, got shape {}'.format(name, arr.shape))
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch('{} has non-finite entries'.format(name))
    return arr


def frozen(a):
    '''Returns a read-only copy of array a.'''
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


def hermitian_part(a):
    return 0.5 * (a + adj(a))


def max_abs(a):
    '''Max-norm of an array (0.0 for empty arrays).'''
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def is_hermitian(a, tol=HERMITIAN_TOL):
    return max_abs(a - adj(a)) <= tol


def eigvalsh(a):
    '''Eigenvalues (ascending) of the Hermitian part of a.'''
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((0,))
    return sla.eigvalsh(hermitian_part(a))


def min_eig(a):
    '''Smallest eigenvalue of the Hermitian part of a (+inf for empty input).'''
    ev = eigvalsh(a)
    return float(ev[0]) if ev.size > 0 else float('inf')


def max_eig(a):
    '''Largest eigenvalue of the Hermitian part of a (-inf for empty input).'''
    ev = eigvalsh(a)
    return float(ev[-1]) if ev.size > 0 else float('-inf')


def is_psd(a, tol=PSD_TOL):
    return min_eig(a) >= -tol


def check_hermitian(a, name='matrix', tol=HERMITIAN_TOL, psd=False, psd_tol=PSD_TOL):
    '''
    Validates that `a` is Hermitian within an absolute tolerance and,
    if requested, positive semidefinite. Returns the validated complex array.
    '''
    arr = as_square(a, name)
    err = max_abs(arr - adj(arr))
    if err > tol:
        raise NonHermitianWeight('{} is not Hermitian (max |a - a*| = {:.3e})'.format(name, err))
    if psd:
        lam = min_eig(arr)
        if lam < -psd_tol:
            raise NonPSDWeight('{} is not positive semidefinite (smallest eigenvalue {:.3e})'.format(name, lam))
    return arr


def check_unitary(v, dim=None, name='V', tol=UNITARY_TOL):
    '''Validates that `v` is a unitary matrix (of dimension dim, if given).'''
    arr = as_square(v, name)
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch('{} has dimension {}, expected {}'.format(name, arr.shape[0], dim))
    err = max_abs(adj(arr) @ arr - np.eye(arr.shape[0]))
    if err > tol:
        raise NotUnitary('{} is not unitary (max |V*V - I| = {:.3e})'.format(name, err))
    return arr


def block(mat, k, l, dim):
    '''Block (k,l) of a k-major blocked matrix.'''
    return mat[k * dim:(k + 1) * dim, l * dim:(l + 1) * dim]


def numerical_rank(a, tol):
    '''Rank of `a` counting singular values above tol times the largest one.'''
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = sla.svdvals(a)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))
