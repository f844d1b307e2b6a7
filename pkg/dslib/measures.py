#!/usr/bin/env python
# ****************************************************************************
# measures.py
#
# DESCRIPTION:
# Matrix-valued (B(E)-valued) semi-spectral measures on the unit circle.
# Two measure bodies are supported, both with closed-form Fourier moments
# mu^(j) = int zeta^{-j} dmu(zeta):
#   - AtomicMeasure: finitely many point masses with PSD matrix weights;
#   - TrigMeasure:   a PSD matrix trigonometric-polynomial density against
#                    normalized arc length, given by coefficients C_s with
#                    mu^(j) = C_{-j}.
# DilatedMeasure represents lambda_R (dlambda_R = P_mu(R zeta) dsigma) and
# MomentSequence stores a finite Hermitian-symmetric moment family. All
# objects expose `dimE`, `moment(j)` and are immutable after construction.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
import numpy as np

from .errors import DimensionMismatch, BadRadius, PointOnBoundary, NonHermitianWeight, NonPSDWeight
from .linalg import check_hermitian, check_unitary, adj, frozen, max_abs, min_eig, as_square
from .linalg import HERMITIAN_TOL

# boundary margin for Poisson evaluation
BOUNDARY_MARGIN = 1.0e-9
# trigonometric densities are validated on this many equispaced angles
TRIG_SAMPLES = 256
TRIG_PSD_TOL = 1.0e-9


class SemiSpectralMeasure(object):
    '''
    Base class of all measures. Subclasses implement `moment` and
    `poisson_many`; everything else in dslib only relies on these two.
    '''
    kind = None

    def __init__(self, dimE):
        assert int(dimE) >= 1, 'Error - dimE must be positive, got {}'.format(dimE)
        self._dimE = int(dimE)

    @property
    def dimE(self):
        return self._dimE

    def moment(self, j):
        raise NotImplementedError

    def poisson_many(self, zs):
        '''Poisson integral evaluated at an array of points, shape (N, dimE, dimE).'''
        raise NotImplementedError

    def moments(self, jmax):
        '''Moments mu^(j) for j = -jmax..jmax stacked into an array (index j+jmax).'''
        return np.array([self.moment(j) for j in range(-jmax, jmax + 1)], dtype=complex).reshape((2 * jmax + 1, self._dimE, self._dimE))

    def total_mass(self):
        return self.moment(0)

    def __repr__(self):
        return '{}(dimE={})'.format(self.__class__.__name__, self._dimE)


class AtomicMeasure(SemiSpectralMeasure):
    '''
    Sum of point masses W_i delta_{zeta_i}, zeta_i = exp(i theta_i).

    :param angles: sequence of angles in radians (canonicalized to [0, 2pi))
    :param weights: sequence of PSD dimE x dimE matrices
    :param dimE: dimension, required for the empty measure
    '''
    kind = 'atomic'

    def __init__(self, angles, weights, dimE):
        super(AtomicMeasure, self).__init__(dimE)
        angles = np.mod(np.asarray(angles, dtype=float).reshape(-1), 2.0 * np.pi)
        weights = np.asarray(weights, dtype=complex).reshape((len(angles), self._dimE, self._dimE))
        self._angles = angles
        self._angles.setflags(write=False)
        self._weights = frozen(weights)
        self._nodes = np.exp(1j * self._angles)

    @property
    def angles(self):
        return self._angles

    @property
    def weights(self):
        return self._weights

    @property
    def natoms(self):
        return len(self._angles)

    def moment(self, j):
        if self.natoms == 0:
            return np.zeros((self._dimE, self._dimE), dtype=complex)
        phase = np.exp(-1j * j * self._angles)
        return np.tensordot(phase, self._weights, axes=(0, 0))

    def poisson_many(self, zs):
        zs = np.asarray(zs, dtype=complex).reshape(-1)
        if self.natoms == 0:
            return np.zeros((len(zs), self._dimE, self._dimE), dtype=complex)
        kern = (1.0 - np.abs(zs[:, None])**2) / np.abs(zs[:, None] - self._nodes[None, :])**2
        return np.tensordot(kern, self._weights, axes=(1, 0))


class TrigMeasure(SemiSpectralMeasure):
    '''
    Measure w(zeta) dsigma(zeta) with w(e^{it}) = sum_s C_s e^{-ist}, so
    that mu^(j) = C_{-j}.

    :param coeffs: dict {s: C_s}; missing C_{-s} are filled with C_s*
    '''
    kind = 'trig'

    def __init__(self, coeffs, dimE):
        super(TrigMeasure, self).__init__(dimE)
        self._coeffs = {int(s): frozen(c) for s, c in coeffs.items()}
        self._order = max([abs(s) for s in self._coeffs.keys()], default=0)

    @property
    def coeffs(self):
        return dict(self._coeffs)

    @property
    def order(self):
        return self._order

    def moment(self, j):
        c = self._coeffs.get(-int(j), None)
        if c is None:
            return np.zeros((self._dimE, self._dimE), dtype=complex)
        return np.array(c)

    def density_many(self, thetas):
        '''Density w at angles thetas, shape (N, dimE, dimE).'''
        thetas = np.asarray(thetas, dtype=float).reshape(-1)
        out = np.zeros((len(thetas), self._dimE, self._dimE), dtype=complex)
        for s in sorted(self._coeffs.keys()):
            out += np.exp(-1j * s * thetas)[:, None, None] * self._coeffs[s][None, :, :]
        return out

    def poisson_many(self, zs):
        zs = np.asarray(zs, dtype=complex).reshape(-1)
        r = np.abs(zs)
        phi = np.angle(zs)
        out = np.zeros((len(zs), self._dimE, self._dimE), dtype=complex)
        for s in sorted(self._coeffs.keys()):
            # P[w](re^{i phi}) = sum_s r^|s| e^{i s phi} C_{-s}
            fac = r**abs(s) * np.exp(1j * (-s) * phi)
            out += fac[:, None, None] * self._coeffs[s][None, :, :]
        return out


class DilatedMeasure(SemiSpectralMeasure):
    '''
    The measure lambda_R with dlambda_R(zeta) = P_mu(R zeta) dsigma(zeta).
    Its moments are R^|j| mu^(j) and its Poisson integral is P_mu(R z).
    '''
    kind = 'dilated'

    def __init__(self, base, R):
        super(DilatedMeasure, self).__init__(base.dimE)
        self._base = base
        self._R = float(R)

    @property
    def base(self):
        return self._base

    @property
    def R(self):
        return self._R

    def moment(self, j):
        return self._R**abs(int(j)) * self._base.moment(j)

    def poisson_many(self, zs):
        return self._base.poisson_many(self._R * np.asarray(zs, dtype=complex))


class SumMeasure(SemiSpectralMeasure):
    '''Nonnegative combination sum_i c_i mu_i of measures with equal dimE.'''
    kind = 'sum'

    def __init__(self, parts, factors):
        dims = set([p.dimE for p in parts])
        if len(dims) != 1:
            raise DimensionMismatch('cannot add measures of dimensions {}'.format(sorted(dims)))
        super(SumMeasure, self).__init__(dims.pop())
        self._parts = tuple(parts)
        self._factors = tuple(float(c) for c in factors)

    def moment(self, j):
        out = np.zeros((self._dimE, self._dimE), dtype=complex)
        for c, p in zip(self._factors, self._parts):
            out = out + c * p.moment(j)
        return out

    def poisson_many(self, zs):
        out = None
        for c, p in zip(self._factors, self._parts):
            v = c * p.poisson_many(zs)
            out = v if out is None else out + v
        return out


class MomentSequence(object):
    '''
    Finite Hermitian-symmetric family m(-S..S) of dimE x dimE matrices.
    Behaves like a measure for moment evaluation: moment(j) is zero for
    |j| > S, so a MomentSequence can be used wherever only moments are
    needed (forms, Gram matrices).

    :param mats: array of shape (2S+1, dimE, dimE), index s+S
    '''
    kind = 'moments'

    def __init__(self, mats, tol=HERMITIAN_TOL):
        mats = np.asarray(mats, dtype=complex)
        assert mats.ndim == 3 and mats.shape[0] % 2 == 1 and mats.shape[1] == mats.shape[2], \
            'Error - moment array must have shape (2S+1, d, d), got {}'.format(mats.shape)
        S = (mats.shape[0] - 1) // 2
        for s in range(0, S + 1):
            err = max_abs(mats[S - s] - adj(mats[S + s]))
            if err > tol:
                raise NonHermitianWeight('moment sequence violates m(-s) = m(s)* at s={} (error {:.3e})'.format(s, err))
        self._mats = frozen(mats)
        self._S = S
        self._dimE = mats.shape[1]

    @classmethod
    def from_nonnegative(cls, mats_pos, **kwargs):
        '''Build from m(0..S) only, m(-s) := m(s)*. m(0) is symmetrized.'''
        mats_pos = np.asarray(mats_pos, dtype=complex)
        S = mats_pos.shape[0] - 1
        full = np.zeros((2 * S + 1,) + mats_pos.shape[1:], dtype=complex)
        full[S] = 0.5 * (mats_pos[0] + adj(mats_pos[0]))
        for s in range(1, S + 1):
            full[S + s] = mats_pos[s]
            full[S - s] = adj(mats_pos[s])
        return cls(full, **kwargs)

    @property
    def dimE(self):
        return self._dimE

    @property
    def maxOrder(self):
        return self._S

    @property
    def matrices(self):
        return self._mats

    def moment(self, j):
        j = int(j)
        if abs(j) > self._S:
            return np.zeros((self._dimE, self._dimE), dtype=complex)
        return np.array(self._mats[self._S + j])

    def moments(self, jmax):
        '''Moments m(j) for j = -jmax..jmax (zero beyond maxOrder), index j+jmax.'''
        out = np.zeros((2 * jmax + 1, self._dimE, self._dimE), dtype=complex)
        k = min(jmax, self._S)
        out[jmax - k:jmax + k + 1] = self._mats[self._S - k:self._S + k + 1]
        return out

    def total_mass(self):
        return self.moment(0)

    def truncate(self, S):
        assert 0 <= S <= self._S, 'Error - cannot truncate order {} sequence to {}'.format(self._S, S)
        return MomentSequence(self._mats[self._S - S:self._S + S + 1])

    def __repr__(self):
        return 'MomentSequence(dimE={}, maxOrder={})'.format(self._dimE, self._S)


def make_atomic(atoms, dimE=None):
    '''
    Build a validated atomic measure.

    :param atoms: sequence of (angle, weight) pairs
    :param dimE: dimension, only needed for the empty measure (default 1)
    '''
    angles = []
    weights = []
    for i, (theta, w) in enumerate(atoms):
        w = check_hermitian(w, name='weight of atom {}'.format(i), psd=True)
        if dimE is None:
            dimE = w.shape[0]
        if w.shape[0] != dimE:
            raise DimensionMismatch('weight of atom {} has dimension {}, expected {}'.format(i, w.shape[0], dimE))
        angles.append(float(theta))
        weights.append(w)
    if dimE is None:
        dimE = 1
    return AtomicMeasure(angles, np.array(weights, dtype=complex).reshape((len(angles), dimE, dimE)), dimE)


def make_trig(coeffs, dimE=None, nsample=TRIG_SAMPLES):
    '''
    Build a validated trigonometric-density measure from {s: C_s}.
    Requires C_{-s} = C_s* (missing partners are filled in) and a PSD density
    at `nsample` equispaced angles.
    '''
    log = logging.getLogger(__name__)
    cc = {}
    for s, c in coeffs.items():
        c = as_square(c, name='C_{}'.format(s))
        if dimE is None:
            dimE = c.shape[0]
        if c.shape[0] != dimE:
            raise DimensionMismatch('coefficient C_{} has dimension {}, expected {}'.format(s, c.shape[0], dimE))
        cc[int(s)] = c
    if dimE is None:
        dimE = 1
    for s in list(cc.keys()):
        if -s not in cc:
            cc[-s] = adj(cc[s])
        err = max_abs(cc[-s] - adj(cc[s]))
        if err > HERMITIAN_TOL:
            raise NonHermitianWeight('C_{} != C_{}* (error {:.3e})'.format(-s, s, err))
    cc = {s: c for s, c in cc.items() if s == 0 or max_abs(c) > 0.0}
    mu = TrigMeasure(cc, dimE)
    thetas = 2.0 * np.pi * np.arange(nsample) / nsample
    lam = min([min_eig(w) for w in mu.density_many(thetas)]) if len(cc) > 0 else 0.0
    if lam < -TRIG_PSD_TOL:
        raise NonPSDWeight('trigonometric density is not PSD (smallest sampled eigenvalue {:.3e})'.format(lam))
    log.debug('trig measure of order {} validated on {} samples, min eigenvalue {:.3e}'.format(mu.order, nsample, lam))
    return mu


def lebesgue(dimE=1):
    '''Normalized arc length measure sigma times the identity of E.'''
    assert int(dimE) >= 1, 'Error - dimE must be positive, got {}'.format(dimE)
    return TrigMeasure({0: np.eye(int(dimE), dtype=complex)}, int(dimE))


def moment(mu, j):
    '''Fourier moment mu^(j) = int zeta^{-j} dmu(zeta).'''
    return mu.moment(j)


def total_mass(mu):
    '''mu(T) = mu^(0).'''
    return mu.moment(0)


def _check_inside(z):
    if np.any(np.abs(z) >= 1.0 - BOUNDARY_MARGIN):
        raise PointOnBoundary('Poisson integral requires |z| < 1 - {}, got |z| = {}'.format(BOUNDARY_MARGIN, np.max(np.abs(z))))


def poisson(mu, z):
    '''Poisson integral P_mu(z), a PSD matrix, for |z| < 1.'''
    z = complex(z)
    _check_inside(z)
    return mu.poisson_many(np.array([z]))[0]


def poisson_many(mu, zs):
    '''Poisson integral at an array of points.'''
    zs = np.asarray(zs, dtype=complex)
    _check_inside(zs)
    return mu.poisson_many(zs.reshape(-1))


def poisson_series(mu, z, S):
    '''
    Truncated harmonic series sum_{|s|<=S} r^|s| e^{i s phi} mu^(s) of the
    Poisson integral, evaluated from moments only.
    '''
    z = complex(z)
    r, phi = abs(z), np.angle(z)
    out = np.zeros((mu.dimE, mu.dimE), dtype=complex)
    for s in range(-S, S + 1):
        out += r**abs(s) * np.exp(1j * s * phi) * mu.moment(s)
    return out


def dilate_measure(mu, R):
    '''The measure lambda_R, moments R^|j| mu^(j). R=1 returns mu itself.'''
    R = float(R)
    if not (0.0 < R <= 1.0):
        raise BadRadius('dilation radius must lie in (0,1], got {}'.format(R))
    if R == 1.0:
        return mu
    return DilatedMeasure(mu, R)


def conjugate(mu, V):
    '''The measure V* mu V (weights/coefficients W -> V* W V).'''
    V = check_unitary(V, dim=mu.dimE)
    Vs = adj(V)
    if isinstance(mu, AtomicMeasure):
        w = np.array([Vs @ W @ V for W in mu.weights], dtype=complex).reshape(mu.weights.shape)
        return AtomicMeasure(mu.angles, w, mu.dimE)
    if isinstance(mu, TrigMeasure):
        return TrigMeasure({s: Vs @ c @ V for s, c in mu.coeffs.items()}, mu.dimE)
    if isinstance(mu, DilatedMeasure):
        return DilatedMeasure(conjugate(mu.base, V), mu.R)
    if isinstance(mu, SumMeasure):
        return SumMeasure([conjugate(p, V) for p in mu._parts], mu._factors)
    if isinstance(mu, MomentSequence):
        return MomentSequence(np.array([Vs @ m @ V for m in mu.matrices]))
    raise TypeError('cannot conjugate object of type {}'.format(type(mu)))


def add(mu, nu):
    '''Sum of two measures (same dimE).'''
    return scale_add([mu, nu], [1.0, 1.0])


def scale(mu, c):
    '''Nonnegative multiple c*mu.'''
    return scale_add([mu], [c])


def scale_add(parts, factors):
    '''
    Nonnegative combination of measures. Atomic and trig parts are merged
    into a single body where possible.
    '''
    factors = [float(c) for c in factors]
    assert all([c >= 0.0 for c in factors]), 'Error - factors must be nonnegative: {}'.format(factors)
    dims = set([p.dimE for p in parts])
    if len(dims) != 1:
        raise DimensionMismatch('cannot combine measures of dimensions {}'.format(sorted(dims)))
    dimE = dims.pop()
    if all([isinstance(p, AtomicMeasure) for p in parts]):
        angles = np.concatenate([p.angles for p in parts])
        weights = np.concatenate([c * p.weights for c, p in zip(factors, parts)]).reshape((len(angles), dimE, dimE))
        return AtomicMeasure(angles, weights, dimE)
    if all([isinstance(p, TrigMeasure) for p in parts]):
        cc = {}
        for c, p in zip(factors, parts):
            for s, cs in p.coeffs.items():
                cc[s] = cc.get(s, 0.0) + c * cs
        return TrigMeasure(cc, dimE)
    return SumMeasure(parts, factors)


def scalarize(mu, x, y):
    '''
    The scalar measure mu_{x,y} = <mu(.) x, y>, returned as its moment
    function j -> <mu^(j) x, y>.
    '''
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if len(x) != mu.dimE or len(y) != mu.dimE:
        raise DimensionMismatch('vectors of length {}/{} for measure of dimension {}'.format(len(x), len(y), mu.dimE))
    return lambda j: complex(np.vdot(y, mu.moment(j) @ x))


def boundary_integral(mu, p, e):
    '''
    int |p|^2 dmu_{e,e} for a scalar polynomial p (coefficients p_0..p_d)
    and a vector e, evaluated exactly from moments.
    '''
    p = np.asarray(p, dtype=complex).reshape(-1)
    me = scalarize(mu, e, e)
    d = len(p) - 1
    mom = {j: me(j) for j in range(-d, d + 1)}
    tot = 0.0 + 0.0j
    for k in range(d + 1):
        for l in range(d + 1):
            tot += p[k] * np.conj(p[l]) * mom[l - k]
    return float(tot.real)


def toeplitz_block(mu, S):
    '''
    The (S+1)dimE square block-Toeplitz matrix with block (k,l) = mu^(l-k).
    PSD for every positive measure.
    '''
    dimE = mu.dimE
    mats = {j: mu.moment(j) for j in range(-S, S + 1)}
    out = np.zeros(((S + 1) * dimE, (S + 1) * dimE), dtype=complex)
    for k in range(S + 1):
        for l in range(S + 1):
            out[k * dimE:(k + 1) * dimE, l * dimE:(l + 1) * dimE] = mats[l - k]
    return out
