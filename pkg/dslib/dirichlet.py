#!/usr/bin/env python
# ****************************************************************************
# dirichlet.py
#
# DESCRIPTION:
# Weighted Dirichlet forms D_{mu,n}(f,g) on E-valued polynomials, evaluated
# exactly by the coefficient formula
#
#   D_{mu,n}(f,g) = sum_{k,l>=n} C(min(k,l), n) <mu^(l-k) f^(k), g^(l)>,
#
# the refined integral D(mu,n,R,f) by polar quadrature, and verification
# routines turning the difference / contractivity / embedding identities of
# these forms into IdentityReport objects.
#
# Residuals are relative: |LHS - RHS| / max(1, scale), where scale is the
# sum of the magnitudes of all terms entering the identity.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
import hashlib
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.special import comb

from .errors import DimensionMismatch, BadRadius, PreconditionFailed
from .linalg import binom, min_eig, max_abs
from .polynomials import VectorPolynomial, shift, lshift, lshift_power, shift_power, dilate, derivative
from .polynomials import evaluate_many, truncate, sub
from .measures import dilate_measure, total_mass
from .quadrature import check_grid, circle_mean, disc_integral

# default tolerances
EXACT_TOL = 1.0e-8
QUAD_TOL = 1.0e-3
CONTRACT_TOL = 1.0e-10
DEFAULT_GRID = (64, 256)


@dataclass(frozen=True)
class IdentityReport:
    '''Outcome of one identity check; passed <=> residual <= tol.'''
    identity: str
    n: int
    residual: float
    tol: float
    passed: bool
    digest: str = ''
    details: dict = field(default_factory=dict)

    def to_dict(self):
        out = {'identity': self.identity, 'n': int(self.n), 'residual': float(self.residual),
               'tol': float(self.tol), 'pass': bool(self.passed)}
        for k in sorted(self.details.keys()):
            out[k] = self.details[k]
        if self.digest:
            out['digest'] = self.digest
        return out


def make_report(identity, n, residual, tol, digest='', **details):
    residual = float(residual)
    return IdentityReport(identity=identity, n=int(n), residual=residual, tol=float(tol),
                          passed=bool(residual <= tol), digest=digest, details=details)


def relative_residual(lhs, rhs, scale=None):
    '''|lhs - rhs| / max(1, scale), scale defaulting to max(|lhs|, |rhs|).'''
    if scale is None:
        scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / max(1.0, float(scale))


def inputs_digest(*objs):
    '''Short sha256 digest of measures / polynomials entering a check.'''
    h = hashlib.sha256()
    for obj in objs:
        if isinstance(obj, VectorPolynomial):
            h.update(np.ascontiguousarray(obj.coeffs).tobytes())
        elif hasattr(obj, 'moment'):
            h.update(np.ascontiguousarray(obj.moments(8)).tobytes())
        else:
            h.update(repr(obj).encode('utf-8'))
    return h.hexdigest()[:16]


def _check_dims(mu, f, g=None):
    if f.dimE != mu.dimE or (g is not None and g.dimE != mu.dimE):
        raise DimensionMismatch('measure of dimension {} paired with polynomials of dimension {}'.format(
            mu.dimE, f.dimE if g is None else (f.dimE, g.dimE)))


def dirichlet_form(mu, n, f, g):
    '''
    Sesquilinear form D_{mu,n}(f,g). The terms are assembled with k as outer
    and l as inner index and reduced by numpy's pairwise summation.
    '''
    assert n >= 0, 'Error - order must be nonnegative, got {}'.format(n)
    _check_dims(mu, f, g)
    df, dg = f.length - 1, g.length - 1
    if df < n or dg < n:
        return 0.0 + 0.0j
    K = np.arange(n, df + 1)
    L = np.arange(n, dg + 1)
    jlo, jhi = n - df, dg - n
    jmax = max(abs(jlo), abs(jhi))
    moms = mu.moments(jmax)
    M = moms[(L[None, :] - K[:, None]) + jmax]
    C = comb(np.minimum(K[:, None], L[None, :]), n)
    Mf = np.einsum('klij,kj->kli', M, f.coeffs[n:])
    terms = C * np.einsum('kli,li->kl', Mf, np.conj(g.coeffs[n:]))
    return complex(np.sum(terms))


def dirichlet_value(mu, n, f):
    '''D_{mu,n}(f), the real part of the self-pairing.'''
    return float(dirichlet_form(mu, n, f, f).real)


def dirichlet_gram(mu, n, d, dimE=None):
    '''
    Gram matrix of D_{mu,n} on the basis z^k e_i (index k*dimE+i, k<=d):
    block (k,l) = C(min(k,l), n) mu^(k-l).
    '''
    dimE = mu.dimE if dimE is None else dimE
    if dimE != mu.dimE:
        raise DimensionMismatch('Gram of dimension {} requested for measure of dimension {}'.format(dimE, mu.dimE))
    G = np.zeros(((d + 1) * dimE, (d + 1) * dimE), dtype=complex)
    if d < n:
        return G
    moms = mu.moments(d)
    for k in range(n, d + 1):
        for l in range(n, d + 1):
            c = binom(min(k, l), n)
            G[k * dimE:(k + 1) * dimE, l * dimE:(l + 1) * dimE] = c * moms[k - l + d]
    return G


def gram_value(G, f):
    '''f^* G f for coefficient vector of f (k-major), padded to the Gram size.'''
    v = np.zeros(G.shape[0], dtype=complex)
    c = f.coeffs.reshape(-1)
    assert len(c) <= len(v) or not np.any(c[len(v):]), 'Error - polynomial exceeds Gram degree'
    v[:min(len(c), len(v))] = c[:len(v)]
    return float(np.real(np.vdot(v, G @ v)))


def _hermitian_density(P, v):
    '''<P v, v> for stacks P (N,d,d), v (N,d).'''
    return np.real(np.einsum('ki,kij,kj->k', np.conj(v), P, v))


def refined_integral(mu, n, R, f, grid=DEFAULT_GRID):
    '''
    D(mu,n,R,f) by quadrature:
      n = 0: mean of <P_mu(z) f(z), f(z)> over the circle |z| = R;
      n >= 1: 1/(n!(n-1)!) int_{|z|<R} <P_mu f^(n), f^(n)> (R^2-|z|^2)^(n-1) dA.
    '''
    assert n >= 0, 'Error - order must be nonnegative, got {}'.format(n)
    R = float(R)
    if not (0.0 < R < 1.0):
        raise BadRadius('refined integral requires 0 < R < 1, got {}'.format(R))
    nrad, nang = check_grid(grid)
    _check_dims(mu, f)
    if n == 0:
        def integrand(zs):
            return _hermitian_density(mu.poisson_many(zs), evaluate_many(f, zs))
        return float(np.real(circle_mean(integrand, R, nang, extra=2 * max(f.degree(), 0))))
    fn = derivative(f, n)
    if fn.is_zero():
        return 0.0

    def integrand(zs):
        return _hermitian_density(mu.poisson_many(zs), evaluate_many(fn, zs))
    val = disc_integral(integrand, R, (nrad, nang), weight=lambda rho: (R * R - rho * rho)**(n - 1),
                        extra=2 * max(fn.degree(), 0))
    return float(np.real(val)) / (factorial(n) * factorial(n - 1))


def area_norm_sq(f, alpha, Q, R=1.0, grid=DEFAULT_GRID):
    '''
    Integral semi-norm int_{|z|<R} <Q f, f> (1-|z|^2)^(-alpha-1) dA by polar
    quadrature. Exact (up to rounding) for alpha <= -1.
    '''
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (f.dimE, f.dimE):
        raise DimensionMismatch('Q has shape {}, polynomial has dimension {}'.format(Q.shape, f.dimE))
    if f.is_zero():
        return 0.0
    P = Q[None, :, :]

    def integrand(zs):
        v = evaluate_many(f, zs)
        return _hermitian_density(np.broadcast_to(P, (len(zs),) + Q.shape), v)
    val = disc_integral(integrand, R, grid, weight=lambda rho: (1.0 - rho * rho)**(-alpha - 1.0),
                        poisson=False, extra=f.degree())
    return float(np.real(val))


def forward_difference(mu, j, f, n):
    '''
    n-th forward difference of g -> D_{mu,j}(g) at f:
    sum_i (-1)^(n-i) C(n,i) D_{mu,j}(z^i f). Returns (value, magnitude of terms).
    '''
    val = 0.0
    mag = 0.0
    for i in range(n + 1):
        t = (-1)**(n - i) * binom(n, i) * dirichlet_value(mu, j, shift_power(f, i))
        val += t
        mag += abs(t)
    return val, mag


def verify_difference_identities(mu, f, nmax, tol=EXACT_TOL, qtol=QUAD_TOL, radii=(0.9,),
                                 grid=DEFAULT_GRID, with_quadrature=True):
    '''
    Runs the difference identities of the weighted Dirichlet forms for
    orders up to nmax and returns a list of IdentityReport:
      difference          D_{n+1}(zf) - D_{n+1}(f) = D_n(f)        (n = 0..nmax)
      shift_difference    D_n(zf) - D_n(f) = D_{n-1}(f), via Gram   (n = 1..nmax)
      refined_difference  D(n+1,R,zf) - R^2 D(n+1,R,f) = R^2 D(n,R,f)
      backward_series     sum_{k>=1} D_j(L^k f) = D_{j+1}(f)       (j = 1..nmax)
      backward_series_zero  the same identity for j = 0
      forward_difference  Delta^n D_j(f) = D_{j-n}(f) (n<=j), 0 (n=j+1)
    '''
    log = logging.getLogger(__name__)
    assert nmax <= 8, 'Error - nmax must not exceed 8, got {}'.format(nmax)
    _check_dims(mu, f)
    digest = inputs_digest(mu, f)
    reports = []
    cache = {}

    def D(j, g, key):
        if (j, key) not in cache:
            cache[(j, key)] = dirichlet_value(mu, j, g)
        return cache[(j, key)]
    zf = shift(f)
    for n in range(0, nmax + 1):
        a, b, c = D(n + 1, zf, 'zf'), D(n + 1, f, 'f'), D(n, f, 'f')
        res = relative_residual(a - b, c, abs(a) + abs(b) + abs(c))
        reports.append(make_report('difference', n, res, tol, digest))
    # second evaluation path through the Gram matrices of the forms
    d = zf.length - 1
    for n in range(1, nmax + 1):
        Gn = dirichlet_gram(mu, n, d)
        Gm = dirichlet_gram(mu, n - 1, d)
        a, b, c = gram_value(Gn, zf), gram_value(Gn, f), gram_value(Gm, f)
        res = relative_residual(a - b, c, abs(a) + abs(b) + abs(c))
        reports.append(make_report('shift_difference', n, res, tol, digest))
    if with_quadrature:
        for R in radii:
            for n in range(0, nmax + 1):
                a = refined_integral(mu, n + 1, R, zf, grid)
                b = refined_integral(mu, n + 1, R, f, grid)
                c = refined_integral(mu, n, R, f, grid)
                res = relative_residual(a - R * R * b, R * R * c, abs(a) + R * R * (abs(b) + abs(c)))
                reports.append(make_report('refined_difference', n, res, qtol, digest, R=float(R)))
    deg = max(f.degree(), 0)
    for j in range(0, nmax + 1):
        terms = [D(j, lshift_power(f, k), 'L{}'.format(k)) for k in range(1, deg + 1)]
        lhs = float(np.sum(terms)) if len(terms) > 0 else 0.0
        rhs = D(j + 1, f, 'f')
        res = relative_residual(lhs, rhs, float(np.sum(np.abs(terms))) + abs(rhs))
        name = 'backward_series_zero' if j == 0 else 'backward_series'
        reports.append(make_report(name, j, res, tol, digest))
    for j in range(0, nmax + 1):
        for n in range(0, j + 2):
            val, mag = forward_difference(mu, j, f, n)
            rhs = D(j - n, f, 'f') if n <= j else 0.0
            res = relative_residual(val, rhs, mag + abs(rhs))
            reports.append(make_report('forward_difference', n, res, tol, digest, j=j))
    nfail = len([r for r in reports if not r.passed])
    log.debug('difference identities for {}: {} reports, {} failed'.format(digest, len(reports), nfail))
    return reports


def verify_refined_integral(mu, f, n, R, grid=DEFAULT_GRID, tol=1.0e-4):
    '''Quadrature value D(mu,n,R,f) against the exact D_{lambda_R,n}(f_R).'''
    q = refined_integral(mu, n, R, f, grid)
    exact = dirichlet_value(dilate_measure(mu, R), n, dilate(f, R))
    res = relative_residual(q, exact, max(abs(q), abs(exact)))
    return make_report('refined_integral', n, res, tol, inputs_digest(mu, f), R=float(R))


def verify_refined_monotone(mu, f, n, radii, grid=DEFAULT_GRID, tol=1.0e-6):
    '''
    R -> D(mu,n,R,f) is nondecreasing along the sorted radii and bounded by
    D_{mu,n}(f). Residual is the largest decrease or overshoot.
    '''
    radii = sorted([float(R) for R in radii])
    vals = [refined_integral(mu, n, R, f, grid) for R in radii]
    limit = dirichlet_value(mu, n, f)
    worst = 0.0
    for a, b in zip(vals[:-1], vals[1:]):
        worst = max(worst, a - b)
    if len(vals) > 0:
        worst = max(worst, vals[-1] - limit)
    res = worst / max(1.0, abs(limit))
    return make_report('refined_monotone', n, max(res, 0.0), tol, inputs_digest(mu, f),
                       values=[float(v) for v in vals], limit=float(limit))


def verify_dilation_contractivity(mu, f, n, r_grid, tol=CONTRACT_TOL):
    '''
    D_{mu,n}(f_r) <= D_{mu,n}(f) on every r of the grid; the residual is the
    absolute excess max_r D(f_r) - D(f). Also records
    D_{mu,n}(f_r - f) along the sorted grid, which must decrease to 0.
    '''
    if n < 1:
        raise PreconditionFailed('dilation contractivity needs n >= 1, got {}'.format(n))
    r_grid = sorted([float(r) for r in r_grid])
    for r in r_grid:
        if not (0.0 < r <= 1.0):
            raise BadRadius('dilation parameter must lie in (0,1], got {}'.format(r))
    full = dirichlet_value(mu, n, f)
    excess = max([dirichlet_value(mu, n, dilate(f, r)) - full for r in r_grid], default=0.0)
    tails = [dirichlet_value(mu, n, sub(dilate(f, r), f)) for r in r_grid]
    decreasing = all([b <= a + tol * max(1.0, full) for a, b in zip(tails[:-1], tails[1:])])
    res = max(excess, 0.0)
    return make_report('dilation_contractivity', n, res, tol, inputs_digest(mu, f),
                       tails=[float(t) for t in tails], tails_decreasing=bool(decreasing))


def verify_multiplier_bound(mu, f, R=None, tol=1.0e-9, grid=DEFAULT_GRID):
    '''
    D_1(zf) <= 2 <mu(T) f(0), f(0)> + 3 D_1(f), exactly (R=None) or with the
    refined integrals at radius R.
    '''
    zf = shift(f)
    if R is None:
        lhs = dirichlet_value(mu, 1, zf)
        rhs1 = dirichlet_value(mu, 1, f)
    else:
        lhs = refined_integral(mu, 1, R, zf, grid)
        rhs1 = refined_integral(mu, 1, R, f, grid)
    f0 = f.coeff(0)
    rhs = 2.0 * float(np.real(np.vdot(f0, total_mass(mu) @ f0))) + 3.0 * rhs1
    res = max(lhs - rhs, 0.0) / max(1.0, abs(rhs))
    details = {} if R is None else {'R': float(R)}
    return make_report('multiplier_bound', 1, res, tol, inputs_digest(mu, f), **details)


def verify_embeddings(mu, f, n, tol=QUAD_TOL, grid=DEFAULT_GRID):
    '''
    Two-sided comparison of D_{mu,n}(f) with the integral norms of f^(n):
      D_{mu,n}(f) >= 1/(4 n!(n-1)!) |f^(n)|^2_{-(n+1), mu(T)}   (n >= 1)
      D_{mu,n}(f) <= 4/(n!(n-1)!)   |f^(n)|^2_{-(n-1), mu(T)}   (n >= 2)
    '''
    if n < 1:
        raise PreconditionFailed('embedding bounds require n >= 1, got {}'.format(n))
    Q = total_mass(mu)
    fn = derivative(f, n)
    D = dirichlet_value(mu, n, f)
    c = float(factorial(n) * factorial(n - 1))
    lower = area_norm_sq(fn, -(n + 1), Q, 1.0, grid) / (4.0 * c)
    res = max(lower - D, 0.0) / max(1.0, abs(D), abs(lower))
    details = {'value': D, 'lower': lower}
    if n >= 2:
        upper = 4.0 * area_norm_sq(fn, -(n - 1), Q, 1.0, grid) / c
        res = max(res, max(D - upper, 0.0) / max(1.0, abs(D), abs(upper)))
        details['upper'] = upper
    return make_report('embedding', n, res, tol, inputs_digest(mu, f), **details)


def truncation_tail(mu, n, f, l):
    '''D_{mu,n}(f - s_l(f)) for the degree-l partial sum s_l.'''
    assert l >= 0, 'Error - truncation degree must be nonnegative, got {}'.format(l)
    return dirichlet_value(mu, n, sub(f, truncate(f, l)))


def verify_dilation_matrix(mu, d, r, n=1, tol=1.0e-9):
    '''
    Positivity of ((1 - r^(k+l)) A_{kl}) with A the Gram matrix of D_{mu,n}
    on polynomials of degree <= d, i.e. D_{mu,n}(f_r) <= D_{mu,n}(f) for all
    such f at once.
    '''
    if n < 1:
        raise PreconditionFailed('dilation matrix check needs n >= 1, got {}'.format(n))
    A = dirichlet_gram(mu, n, d)
    dimE = mu.dimE
    k = np.repeat(np.arange(d + 1), dimE)
    W = 1.0 - float(r)**(k[:, None] + k[None, :])
    lam = min_eig(W * A)
    res = max(-lam, 0.0) / max(1.0, max_abs(A))
    return make_report('dilation_matrix', n, res, tol, inputs_digest(mu), d=int(d), r=float(r), min_eig=lam)


def verify_l_contractivity(mu, f, n, tol=CONTRACT_TOL):
    '''D_{mu,n}(Lf) <= D_{mu,n}(f), n >= 1.'''
    if n < 1:
        raise PreconditionFailed('contractivity of L needs n >= 1, got {}'.format(n))
    a = dirichlet_value(mu, n, lshift(f))
    b = dirichlet_value(mu, n, f)
    res = max(a - b, 0.0) / max(1.0, abs(b))
    return make_report('l_contractivity', n, res, tol, inputs_digest(mu, f))


def verify_shift_lshift(mu, f, n, tol=EXACT_TOL):
    '''D_{mu,n}(zLf) = D_{mu,n}(f) for f with f(0) = 0 (the constant term is dropped first).'''
    c = np.array(f.coeffs)
    c[0] = 0.0
    g = VectorPolynomial(c)
    a = dirichlet_value(mu, n, shift(lshift(g)))
    b = dirichlet_value(mu, n, g)
    return make_report('shift_lshift', n, relative_residual(a, b), tol, inputs_digest(mu, f))
