#!/usr/bin/env python
# ****************************************************************************
# recovery.py
#
# DESCRIPTION:
# Recovery of the measure tuple behind a shift-like operator from its Gram
# pairings <T^a x, T^b y>, x, y in ker T*. For r = 1..m-1 the pairings of
#
#   Q_r = beta_r - sum_{n>=1} L*^n beta_{r+1} L^n
#
# on the vectors T^a x_k are formed from the Gram pairings alone (using
# L^n T^a x = T^(a-n) x), and the moments are read off the constant block
# diagonals: m_r(s)[i,k] = <Q_r T^a x_k, T^(a+s) x_i> for any admissible a.
# The recovered moment sequences are checked for Toeplitz feasibility,
# optionally turned into atomic measures (scalar case), used to rebuild the
# Gram matrix of the model space and compared with the oracle.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import BadRange, TruncationTooShort, DiagonalInconsistent, InfeasibleSequence, IllConditioned
from .errors import NotInvariant, NotPositive, PreconditionFailed, DimensionMismatch, NonHermitianWeight, DSLError
from .linalg import as_square, adj, max_abs, min_eig, eigvalsh, check_unitary
from .measures import MomentSequence, make_atomic, toeplitz_block
from .spaces import MeasureTuple, gram, q_blocks, conjugate_tuple
from .dirichlet import make_report

DIAGONAL_TOL = 1.0e-9
FEASIBLE_TOL = 1.0e-9
FIT_TOL = 1.0e-12
NOISE_FACTOR = 10.0
MAX_REFINE = 100
ROOT_SEPARATION = 1.0e-6
VANDERMONDE_TOL = 1.0e-6


class GramOracle(object):
    '''
    Pairings G[(b,i),(a,k)] = <T^a x_k, T^b x_i> for an orthonormal basis
    x_1..x_dimE of ker T* and 0 <= a,b <= d (k-major ordering).

    :param pairings: ((d+1)dimE)^2 Hermitian PSD matrix
    :param dimE: number of basis vectors
    :param source: free text label
    '''
    def __init__(self, pairings, dimE, source=''):
        log = logging.getLogger(__name__)
        G = as_square(pairings, 'pairings')
        if G.shape[0] % dimE != 0:
            raise DimensionMismatch('pairing matrix of size {} is not blocked by dimE={}'.format(G.shape[0], dimE))
        scale = max(1.0, max_abs(G))
        err = max_abs(G - adj(G))
        if err > 1.0e-12 * scale:
            raise NonHermitianWeight('pairing matrix not Hermitian (error {:.3e})'.format(err))
        self._G = np.array(G)
        self._G.setflags(write=False)
        self._dimE = int(dimE)
        self._d = G.shape[0] // dimE - 1
        self._source = source
        lam = min_eig(G)
        if lam < -1.0e-9 * scale:
            log.warning('pairing matrix of {} is not PSD (smallest eigenvalue {:.3e})'.format(source, lam))

    @property
    def matrix(self):
        return self._G

    @property
    def dimE(self):
        return self._dimE

    @property
    def degree(self):
        return self._d

    @property
    def source(self):
        return self._source

    def pairing(self, a, k, b, i):
        '''<T^a x_k, T^b x_i>.'''
        n = self._dimE
        return self._G[b * n + i, a * n + k]


def gram_oracle_from_model(mtuple, d):
    '''Oracle of M_z on H_mu(E) with ker M_z* = E spanned by e_1..e_dimE.'''
    return GramOracle(gram(mtuple, d).matrix, mtuple.dimE, source='model m={}'.format(mtuple.m))


def kernel_basis(T, basis=None):
    '''
    Orthonormal basis of ker T* (columns). A supplied basis is orthonormalized
    in order; it is not required to lie in ker T* (a warning is logged).
    '''
    log = logging.getLogger(__name__)
    T = as_square(T, 'T')
    if basis is None:
        X = sla.null_space(adj(T))
        if X.shape[1] == 0:
            raise PreconditionFailed('ker T* is trivial; supply a basis explicitly')
        return X
    X = np.array(basis, dtype=complex)
    if X.ndim == 1:
        X = X.reshape((-1, 1))
    if X.shape[0] != T.shape[0]:
        X = X.T
    if X.shape[0] != T.shape[0]:
        raise DimensionMismatch('basis vectors of length {} for operator of dimension {}'.format(X.shape[0], T.shape[0]))
    X, _ = sla.qr(X, mode='economic')
    off = max_abs(adj(T) @ X)
    if off > 1.0e-8 * max(1.0, max_abs(T)):
        log.warning('supplied basis is not contained in ker T* (|T* x| = {:.3e})'.format(off))
    return X


def gram_oracle_from_operator(T, basis=None, d=16):
    '''Oracle K*K with K = [T^a x_k] in k-major column order.'''
    T = as_square(T, 'T')
    X = kernel_basis(T, basis)
    n = X.shape[1]
    K = np.zeros((T.shape[0], (d + 1) * n), dtype=complex)
    V = X
    for a in range(d + 1):
        K[:, a * n:(a + 1) * n] = V
        V = T @ V
    return GramOracle(adj(K) @ K, n, source='operator dim={}'.format(T.shape[0]))


def diagonal_moments(P, dimE, S):
    '''
    Blocks (s, 0) of a k-major pairing matrix for s = 0..S. Returns
    (array (S+1, dimE, dimE), largest deviation of any block (a+s, a) from
    the block (s, 0)).
    '''
    D = P.shape[0] // dimE - 1
    assert S <= D, 'Error - cannot read {} diagonals from pairings of degree {}'.format(S, D)
    mats = np.zeros((S + 1, dimE, dimE), dtype=complex)
    var = 0.0
    for s in range(S + 1):
        blocks = [P[(a + s) * dimE:(a + s + 1) * dimE, a * dimE:(a + 1) * dimE] for a in range(D - s + 1)]
        ref = blocks[0]
        for b in blocks[1:]:
            var = max(var, max_abs(b - ref))
        mats[s] = ref
    return mats, var


@dataclass
class InvarianceReport:
    positive_min_eig: float
    invariance_residual: float
    diagonal_variation: float
    tol: float
    moments: object = None

    @property
    def passed(self):
        return self.diagonal_variation <= self.tol

    def to_dict(self):
        return {'positiveMinEig': self.positive_min_eig, 'invarianceResidual': self.invariance_residual,
                'diagonalVariation': self.diagonal_variation, 'tol': self.tol, 'pass': self.passed}


def invariance_check(A, T, tol=DIAGONAL_TOL, basis=None, d=None):
    '''
    For a positive A with T*AT = A, the pairings <A T^a x, T^b y> depend
    only on b - a. Checks positivity and invariance (raising NotPositive /
    NotInvariant) and reports the diagonal variation with the extracted
    moment sequence. The basis defaults to ker T* (or all of H if trivial).
    '''
    A = as_square(A, 'A')
    T = as_square(T, 'T')
    if A.shape != T.shape:
        raise DimensionMismatch('A has shape {}, T has shape {}'.format(A.shape, T.shape))
    scale = max(1.0, max_abs(A))
    lam = min_eig(A)
    if lam < -tol * scale:
        raise NotPositive('A has smallest eigenvalue {:.3e}'.format(lam))
    inv = max_abs(adj(T) @ A @ T - A)
    if inv > tol * scale:
        raise NotInvariant('|T*AT - A| = {:.3e}'.format(inv))
    if basis is None:
        X = sla.null_space(adj(T))
        if X.shape[1] == 0:
            X = np.eye(T.shape[0], dtype=complex)
    else:
        X = kernel_basis(T, basis)
    d = T.shape[0] if d is None else d
    n = X.shape[1]
    K = np.zeros((T.shape[0], (d + 1) * n), dtype=complex)
    V = X
    for a in range(d + 1):
        K[:, a * n:(a + 1) * n] = V
        V = T @ V
    P = adj(K) @ A @ K
    mats, var = diagonal_moments(P, n, d)
    return InvarianceReport(positive_min_eig=lam, invariance_residual=inv, diagonal_variation=var / scale,
                            tol=tol, moments=MomentSequence.from_nonnegative(mats, tol=1.0e-8 * scale))


def invariance_check_pairings(P, dimE, tol=DIAGONAL_TOL):
    '''
    Diagonal constancy of a pairing matrix given directly as a form, e.g.
    the Gram matrix of beta_{m-1}(M_z) on the model space.
    '''
    P = as_square(P, 'pairings')
    scale = max(1.0, max_abs(P))
    lam = min_eig(P)
    if lam < -tol * scale:
        raise NotPositive('form has smallest eigenvalue {:.3e}'.format(lam))
    D = P.shape[0] // dimE - 1
    mats, var = diagonal_moments(P, dimE, D)
    return InvarianceReport(positive_min_eig=lam, invariance_residual=0.0, diagonal_variation=var / scale,
                            tol=tol, moments=MomentSequence.from_nonnegative(mats, tol=1.0e-8 * scale))


def recover_moments(oracle, m, r, S, tol=DIAGONAL_TOL):
    '''
    Moment sequence m_r(-S..S) of mu_r from a Gram oracle of degree d,
    S <= d - m. Raises DiagonalInconsistent if the Q_r pairings are not
    constant along block diagonals.
    '''
    log = logging.getLogger(__name__)
    if not (1 <= r <= m - 1):
        raise BadRange('recovery order {} outside 1..{}'.format(r, m - 1))
    d = oracle.degree
    if S < 0 or S > d - m:
        raise TruncationTooShort('order S={} needs an oracle of degree >= S+m={}, got {}'.format(S, S + m, d))
    dq = d - r - 1
    Q = q_blocks(oracle.matrix, oracle.dimE, r, dq)
    mats, var = diagonal_moments(Q, oracle.dimE, S)
    scale = max(1.0, max_abs(oracle.matrix))
    if var > tol * scale:
        raise DiagonalInconsistent('pairings of Q_{} vary by {:.3e} along diagonals (tolerance {:.1e})'.format(r, var, tol * scale))
    log.debug('recovered moments of order {} for r={} (diagonal variation {:.3e})'.format(S, r, var))
    return MomentSequence.from_nonnegative(mats, tol=1.0e-8 * scale)


def toeplitz_feasibility(seq, S=None, tol=FEASIBLE_TOL):
    '''PSD test of the block-Toeplitz matrix (m(l-k))_{k,l<=S}. Returns (flag, smallest eigenvalue).'''
    S = seq.maxOrder if S is None else S
    assert S <= seq.maxOrder, 'Error - S={} exceeds order {} of the sequence'.format(S, seq.maxOrder)
    lam = min_eig(toeplitz_block(seq, S))
    scale = max(1.0, max_abs(seq.moment(0)))
    return bool(lam >= -tol * scale), lam


def _fit_residual(angles, masses, target):
    '''sum_i w_i exp(-i s theta_i) - m(s) for s = 0..S (target holds m(0..S)).'''
    svals = np.arange(len(target))
    model = np.exp(-1j * np.outer(svals, angles)) @ masses
    return model - target


def _vandermonde_masses(angles, target):
    svals = np.arange(len(target))
    V = np.exp(-1j * np.outer(svals, angles))
    A = np.vstack([V.real, V.imag])
    b = np.concatenate([target.real, target.imag])
    w, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
    return w


def _refine_atoms(angles, masses, target, maxiter=MAX_REFINE):
    '''
    Levenberg-Marquardt on the real parameters (theta_i, w_i) of the moment
    residual, solved through the augmented least squares system so the
    Jacobian is never squared.
    '''
    k = len(angles)
    svals = np.arange(len(target))
    th, w = np.array(angles, dtype=float), np.array(masses, dtype=float)
    r = _fit_residual(th, w, target)
    cost = float(np.vdot(r, r).real)
    lam = 1.0e-3
    for _ in range(maxiter):
        if cost == 0.0:
            break
        E = np.exp(-1j * np.outer(svals, th))
        J = np.hstack([-1j * svals[:, None] * E * w[None, :], E])
        Jr = np.vstack([J.real, J.imag])
        rr = np.concatenate([r.real, r.imag])
        colnorm = np.maximum(np.linalg.norm(Jr, axis=0), 1.0e-300)
        accepted = False
        while lam <= 1.0e12:
            A = np.vstack([Jr, np.sqrt(lam) * np.diag(colnorm)])
            b = np.concatenate([-rr, np.zeros(2 * k)])
            step, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
            th2, w2 = th + step[:k], w + step[k:]
            r2 = _fit_residual(th2, w2, target)
            cost2 = float(np.vdot(r2, r2).real)
            if cost2 < cost:
                small = np.linalg.norm(step) <= 1.0e-15 * (1.0 + np.linalg.norm(np.concatenate([th, w])))
                th, w, r, cost = th2, w2, r2, cost2
                lam = max(lam / 10.0, 1.0e-15)
                accepted = True
                break
            lam *= 10.0
        if not accepted or small:
            break
    return th, w, float(np.max(np.abs(r))) if len(r) else 0.0


def _unit_roots(v, k):
    '''Roots of the polynomial with coefficients v pushed onto the circle; None unless exactly k usable roots.'''
    v = np.asarray(v, dtype=complex)
    if not np.all(np.isfinite(v)) or np.max(np.abs(v)) == 0.0:
        return None
    roots = np.roots(v)
    roots = roots[np.isfinite(roots) & (np.abs(roots) > 1.0e-8)]
    if len(roots) != k:
        return None
    return np.angle(roots)


def _initial_angles(Tm, k):
    '''
    Starting nodes for a k-atom fit: roots of the null vector of the leading
    (k+1)-section of the Toeplitz matrix, and roots of the vector of the
    full noise subspace supported on the first k+1 entries.
    '''
    S = Tm.shape[0] - 1
    out = []
    _, vecs = sla.eigh(0.5 * (Tm[:k + 1, :k + 1] + adj(Tm[:k + 1, :k + 1])))
    out.append(_unit_roots(vecs[:, 0], k))
    if k < S:
        _, vecs = sla.eigh(0.5 * (Tm + adj(Tm)))
        N = vecs[:, :S + 1 - k]
        _, _, vh = sla.svd(N[k + 1:, :])
        u = N @ np.conj(vh[-1])
        out.append(_unit_roots(u[:k + 1], k))
    return [a for a in out if a is not None]


def _para_orthogonal_angles(seq, S):
    '''S+1 nodes at the zeros of z Phi_S(z) - Phi_S^*(z), Phi_S the monic orthogonal polynomial.'''
    col = np.array([seq.moment(l)[0, 0] for l in range(S)])
    row = np.array([seq.moment(-k)[0, 0] for k in range(S)])
    b = -np.array([seq.moment(l - S)[0, 0] for l in range(S)])
    try:
        c = sla.solve_toeplitz((col, row), b) if S > 0 else np.zeros(0)
    except np.linalg.LinAlgError:
        return None
    a = np.concatenate([c, [1.0]])
    zphi = np.concatenate([[0.0], a])
    star = np.concatenate([np.conj(a[::-1]), [0.0]])
    return _unit_roots((zphi - star)[::-1], S + 1)


def atomic_from_moments(seq, S=None, tol=FEASIBLE_TOL):
    '''
    Atomic measure whose moments match m(s), |s| <= S (scalar case).
    The number of atoms is the smallest k <= S for which a k-atom fit,
    started from Pisarenko roots and refined by Levenberg-Marquardt,
    reproduces the moments to FIT_TOL (relative to the total mass).
    Otherwise the candidates include the S+1 atoms at the zeros of the
    para-orthogonal polynomial (exact for full rank Toeplitz matrices) and
    the fewest atoms whose residual is within NOISE_FACTOR of the best one
    are returned.
    '''
    log = logging.getLogger(__name__)
    if seq.dimE != 1:
        raise DimensionMismatch('atomic reconstruction needs dimE = 1, got {}'.format(seq.dimE))
    S = seq.maxOrder if S is None else S
    ok, lam = toeplitz_feasibility(seq, S, tol)
    if not ok:
        raise InfeasibleSequence('Toeplitz matrix has smallest eigenvalue {:.3e}'.format(lam))
    Tm = toeplitz_block(seq, S)
    ev = eigvalsh(Tm)
    if ev[-1] <= 0.0:
        return make_atomic([], dimE=1)
    target = np.array([seq.moment(s)[0, 0] for s in range(S + 1)])
    scale = max(1.0, abs(target[0]))
    fits = []
    for k in range(1, S + 1):
        best = None
        for start in _initial_angles(Tm, k):
            fit = _refine_atoms(start, _vandermonde_masses(start, target), target)
            if best is None or fit[2] < best[2]:
                best = fit
        if best is not None:
            fits.append(best)
            if best[2] <= FIT_TOL * scale:
                break
    chosen = fits[-1] if len(fits) > 0 and fits[-1][2] <= FIT_TOL * scale else None
    if chosen is None:
        start = _para_orthogonal_angles(seq, S)
        if start is not None:
            w = _vandermonde_masses(start, target)
            fits.append((start, w, float(np.max(np.abs(_fit_residual(start, w, target))))))
        if len(fits) == 0:
            raise IllConditioned('no atomic representation found for moments of order {}'.format(S))
        # noisy moments: fewest atoms within reach of the best fit
        floor = min([f[2] for f in fits])
        chosen = [f for f in fits if f[2] <= max(FIT_TOL * scale, NOISE_FACTOR * floor)][0]
    th, w, res = chosen
    if res >= VANDERMONDE_TOL * scale:
        raise IllConditioned('moment fit residual {:.3e}'.format(res))
    angles = np.mod(th, 2.0 * np.pi)
    order = np.argsort(angles)
    angles, w = angles[order], w[order]
    if len(angles) > 1:
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        if np.min(gaps) < ROOT_SEPARATION:
            raise IllConditioned('recovered atoms closer than {:.1e}'.format(ROOT_SEPARATION))
    total = float(np.real(target[0]))
    masses = np.real(w)
    if np.min(masses) < -tol * max(1.0, total):
        raise InfeasibleSequence('negative recovered mass {:.3e}'.format(np.min(masses)))
    masses = np.maximum(masses, 0.0)
    log.debug('reconstructed {} atoms from moments of order {}'.format(len(masses), S))
    return make_atomic([(th, [[mass]]) for th, mass in zip(angles, masses)], dimE=1)


@dataclass
class RecoveredTuple:
    m: int
    S: int
    sequences: list = field(default_factory=list)
    feasible: list = field(default_factory=list)
    min_eigs: list = field(default_factory=list)
    atomics: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)


def recover_tuple(oracle, m, S, tol=DIAGONAL_TOL, atomic=False):
    '''Moment sequences for r = 1..m-1 with feasibility flags (and atoms if requested, scalar case).'''
    out = RecoveredTuple(m=m, S=S)
    for r in range(1, m):
        seq = recover_moments(oracle, m, r, S, tol)
        ok, lam = toeplitz_feasibility(seq, S)
        out.sequences.append(seq)
        out.feasible.append(ok)
        out.min_eigs.append(lam)
        if not ok:
            out.diagnostics.append('{}: r={} smallest Toeplitz eigenvalue {:.3e}'.format(InfeasibleSequence.__name__, r, lam))
        atoms = None
        if atomic and ok and oracle.dimE == 1:
            try:
                atoms = atomic_from_moments(seq, S)
            except DSLError as err:
                out.diagnostics.append('{}: r={} {}'.format(type(err).__name__, r, err))
        out.atomics.append(atoms)
    return out


def rebuild_tuple(recovered):
    '''Measure tuple with the recovered moment sequences as moment sources.'''
    return MeasureTuple(recovered.sequences)


@dataclass
class Certificate:
    m: int
    S: int
    d: int
    d_rebuilt: int
    max_gram_deviation: float
    tol: float
    feasible: list
    passed: bool
    diagnostics: list = field(default_factory=list)
    recovered: object = None

    def to_dict(self):
        return {'m': self.m, 'S': self.S, 'd': self.d, 'dRebuilt': self.d_rebuilt, 'margin': self.d - self.m - self.S,
                'maxGramDeviation': self.max_gram_deviation, 'tol': self.tol,
                'feasible': [bool(f) for f in self.feasible], 'pass': bool(self.passed),
                'diagnostics': list(self.diagnostics)}


def roundtrip_verify(oracle, m, d=None, S=None, tol=1.0e-8):
    '''
    Recovers the tuple from the oracle, rebuilds the model Gram matrix of
    degree d' = min(d-m-1, S) and compares it with the oracle pairings.
    Passes iff all sequences are feasible and the deviation is <= tol times
    the size of the pairings.
    '''
    log = logging.getLogger(__name__)
    d = oracle.degree if d is None else d
    if d > oracle.degree:
        raise TruncationTooShort('requested degree {} above oracle degree {}'.format(d, oracle.degree))
    S = d - m if S is None else S
    if S < 0 or S > d - m:
        raise TruncationTooShort('order S={} needs degree >= S+m={}, got {}'.format(S, S + m, d))
    rec = recover_tuple(oracle, m, S, atomic=False)
    d2 = min(d - m - 1, S)
    if d2 < 0:
        raise TruncationTooShort('degree {} leaves no room to rebuild the Gram matrix for m={}'.format(d, m))
    G2 = gram(rebuild_tuple(rec), d2).matrix
    n = (d2 + 1) * oracle.dimE
    G1 = oracle.matrix[:n, :n]
    dev = max_abs(G2 - G1)
    scale = max(1.0, max_abs(G1))
    passed = bool(dev <= tol * scale and all(rec.feasible))
    cert = Certificate(m=m, S=S, d=d, d_rebuilt=d2, max_gram_deviation=dev, tol=tol, feasible=rec.feasible,
                       passed=passed, diagnostics=list(rec.diagnostics), recovered=rec)
    if dev > tol * scale:
        cert.diagnostics.append('Gram deviation {:.3e} above {:.1e}'.format(dev, tol * scale))
    log.info('round trip m={} d={} S={}: deviation {:.3e}, pass={}'.format(m, d, S, dev, passed))
    return cert


def uniqueness_check(mtuple, V, d, tol=1.0e-8):
    '''
    Moments recovered from the conjugated tuple V* mu V equal V* m_r(s) V.
    '''
    V = check_unitary(V, dim=mtuple.dimE)
    m = mtuple.m
    S = d - m
    o1 = gram_oracle_from_model(mtuple, d)
    o2 = gram_oracle_from_model(conjugate_tuple(mtuple, V), d)
    dev = 0.0
    scale = 1.0
    for r in range(1, m):
        s1 = recover_moments(o1, m, r, S)
        s2 = recover_moments(o2, m, r, S)
        for s in range(-S, S + 1):
            a = s1.moment(s)
            dev = max(dev, max_abs(s2.moment(s) - adj(V) @ a @ V))
            scale = max(scale, max_abs(a))
    return make_report('uniqueness', m, dev / scale, tol, S=int(S), d=int(d))
