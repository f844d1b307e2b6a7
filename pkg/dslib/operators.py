#!/usr/bin/env python
# ****************************************************************************
# operators.py
#
# DESCRIPTION:
# Dense matrix toolkit for operators T on a finite-dimensional Hilbert
# space: defect operators beta_m(T), classification (m-isometric,
# m-concave, expansive), left inverse L_T = (T*T)^{-1} T* and Cauchy dual,
# checks of the inequalities beta_r >= sum_k L*^k beta_{r+1} L^k with
# truncated series, Shimorin-type inequality, hyper-range and Wold split,
# spectral checks, weighted shifts and a few combinatorial helpers.
#
# PSD tests use the Hermitian eigen-decomposition with threshold -tol*scale
# where scale is the size of the matrices entering the test.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import NotLeftInvertible, BadRange, PreconditionFailed, TruncationTooShort, SingularTStarT
from .errors import SeriesNotConverged, NotReducing, NotUnitaryOnHyperRange
from .linalg import as_square, adj, binom, min_eig, max_eig, max_abs, numerical_rank
from .dirichlet import make_report
from .spaces import defect_blocks, q_blocks, gram

DEFAULT_TOL = 1.0e-9
LEFT_INV_TOL = 1.0e-10
DEFAULT_K = 64
DEFAULT_CAP = 8


def opnorm(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(sla.norm(a, 2))


def defect(T, m):
    '''beta_m(T) = sum_j (-1)^(m-j) C(m,j) T*^j T^j.'''
    assert m >= 0, 'Error - defect order must be nonnegative, got {}'.format(m)
    T = as_square(T, 'T')
    Ts = adj(T)
    P = np.eye(T.shape[0], dtype=complex)
    out = np.zeros_like(P)
    for j in range(m + 1):
        out += (-1)**(m - j) * binom(m, j) * P
        P = Ts @ P @ T
    return out


def defect_scale(T, m):
    '''sum_j C(m,j) |T^j|^2, the size of the terms summed in beta_m(T).'''
    T = as_square(T, 'T')
    P = np.eye(T.shape[0], dtype=complex)
    s = 0.0
    for j in range(m + 1):
        s += binom(m, j) * opnorm(P)**2
        P = T @ P
    return max(1.0, s)


def gram_power(T, n):
    '''T*^n T^n.'''
    Tn = np.linalg.matrix_power(as_square(T, 'T'), n)
    return adj(Tn) @ Tn


def left_inverse(T, tol=LEFT_INV_TOL):
    '''L_T = (T*T)^{-1} T*; requires the smallest eigenvalue of T*T >= tol.'''
    T = as_square(T, 'T')
    TT = adj(T) @ T
    lam = min_eig(TT)
    if lam < tol:
        raise NotLeftInvertible('T*T has smallest eigenvalue {:.3e} < {:.1e}'.format(lam, tol))
    return sla.solve(TT, adj(T), assume_a='her')


def cauchy_dual(T):
    '''T' = T (T*T)^{-1} = L_T*.'''
    return adj(left_inverse(T))


def kernel_projection(T):
    '''I - T L_T, the orthogonal projection onto ker T*.'''
    T = as_square(T, 'T')
    return np.eye(T.shape[0]) - T @ left_inverse(T)


@dataclass
class Classification:
    dim: int
    cap: int
    tol: float
    isometric_order: object = None
    concave_orders: list = field(default_factory=list)
    expansive: bool = False
    left_invertible: bool = False
    defect_norms: list = field(default_factory=list)
    higher_defects_vanish: object = None
    inequality: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def to_dict(self):
        return {'dim': self.dim, 'cap': self.cap, 'tol': self.tol,
                'isometricOrder': self.isometric_order if self.isometric_order is not None else 'none <= {}'.format(self.cap),
                'concaveOrders': list(self.concave_orders), 'expansive': self.expansive,
                'leftInvertible': self.left_invertible, 'defectNorms': list(self.defect_norms),
                'higherDefectsVanish': self.higher_defects_vanish, 'inequality': list(self.inequality),
                'diagnostics': list(self.diagnostics)}


def classify(T, cap=DEFAULT_CAP, tol=DEFAULT_TOL, K=DEFAULT_K):
    '''
    Classifies T: isometric order (smallest m <= cap with beta_m = 0),
    concave orders (beta_m <= 0), expansivity (beta_1 >= 0), left
    invertibility and, for left invertible T with an isometric or concave
    order m >= 3, the per-r status of the series inequalities.
    '''
    log = logging.getLogger(__name__)
    assert 1 <= cap <= 8, 'Error - classification cap must lie in 1..8, got {}'.format(cap)
    T = as_square(T, 'T')
    out = Classification(dim=T.shape[0], cap=cap, tol=tol)
    betas = {}
    for m in range(1, cap + 2):
        betas[m] = defect(T, m)
        out.defect_norms.append(max_abs(betas[m]) / defect_scale(T, m))
    for m in range(1, cap + 1):
        sc = defect_scale(T, m)
        if out.isometric_order is None and out.defect_norms[m - 1] <= tol:
            out.isometric_order = m
        if max_eig(betas[m]) <= tol * sc:
            out.concave_orders.append(m)
    out.expansive = bool(min_eig(betas[1]) >= -tol * defect_scale(T, 1))
    if out.isometric_order is not None:
        m = out.isometric_order
        out.higher_defects_vanish = bool(all([out.defect_norms[k - 1] <= 10.0 * tol for k in range(m + 1, cap + 2)]))
    try:
        left_inverse(T)
        out.left_invertible = True
    except NotLeftInvertible as err:
        out.diagnostics.append('{}: {}'.format(SingularTStarT.__name__, err))
    morder = out.isometric_order
    if morder is None:
        morder = min([m for m in out.concave_orders if m >= 2], default=None)
    if out.left_invertible and morder is not None:
        rep = inequality_check(T, morder, K, tol)
        out.inequality = rep.rows
    log.debug('classified operator of dimension {}: order {}'.format(out.dim, out.isometric_order))
    return out


@dataclass
class InequalityReport:
    m: int
    K: int
    tol: float
    rows: list = field(default_factory=list)
    psi: list = field(default_factory=list)

    @property
    def passed(self):
        return all([r['status'] == 'pass' for r in self.rows]) and all([p['pass'] for p in self.psi])

    @property
    def conclusive(self):
        return all([r['status'] != 'inconclusive' for r in self.rows])

    def to_dict(self):
        return {'m': self.m, 'K': self.K, 'tol': self.tol, 'rows': self.rows, 'psi': self.psi,
                'pass': self.passed, 'conclusive': self.conclusive}


def inequality_check(T, m, K=DEFAULT_K, tol=DEFAULT_TOL):
    '''
    For r = 1..m-2: beta_r - S_K >= 0 with S_K = sum_{k=1}^K L*^k beta_{r+1} L^k,
    conclusive only if the last increment is below tol. For r = 0..m-2:
    Psi(r) = sum_{k>r} C(k-1,r) L*^k beta_{r+1} L^k <= I (truncated at K).
    '''
    T = as_square(T, 'T')
    L = left_inverse(T)
    rep = InequalityReport(m=m, K=K, tol=tol)
    betas = {r: defect(T, r) for r in range(0, m)}
    for r in range(1, m - 1):
        B = betas[r + 1]
        S = np.zeros_like(B)
        P = np.eye(T.shape[0], dtype=complex)
        inc = 0.0
        for k in range(1, K + 1):
            P = L @ P
            term = adj(P) @ B @ P
            S += term
            inc = opnorm(term)
        sc = max(1.0, opnorm(betas[r]))
        lam = min_eig(betas[r] - S)
        if inc > tol * sc:
            status = 'inconclusive'
            note = '{}: last increment {:.3e}'.format(SeriesNotConverged.__name__, inc)
        else:
            status = 'pass' if lam >= -tol * sc else 'fail'
            note = ''
        rep.rows.append({'r': r, 'status': status, 'min_eig': lam, 'last_increment': inc, 'note': note})
    for r in range(0, m - 1):
        B = betas[r + 1]
        Psi = np.zeros_like(B)
        P = np.eye(T.shape[0], dtype=complex)
        inc = 0.0
        for k in range(1, K + 1):
            P = L @ P
            if k >= r + 1:
                term = binom(k - 1, r) * (adj(P) @ B @ P)
                Psi += term
                inc = opnorm(term)
        lam = max_eig(Psi - np.eye(T.shape[0]))
        rep.psi.append({'r': r, 'max_eig': lam, 'last_increment': inc, 'pass': bool(lam <= tol * max(1.0, opnorm(Psi)))})
    return rep


@dataclass
class ShimorinReport:
    holds: bool
    three_concave: bool
    telescoping: bool
    forms_residual: float
    min_eig: float
    tol: float
    diagnostics: list = field(default_factory=list)

    @property
    def implication_ok(self):
        return (not self.holds) or (self.three_concave and self.telescoping)

    def to_dict(self):
        return {'holds': self.holds, 'threeConcave': self.three_concave, 'telescoping': self.telescoping,
                'formsResidual': self.forms_residual, 'minEig': self.min_eig, 'tol': self.tol,
                'implicationOk': self.implication_ok, 'diagnostics': self.diagnostics}


def shimorin_check(T, K=DEFAULT_K, tol=DEFAULT_TOL):
    '''
    Tests beta_2 <= beta_1 - L* beta_1 L. When it holds, checks that it
    forces beta_3 <= 0 and the telescoped bound sum_{k<=n} L*^k beta_2 L^k <= beta_1
    for n <= K. Also compares with the untransformed form
    T*^2 T^2 - 3 T*T + 3I - L*L - P_{ker T*} <= 0.
    '''
    T = as_square(T, 'T')
    L = left_inverse(T)
    Ls = adj(L)
    n = T.shape[0]
    b1, b2, b3 = defect(T, 1), defect(T, 2), defect(T, 3)
    M = b1 - Ls @ b1 @ L - b2
    sc = max(1.0, opnorm(b1), opnorm(b2))
    lam = min_eig(M)
    holds = bool(lam >= -tol * sc)
    three_concave = bool(max_eig(b3) <= tol * defect_scale(T, 3))
    S = np.zeros_like(b1)
    P = np.eye(n, dtype=complex)
    telescoping = True
    for k in range(0, K + 1):
        S += adj(P) @ b2 @ P
        if min_eig(b1 - S) < -tol * sc:
            telescoping = False
            break
        P = L @ P
    proj = np.eye(n) - T @ L
    orig = gram_power(T, 2) - 3.0 * adj(T) @ T + 3.0 * np.eye(n) - Ls @ L - proj
    res = max_abs(orig + M)
    rep = ShimorinReport(holds=holds, three_concave=three_concave, telescoping=telescoping,
                         forms_residual=res, min_eig=lam, tol=tol)
    if holds and not rep.implication_ok:
        rep.diagnostics.append('inequality holds but its consequences fail')
    return rep


def shimorin_model_check(mtuple, d=4, tol=DEFAULT_TOL):
    '''
    The Shimorin-type inequality and the series inequalities for M_z on the
    model space, as forms on polynomials of degree <= d. On constants the
    former reduces to mu_2(T) <= mu_1(T).
    '''
    dimE = mtuple.dimE
    m = mtuple.m
    G = gram(mtuple, d + m + 1).matrix
    B1 = defect_blocks(G, dimE, 1, d)
    B2 = defect_blocks(G, dimE, 2, d)
    size = (d + 1) * dimE
    shifted = np.zeros_like(B1)
    shifted[dimE:, dimE:] = B1[:size - dimE, :size - dimE]
    M = B1 - shifted - B2
    sc = max(1.0, max_abs(B1))
    lam = min_eig(M)
    ineq = []
    for r in range(1, m - 1):
        lq = min_eig(q_blocks(G, dimE, r, d))
        ineq.append({'r': r, 'min_eig': lq, 'pass': bool(lq >= -tol * sc)})
    const = min_eig(B1[:dimE, :dimE] - B2[:dimE, :dimE])
    return {'holds': bool(lam >= -tol * sc), 'min_eig': lam, 'constants_min_eig': const,
            'inequality': ineq, 'inequality_holds': all([r['pass'] for r in ineq]), 'd': d}


def power_defect_identity(T, r, n, tol=DEFAULT_TOL):
    '''T*^n beta_r T^n - sum_{k<n} T*^k beta_{r+1} T^k = beta_r.'''
    T = as_square(T, 'T')
    br, br1 = defect(T, r), defect(T, r + 1)
    Tn = np.linalg.matrix_power(T, n)
    lhs = adj(Tn) @ br @ Tn
    sc = opnorm(Tn)**2 * opnorm(br)
    P = np.eye(T.shape[0], dtype=complex)
    for k in range(n):
        lhs -= adj(P) @ br1 @ P
        sc += opnorm(P)**2 * opnorm(br1)
        P = T @ P
    return make_report('power_defect', n, max_abs(lhs - br) / max(1.0, sc), tol, r=int(r))


def wandering_decomposition_check(T, n, tol=DEFAULT_TOL):
    '''
    I = sum_{i<n} L*^i P L^i + L*^n L^n + sum_{i=1}^n L*^i beta_1 L^i with
    P = I - T L_T, the operator form of the norm splitting along the
    wandering subspace ker T*.
    '''
    T = as_square(T, 'T')
    L = left_inverse(T)
    dim = T.shape[0]
    P = np.eye(dim) - T @ L
    b1 = defect(T, 1)
    acc = np.zeros((dim, dim), dtype=complex)
    Li = np.eye(dim, dtype=complex)
    for i in range(n):
        acc += adj(Li) @ P @ Li
        Li = L @ Li
        acc += adj(Li) @ b1 @ Li
    acc += adj(Li) @ Li
    sc = max(1.0, opnorm(L)**(2 * n) * max(1.0, opnorm(b1)))
    return make_report('wandering_decomposition', n, max_abs(acc - np.eye(dim)) / sc, tol)


def verify_projection_identities(T, jmax=4, tol=DEFAULT_TOL):
    '''
    T L_T is the orthogonal projection onto range T and
    I - T^j L_T^j = sum_{p<j} T^p (I - T L_T) L_T^p for j <= jmax.
    '''
    T = as_square(T, 'T')
    L = left_inverse(T)
    dim = T.shape[0]
    E = T @ L
    res = max(max_abs(E @ E - E), max_abs(adj(E) - E), max_abs(L @ T - np.eye(dim)))
    reports = [make_report('range_projection', 1, res, tol)]
    P = np.eye(dim) - E
    for j in range(1, jmax + 1):
        Tj = np.linalg.matrix_power(T, j)
        Lj = np.linalg.matrix_power(L, j)
        acc = np.zeros((dim, dim), dtype=complex)
        for p in range(j):
            acc += np.linalg.matrix_power(T, p) @ P @ np.linalg.matrix_power(L, p)
        sc = max(1.0, opnorm(Tj) * opnorm(Lj))
        reports.append(make_report('power_projection', j, max_abs(np.eye(dim) - Tj @ Lj - acc) / sc, tol))
    return reports


def hyper_range(T, tol=1.0e-10):
    '''
    Orthonormal basis of the intersection of the ranges of T^n, obtained by
    iterating Q <- orth(T Q) until the dimension stops decreasing. Rank
    decisions use singular values > tol * |T|.
    '''
    T = as_square(T, 'T')
    dim = T.shape[0]
    nT = opnorm(T)
    Q = np.eye(dim, dtype=complex)
    if nT == 0.0:
        return np.zeros((dim, 0), dtype=complex)
    for step in range(dim + 1):
        A = T @ Q
        if A.shape[1] == 0:
            break
        U, s, _ = sla.svd(A, full_matrices=False)
        k = int(np.sum(s > tol * nT))
        Qn = U[:, :k]
        if k == Q.shape[1]:
            return Qn
        Q = Qn
        if k == 0:
            break
    return Q


@dataclass
class WoldReport:
    unitary_dim: int
    complement_dim: int
    wandering_dim: int
    reducing_residual: float
    unitary_residual: float
    tol: float
    failures: list = field(default_factory=list)
    unitary_basis: object = None
    complement_basis: object = None

    @property
    def passed(self):
        return len(self.failures) == 0

    def to_dict(self):
        return {'unitaryDim': self.unitary_dim, 'complementDim': self.complement_dim,
                'wanderingDim': self.wandering_dim, 'reducingResidual': self.reducing_residual,
                'unitaryResidual': self.unitary_residual, 'tol': self.tol,
                'failures': list(self.failures), 'pass': self.passed}


def wold_split(T, tol=DEFAULT_TOL):
    '''
    Splits H = H_inf(T) + complement and verifies that H_inf reduces T, that
    T is unitary on it, and that the complement is spanned by the wandering
    vectors S^n ker S* of the compression S. Failures are recorded, not raised.
    '''
    log = logging.getLogger(__name__)
    T = as_square(T, 'T')
    left_inverse(T)
    dim = T.shape[0]
    Q = hyper_range(T)
    P = Q @ adj(Q)
    nT = max(1.0, opnorm(T))
    red = opnorm(P @ T - T @ P) / nT
    k = Q.shape[1]
    if k > 0:
        A = adj(Q) @ T @ Q
        uni = max_abs(adj(A) @ A - np.eye(k))
    else:
        uni = 0.0
    Qc = sla.null_space(adj(Q)) if k > 0 else np.eye(dim, dtype=complex)
    c = Qc.shape[1]
    wdim = 0
    if c > 0:
        S = adj(Qc) @ T @ Qc
        W0 = sla.null_space(adj(S))
        cols = []
        V = W0
        for n in range(c):
            cols.append(V)
            V = S @ V
        span = np.hstack(cols) if len(cols) > 0 else np.zeros((c, 0))
        wdim = numerical_rank(span, 1.0e-10) if span.size > 0 else 0
    rep = WoldReport(unitary_dim=k, complement_dim=c, wandering_dim=wdim, reducing_residual=red,
                     unitary_residual=uni, tol=tol, unitary_basis=Q, complement_basis=Qc)
    if red > tol:
        rep.failures.append('{}: |PT - TP| = {:.3e}'.format(NotReducing.__name__, red))
    if uni > tol:
        rep.failures.append('{}: |A*A - I| = {:.3e}'.format(NotUnitaryOnHyperRange.__name__, uni))
    if wdim != c:
        rep.failures.append('wandering span of dimension {} in complement of dimension {}'.format(wdim, c))
    if not rep.passed:
        log.info('Wold split failed: {}'.format('; '.join(rep.failures)))
    return rep


def eigen_modulus_check(T, m, tol=1.0e-8, cap=DEFAULT_CAP):
    '''All eigenvalues of an m-isometric matrix lie on the unit circle.'''
    T = as_square(T, 'T')
    cl = classify(T, cap=max(cap, min(m, 8)), K=8)
    if cl.isometric_order is None or cl.isometric_order > m:
        raise PreconditionFailed('operator is not an isometry of order <= {} (found {})'.format(m, cl.isometric_order))
    ev = sla.eigvals(T)
    dev = float(np.max(np.abs(np.abs(ev) - 1.0))) if len(ev) > 0 else 0.0
    return make_report('eigen_modulus', m, dev, tol, eigenvalues=[[float(e.real), float(e.imag)] for e in ev])


def hockey_stick(p, r):
    '''sum_{i=r}^{p-1} C(i-1, r-1) = C(p-1, r), for 1 <= r <= p-1.'''
    if not (1 <= r <= p - 1):
        raise BadRange('hockey stick sum needs 1 <= r <= p-1, got p={}, r={}'.format(p, r))
    s = sum([binom(i - 1, r - 1) for i in range(r, p)])
    assert s == binom(p - 1, r), 'Error - hockey stick identity failed for p={}, r={}'.format(p, r)
    return s


def concave_growth_check(T, m, nmax, tol=DEFAULT_TOL):
    '''
    For m-concave T: T*^n T^n <= sum_{j<m} C(n,j) beta_j for n = m..nmax,
    and beta_{m-1} >= 0.
    '''
    T = as_square(T, 'T')
    if max_eig(defect(T, m)) > tol * defect_scale(T, m):
        raise PreconditionFailed('operator is not {}-concave'.format(m))
    betas = [defect(T, j) for j in range(m)]
    worst = 0.0
    for n in range(m, nmax + 1):
        Gn = gram_power(T, n)
        A = sum([binom(n, j) * betas[j] for j in range(m)]) - Gn
        sc = max(1.0, opnorm(Gn), max([binom(n, j) * opnorm(betas[j]) for j in range(m)]))
        worst = max(worst, -min_eig(A) / sc)
    lam = min_eig(betas[m - 1])
    worst = max(worst, -lam / defect_scale(T, m - 1))
    return make_report('concave_growth', m, max(worst, 0.0), tol, nmax=int(nmax), top_defect_min_eig=lam)


def weighted_shift(weights, S):
    '''(S+1)x(S+1) truncation of the unilateral shift T e_k = w_k e_{k+1}.'''
    w = np.asarray(weights, dtype=complex).reshape(-1)
    assert len(w) >= S, 'Error - need {} weights, got {}'.format(S, len(w))
    T = np.zeros((S + 1, S + 1), dtype=complex)
    for k in range(S):
        T[k + 1, k] = w[k]
    return T


def jordan_block(lam, size):
    '''lam I + N with N the nilpotent upper shift.'''
    return lam * np.eye(size, dtype=complex) + np.diag(np.ones(size - 1, dtype=complex), 1)


def random_unitary(dim, rng):
    '''Haar unitary from the QR decomposition of a complex Gaussian matrix.'''
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    Q, R = sla.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def weighted_shift_equivalence(weights, m, S, tol=DEFAULT_TOL):
    '''
    For a unilateral weighted shift, compares
      (i)  beta_r - sum_{k>=1} L*^k beta_{r+1} L^k >= 0, r = 1..m-2
      (ii) beta_r >= 0, r = 1..m-2
    on the (S+1)-dimensional truncation, restricted to basis indices
    k <= S - m that the truncation cannot reach. L is the pseudo-inverse of
    the truncated shift (nilpotent), so the series ends after S terms.
    The comparison is only meaningful for m-concave shifts; others raise
    PreconditionFailed.
    '''
    if S - m < 0:
        raise TruncationTooShort('truncation length {} too short for order {}'.format(S, m))
    if np.any(np.asarray(weights)[:S] == 0):
        raise BadRange('weighted shift weights must be nonzero')
    W = weighted_shift(weights, S)
    L = sla.pinv(W)
    valid = S - m + 1
    betas = {r: np.real(np.diag(defect(W, r)))[:valid] for r in range(1, m + 1)}
    if np.max(betas[m]) > tol * max(1.0, float(np.max(np.abs(betas[m])))):
        raise PreconditionFailed('weighted shift is not {}-concave (beta_{} reaches {:.3e})'.format(m, m, np.max(betas[m])))
    cond_ii = True
    cond_i = True
    for r in range(1, m - 1):
        sc = max(1.0, float(np.max(np.abs(betas[r]))))
        if np.min(betas[r]) < -tol * sc:
            cond_ii = False
        B = defect(W, r + 1)
        Ssum = np.zeros_like(B)
        P = np.eye(S + 1, dtype=complex)
        for k in range(1, S + 1):
            P = L @ P
            Ssum += adj(P) @ B @ P
        diag = betas[r] - np.real(np.diag(Ssum))[:valid]
        if np.min(diag) < -tol * sc:
            cond_i = False
    agree = cond_i == cond_ii
    return make_report('weighted_shift_equivalence', m, 0.0 if agree else 1.0, 0.0,
                       series_condition=cond_i, defect_condition=cond_ii, m_concave=True, S=int(S))
