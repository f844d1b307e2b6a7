#!/usr/bin/env python
# ****************************************************************************
# quadrature.py
#
# DESCRIPTION:
# Polar quadrature on discs and circles centered at the origin. The radial
# direction uses Gauss-Legendre nodes mapped to [0,R], the angular direction
# the trapezoid rule. Integrals are taken against the normalized area measure
# dA = dx dy / pi = 2 rho drho dphi / (2 pi).
#
# The trapezoid rule on a circle of radius rho integrates a Poisson integral
# exactly up to aliasing terms of size rho^N. The angular node count is
# therefore raised above the requested minimum until R^N drops below
# ALIAS_TOL (capped at MAX_ANGULAR).
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging
import numpy as np
import scipy.special as sf

from .errors import GridTooCoarse, BadRadius

MIN_NODES = 16
ALIAS_TOL = 1.0e-13
MAX_ANGULAR = 2**16


def legendre_nodes(n, a, b):
    '''Gauss-Legendre nodes and weights on the interval [a,b].'''
    x, w = sf.roots_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def angular_count(R, nmin, extra=0):
    '''Trapezoid node count >= nmin with R^(N-extra) <= ALIAS_TOL.'''
    n = int(nmin)
    if R <= 0.0:
        return n
    while (n <= extra or R**(n - extra) > ALIAS_TOL) and n < MAX_ANGULAR:
        n *= 2
    return n


def check_grid(grid):
    nrad, nang = int(grid[0]), int(grid[1])
    if nrad < MIN_NODES or nang < MIN_NODES:
        raise GridTooCoarse('quadrature grid {} below minimum of {} nodes per direction'.format((nrad, nang), MIN_NODES))
    return nrad, nang


def circle_mean(func, R, nang, poisson=True, extra=0):
    '''
    Mean of func over the circle of radius R (trapezoid rule). `func` maps
    an array of points to an array of values. With poisson=True the node
    count is raised against aliasing of a Poisson integral; `extra` is the
    trigonometric degree of the remaining (polynomial) factors.
    '''
    log = logging.getLogger(__name__)
    if poisson:
        n = angular_count(R, nang, extra)
    else:
        n = max(int(nang), 2 * extra + 2)
    if n != nang:
        log.debug('angular nodes raised from {} to {} at radius {}'.format(nang, n, R))
    phi = 2.0 * np.pi * np.arange(n) / n
    vals = func(R * np.exp(1j * phi))
    return np.mean(vals)


def disc_integral(func, R, grid, weight=None, poisson=True, extra=0):
    '''
    int_{|z|<R} func(z) weight(|z|) dA(z) with the normalized area measure.

    :param func: vectorized function of complex points
    :param R: radius, 0 < R <= 1
    :param grid: (radial nodes, minimum angular nodes)
    :param weight: optional radial weight function of rho
    :param poisson: integrand contains a Poisson integral (see circle_mean)
    :param extra: trigonometric degree of the polynomial factors
    '''
    nrad, nang = check_grid(grid)
    if not (0.0 < R <= 1.0):
        raise BadRadius('disc radius must lie in (0,1], got {}'.format(R))
    rho, wr = legendre_nodes(nrad, 0.0, R)
    total = 0.0
    for r, w in zip(rho, wr):
        fac = 2.0 * r * w
        if weight is not None:
            fac *= weight(r)
        if fac == 0.0:
            continue
        total += fac * circle_mean(func, r, nang, poisson=poisson, extra=extra)
    return total
