import numpy as np
import pytest

from dslib.errors import GridTooCoarse, BadRadius
from dslib.quadrature import legendre_nodes, angular_count, circle_mean, disc_integral


def test_legendre_nodes_interval():
    x, w = legendre_nodes(8, 0.0, 2.0)
    assert np.all((x > 0.0) & (x < 2.0))
    assert abs(np.sum(w) - 2.0) < 1e-13
    assert abs(np.sum(w * x**5) - 2.0**6 / 6.0) < 1e-12


def test_angular_count_raised_against_aliasing():
    assert angular_count(0.0, 16) == 16
    n = angular_count(0.9, 16)
    assert 0.9**n <= 1e-13
    assert n == 512


def test_normalized_area():
    assert abs(disc_integral(lambda zs: np.ones(len(zs)), 1.0, (16, 16), poisson=False) - 1.0) < 1e-13
    # |z|^2 dA over the unit disc
    assert abs(disc_integral(lambda zs: np.abs(zs)**2, 1.0, (16, 16), poisson=False) - 0.5) < 1e-13


def test_circle_mean_of_monomials():
    assert abs(circle_mean(lambda zs: zs**3, 0.7, 16, poisson=False)) < 1e-14
    assert abs(circle_mean(lambda zs: np.abs(zs)**2, 0.7, 16, poisson=False) - 0.49) < 1e-14


def test_grid_and_radius_checks():
    with pytest.raises(GridTooCoarse):
        disc_integral(lambda zs: zs, 0.5, (8, 64))
    with pytest.raises(BadRadius):
        disc_integral(lambda zs: zs, 1.5, (16, 16))
