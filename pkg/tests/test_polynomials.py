import numpy as np
import pytest
from hypothesis import given

from dslib.errors import DimensionMismatch, BadRadius, NonPSDQ
from dslib.polynomials import VectorPolynomial, monomial, from_scalar, shift, lshift, lshift_power, shift_power
from dslib.polynomials import dilate, derivative, h2_inner, h2_norm_sq, dalpha_norm_sq, evaluate, truncate, allclose

from .strategies import polynomials


def test_degree_and_zero():
    f = VectorPolynomial([[1.0], [0.0], [0.0]])
    assert f.degree() == 0
    assert VectorPolynomial(np.zeros((3, 2))).is_zero()
    with pytest.raises(DimensionMismatch):
        VectorPolynomial([1.0, 2.0], dimE=2)


@given(polynomials(dimE=2))
def test_lshift_inverts_shift(f):
    assert allclose(lshift(shift(f)), f)
    assert allclose(lshift_power(shift_power(f, 3), 3), f)


@given(polynomials())
def test_backward_shift_definition(f):
    z = 0.3 + 0.2j
    lhs = evaluate(lshift(f), z)
    rhs = (evaluate(f, z) - evaluate(f, 0.0)) / z
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_derivative():
    f = from_scalar([1.0, 2.0, 3.0, 4.0], [1.0])
    assert np.allclose(derivative(f, 2).coeffs[:, 0], [6.0, 24.0])
    assert derivative(f, 5).is_zero()


def test_dilate():
    f = monomial(2, [1.0, 1j])
    assert np.allclose(dilate(f, 0.5).coeffs[2], [0.25, 0.25j])
    with pytest.raises(BadRadius):
        dilate(f, 0.0)


@given(polynomials(dimE=2))
def test_h2_pairing(f):
    assert abs(h2_inner(f, f) - h2_norm_sq(f)) < 1e-9 * max(1.0, h2_norm_sq(f))


def test_dalpha_norm():
    f = from_scalar([1.0, 1.0, 1.0], [1.0])
    assert abs(dalpha_norm_sq(f, 1.0) - 6.0) < 1e-12
    assert abs(dalpha_norm_sq(f, 0.0) - h2_norm_sq(f)) < 1e-12
    with pytest.raises(NonPSDQ):
        dalpha_norm_sq(f, 1.0, [[-1.0]])


def test_truncate():
    f = from_scalar([1.0, 2.0, 3.0], [1.0])
    assert truncate(f, 1).degree() == 1
