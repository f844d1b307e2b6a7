import numpy as np
import pytest

from dslib.errors import NonHermitianWeight, NonPSDWeight, DimensionMismatch, NotUnitary
from dslib.linalg import binom, as_square, check_hermitian, check_unitary, min_eig, is_psd, block, numerical_rank


def test_binom_outside_range_is_zero():
    assert binom(5, 2) == 10
    assert binom(3, 4) == 0
    assert binom(3, -1) == 0
    assert binom(0, 0) == 1


def test_as_square_rejects_rectangular():
    with pytest.raises(DimensionMismatch):
        as_square(np.zeros((2, 3)))
    assert as_square(2.0).shape == (1, 1)


def test_check_hermitian():
    check_hermitian([[2.0, 1j], [-1j, 2.0]], psd=True)
    with pytest.raises(NonHermitianWeight):
        check_hermitian([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NonPSDWeight):
        check_hermitian([[1.0, 0.0], [0.0, -1.0]], psd=True)


def test_check_unitary():
    check_unitary(np.array([[0.0, 1.0], [1j, 0.0]]))
    with pytest.raises(NotUnitary):
        check_unitary(2.0 * np.eye(2))
    with pytest.raises(DimensionMismatch):
        check_unitary(np.eye(2), dim=3)


def test_psd_boundary_case():
    # rank one Toeplitz matrix, semidefinite but singular
    a = np.ones((4, 4))
    assert is_psd(a)
    assert abs(min_eig(a)) < 1e-12
    assert numerical_rank(a, 1e-10) == 1


def test_block_k_major():
    a = np.arange(36).reshape((6, 6))
    assert np.array_equal(block(a, 1, 2, 2), a[2:4, 4:6])
