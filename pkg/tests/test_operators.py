import numpy as np
import pytest
from hypothesis import given, strategies as st

from dslib.errors import NotLeftInvertible, BadRange, PreconditionFailed, TruncationTooShort
from dslib.errors import SeriesNotConverged, NotUnitaryOnHyperRange
from dslib.linalg import max_abs
from dslib.corpus import get_rng, isometric_matrix, expansive_matrix, isometric_shift_weights, random_tuple
from dslib.operators import defect, left_inverse, cauchy_dual, kernel_projection, classify, inequality_check
from dslib.operators import shimorin_check, shimorin_model_check, power_defect_identity, wandering_decomposition_check
from dslib.operators import verify_projection_identities, hyper_range, wold_split, eigen_modulus_check, hockey_stick
from dslib.operators import concave_growth_check, weighted_shift, jordan_block, random_unitary
from dslib.operators import weighted_shift_equivalence

from .strategies import seeds


def test_jordan_defects():
    J = jordan_block(1.0, 2)
    assert np.allclose(defect(J, 1), [[0.0, 1.0], [1.0, 1.0]])
    assert np.allclose(defect(J, 2), [[0.0, 0.0], [0.0, 2.0]])
    assert np.allclose(defect(J, 3), 0.0)


def test_classify_examples():
    assert classify(jordan_block(1.0, 2)).isometric_order == 3
    assert classify(random_unitary(3, get_rng(1))).isometric_order == 1
    out = classify(2.0 * np.eye(2), cap=3).to_dict()
    assert out['isometricOrder'] == 'none <= 3'
    assert out['expansive']
    assert out['concaveOrders'] == []
    with pytest.raises(AssertionError):
        classify(np.eye(2), cap=9)


@given(seeds, st.integers(min_value=1, max_value=3))
def test_classify_isometric_matrices(seed, s):
    T = isometric_matrix(get_rng(seed), 2 * s - 1, s)
    cl = classify(T, cap=6, K=8)
    assert cl.isometric_order == 2 * s - 1
    assert cl.higher_defects_vanish


def test_eigen_modulus_of_jordan_block():
    J = jordan_block(np.exp(0.3j), 3)
    rep = eigen_modulus_check(J, 5)
    assert rep.passed
    assert len(rep.details['eigenvalues']) == 3


def test_left_inverse():
    T = expansive_matrix(get_rng(3), 3)
    L = left_inverse(T)
    assert np.allclose(L @ T, np.eye(3))
    assert np.allclose(cauchy_dual(T), L.conj().T)
    assert max_abs(kernel_projection(T)) < 1e-10
    with pytest.raises(NotLeftInvertible):
        left_inverse(weighted_shift([1.0, 1.0], 2))


@given(seeds, st.integers(min_value=0, max_value=3), st.integers(min_value=1, max_value=4))
def test_power_defect_identity(seed, r, n):
    T = expansive_matrix(get_rng(seed), 3)
    assert power_defect_identity(T, r, n).passed


@given(seeds, st.integers(min_value=1, max_value=5))
def test_wandering_decomposition(seed, n):
    T = expansive_matrix(get_rng(seed), 3, 1.5)
    assert wandering_decomposition_check(T, n).passed


@given(seeds)
def test_projection_identities(seed):
    T = expansive_matrix(get_rng(seed), 4)
    assert all([r.passed for r in verify_projection_identities(T)])


@given(seeds)
def test_shimorin_forms_agree(seed):
    T = expansive_matrix(get_rng(seed), 3)
    rep = shimorin_check(T, K=16)
    assert rep.forms_residual < 1e-9
    assert rep.to_dict()['holds'] == rep.holds


def test_shimorin_model_check_runs():
    mt = random_tuple(get_rng(5), 3, 1)
    out = shimorin_model_check(mt, d=3)
    assert set(out.keys()) >= set(['holds', 'inequality', 'inequality_holds', 'constants_min_eig'])
    assert out['inequality_holds']


def test_wold_split():
    U = random_unitary(3, get_rng(2))
    rep = wold_split(U)
    assert rep.passed
    assert rep.unitary_dim == 3
    rep = wold_split(2.0 * np.eye(2))
    assert not rep.passed
    assert rep.failures[0].startswith(NotUnitaryOnHyperRange.__name__)
    with pytest.raises(NotLeftInvertible):
        wold_split(weighted_shift([1.0], 1))


def test_hyper_range_of_nilpotent():
    assert hyper_range(weighted_shift([1.0, 2.0], 2)).shape[1] == 0
    assert hyper_range(np.eye(3)).shape[1] == 3


def test_eigen_modulus_needs_isometry():
    with pytest.raises(PreconditionFailed):
        eigen_modulus_check(2.0 * np.eye(2), 2)


def test_hockey_stick():
    assert hockey_stick(5, 2) == 6
    with pytest.raises(BadRange):
        hockey_stick(3, 3)


@given(seeds)
def test_concave_growth(seed):
    T = isometric_matrix(get_rng(seed), 3, 2)
    assert concave_growth_check(T, 3, 8).passed
    with pytest.raises(PreconditionFailed):
        concave_growth_check(2.0 * np.eye(2), 2, 4)


def test_isometric_weighted_shift():
    w = isometric_shift_weights([0.5, 0.25], 20)
    rep = weighted_shift_equivalence(w, 3, 12)
    assert rep.passed
    assert rep.details['m_concave']
    with pytest.raises(TruncationTooShort):
        weighted_shift_equivalence(w, 3, 2)


def test_weighted_shift_equivalence_needs_concavity():
    w = [1.0, 1.0, 2.0] + [1.0] * 20
    with pytest.raises(PreconditionFailed):
        weighted_shift_equivalence(w, 4, 16)


def test_inequality_rows_for_expansive():
    T = expansive_matrix(get_rng(11), 3, 1.2)
    rep = inequality_check(T, 3, K=64)
    assert [r['r'] for r in rep.rows] == [1]
    assert [p['r'] for p in rep.psi] == [0, 1]


def test_inequality_series_without_convergence():
    # every term L*^k beta_2 L^k of the Jordan block equals beta_2
    rep = inequality_check(jordan_block(1.0, 2), 3, K=8)
    row = rep.rows[0]
    assert row['status'] == 'inconclusive'
    assert row['last_increment'] == pytest.approx(2.0)
    assert row['note'].startswith(SeriesNotConverged.__name__)
