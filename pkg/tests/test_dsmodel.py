import numpy as np
import pytest

from dslib import DSModel, MeasureTuple, lebesgue, monomial, from_scalar, make_atomic
from dslib.corpus import get_rng, random_unitary_matrix


def test_lebesgue_model():
    model = DSModel([lebesgue(1)])
    assert model.m == 2
    assert model.dimE == 1
    assert model.norm_sq(monomial(2, [1.0])) == pytest.approx(3.0)
    assert np.allclose(model.gram(2).matrix, np.diag([1.0, 2.0, 3.0]))
    assert model.defect_form(1, monomial(3, [1.0])) == pytest.approx(1.0)
    assert model.wandering_span_dim(3) == 4


def test_model_operations():
    mu = make_atomic([(0.2, np.diag([1.0, 0.5])), (2.5, np.eye(2))])
    model = DSModel(MeasureTuple([mu, mu]))
    f = from_scalar([1.0, -1.0, 0.5], [1.0, 1j])
    assert all([r.passed for r in model.identities(f)])
    val, res = model.inequality_form(1, f)
    assert res < 1e-8
    seqs = model.recover(8)
    assert len(seqs) == 2
    assert seqs[0].maxOrder == 5
    assert np.allclose(seqs[0].moment(1), mu.moment(1), atol=1e-8)
    assert model.roundtrip(8).passed
    assert model.uniqueness(random_unitary_matrix(get_rng(0), 2), 8).passed
    vals, ok = model.dilation_convergence(f, [0.5, 1.0])
    assert vals[-1] == 0.0
    assert model.inner(f, f).real == pytest.approx(model.norm_sq(f))


def test_save_and_load(tmp_path):
    model = DSModel([lebesgue(2)])
    ofile = str(tmp_path / 'tuple.json')
    model.save(ofile)
    back = DSModel(ifile=ofile)
    assert back.m == 2
    assert back.dimE == 2
    assert np.allclose(back.gram(3).matrix, model.gram(3).matrix)


def test_empty_model():
    with pytest.raises(AssertionError):
        DSModel().m
