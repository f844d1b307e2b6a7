import numpy as np
import pytest

from dslib.linalg import min_eig
from dslib.operators import classify
from dslib.corpus import DEFAULT_RECIPE, get_rng, random_psd, random_angles, random_trig, random_tuple
from dslib.corpus import isometric_matrix, expansive_matrix, isometric_shift_weights, isometric_shift
from dslib.corpus import builtin_corpus, tuple_corpus

RECIPE = {'seed': 3, 'ntriples': 8, 'ntuples': 4}


def test_builtin_corpus_is_reproducible():
    a = builtin_corpus(RECIPE)
    b = builtin_corpus(RECIPE)
    assert len(a) == 8
    for x, y in zip(a, b):
        assert x['n'] == y['n']
        assert np.array_equal(x['f'].coeffs, y['f'].coeffs)
        assert np.array_equal(x['mu'].moments(3), y['mu'].moments(3))
    assert [c['mu'].kind for c in a[:4]] == ['atomic', 'trig', 'atomic', 'trig']
    assert all([0 <= c['n'] <= DEFAULT_RECIPE['nmax'] for c in a])


def test_seed_changes_corpus():
    a = builtin_corpus(RECIPE)
    b = builtin_corpus(dict(RECIPE, seed=4))
    assert not all([np.array_equal(x['f'].coeffs, y['f'].coeffs) for x, y in zip(a, b)])


def test_tuple_corpus_bounds():
    out = tuple_corpus(RECIPE, dimE_max=2, m_max=3)
    assert len(out) == 4
    assert all([2 <= mt.m <= 3 and 1 <= mt.dimE <= 2 for mt in out])


def test_random_psd_and_angles():
    rng = get_rng(0)
    assert min_eig(random_psd(rng, 3, rank=1)) >= -1e-12
    th = random_angles(rng, 4, min_sep=0.5)
    gaps = np.diff(np.concatenate([th, [th[0] + 2.0 * np.pi]]))
    assert np.min(gaps) >= 0.5


def test_random_trig_density_is_psd():
    mu = random_trig(get_rng(1), 2, 3)
    w = mu.density_many(np.linspace(0.0, 2.0 * np.pi, 97))
    assert min([min_eig(x) for x in w]) >= -1e-10


def test_isometric_and_expansive_samples():
    rng = get_rng(2)
    assert classify(isometric_matrix(rng, 5), cap=6, K=8).isometric_order == 5
    assert classify(expansive_matrix(rng, 3), K=8).expansive
    with pytest.raises(AssertionError):
        isometric_matrix(rng, 2, 2)
    with pytest.raises(AssertionError):
        random_tuple(rng, 1)


def test_isometric_shift_weights():
    w = isometric_shift_weights([0.5, 0.25], 4)
    p = [1.0, 1.5, 2.25, 3.25, 4.5]
    assert np.allclose(w**2, np.array(p[1:]) / np.array(p[:-1]))
    T = isometric_shift([1.0], 3)
    assert T.shape == (4, 4)
    assert T[1, 0] == pytest.approx(np.sqrt(2.0))
    with pytest.raises(AssertionError):
        isometric_shift_weights([-1.0], 3)
