import json
import numpy as np
import pytest

from dslib.cli import main, EXIT_PASS, EXIT_FAIL, EXIT_ERROR
from dslib.measures import make_trig, lebesgue
from dslib.polynomials import from_scalar
from dslib.spaces import MeasureTuple
from dslib.operators import jordan_block, weighted_shift, random_unitary
from dslib.corpus import get_rng, isometric_shift
from dslib.dsl_save import measure_to_dict, polynomial_to_dict, tuple_to_dict, operator_to_dict


@pytest.fixture
def files(write_doc):
    mu = make_trig({0: [[1.0]], 1: [[0.25]]})
    alternating = [2.0 if k % 2 == 0 else 1.0 for k in range(24)]
    return {
        'measure': write_doc('mu.json', measure_to_dict(mu)),
        'polynomial': write_doc('f.json', polynomial_to_dict(from_scalar([1.0, -0.5, 0.25, 2.0], [1.0]))),
        'tuple': write_doc('tuple.json', tuple_to_dict(MeasureTuple([mu, lebesgue(1)]))),
        'lebesgue': write_doc('sigma.json', tuple_to_dict(MeasureTuple([lebesgue(1)]))),
        'jordan': write_doc('jordan.json', operator_to_dict(jordan_block(1.0, 2))),
        'double': write_doc('double.json', operator_to_dict(2.0 * np.eye(2))),
        'unitary': write_doc('unitary.json', operator_to_dict(random_unitary(3, get_rng(0)))),
        'shift': write_doc('shift.json', operator_to_dict(isometric_shift([0.5, 0.25], 24))),
        'alternating': write_doc('alt.json', operator_to_dict(weighted_shift(alternating, 24))),
        'bad': write_doc('bad.json', {'dimE': 2, 'kind': 'atomic',
                                      'atoms': [{'angle': 0.0, 'weight': [[1, 2], [0, 1]]}]}),
    }


def _lines(text):
    return [json.loads(x) for x in text.splitlines()]


def test_verify_single_case(files, capsys):
    code = main(['verify', '--measure', files['measure'], '--polynomial', files['polynomial'], '--order', '3'])
    rows = _lines(capsys.readouterr().out)
    assert code == EXIT_PASS
    assert all([r['pass'] for r in rows])
    names = set([r['identity'] for r in rows])
    assert set(['difference', 'l_contractivity', 'dilation_contractivity', 'multiplier_bound']) <= names


def test_verify_builtin_corpus_is_deterministic(small_config, tmp_path, capsys):
    out1, out2 = str(tmp_path / 'a.jsonl'), str(tmp_path / 'b.jsonl')
    assert main(['identities', '--config', small_config, '--out', out1]) == EXIT_PASS
    assert main(['identities', '--config', small_config, '--out', out2]) == EXIT_PASS
    with open(out1, 'rb') as f1, open(out2, 'rb') as f2:
        text = f1.read()
        assert text == f2.read()
    rows = _lines(text.decode())
    assert set([r['case'] for r in rows if 'case' in r]) == set(range(6))
    assert set([r['tuple'] for r in rows if 'tuple' in r]) == set(range(3))
    assert all([r['seed'] == 7 for r in rows])
    assert capsys.readouterr().out == ''


def test_verify_seed_override(small_config, capsys):
    assert main(['verify', '--config', small_config, '--seed', '11']) == EXIT_PASS
    assert all([r['seed'] == 11 for r in _lines(capsys.readouterr().out)])


def test_verify_tiny_tolerance_fails(small_config, capsys):
    assert main(['verify', '--config', small_config, '--tol', '1e-20']) == EXIT_FAIL
    rows = _lines(capsys.readouterr().out)
    assert not all([r['pass'] for r in rows])


def _corpus_case(n):
    mu = make_trig({0: [[1.0]], 1: [[0.25]]})
    return {'measure': measure_to_dict(mu), 'polynomial': polynomial_to_dict(from_scalar([1.0, 2.0, -1.0], [1.0])),
            'n': n}


def test_verify_corpus_file(small_config, write_doc, capsys):
    corpus = write_doc('corpus.json', [_corpus_case(1), _corpus_case(3)])
    code = main(['verify', '--config', small_config, '--corpus', corpus])
    rows = _lines(capsys.readouterr().out)
    assert code == EXIT_PASS
    assert set([r['case'] for r in rows if 'case' in r]) == set([0, 1])


@pytest.mark.parametrize('n', ['two', 2.7])
def test_verify_corpus_file_bad_order(small_config, write_doc, capsys, n):
    corpus = write_doc('corpus.json', [_corpus_case(n)])
    code = main(['verify', '--config', small_config, '--corpus', corpus])
    err = capsys.readouterr().err
    assert code == EXIT_ERROR
    assert 'ParseError' in err
    assert "key 'n'" in err


def test_non_hermitian_weight(files, capsys):
    code = main(['verify', '--measure', files['bad'], '--polynomial', files['polynomial']])
    err = capsys.readouterr().err
    assert code == EXIT_ERROR
    assert 'NonHermitianWeight' in err


def test_missing_file(tmp_path, capsys):
    code = main(['classify', '--operator', str(tmp_path / 'none.json')])
    assert code == EXIT_ERROR
    assert 'FileNotFoundError' in capsys.readouterr().err


def test_classify(files, capsys):
    assert main(['classify', '--operator', files['jordan']]) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)['isometricOrder'] == 3
    assert main(['classify', '--operator', files['unitary']]) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)['isometricOrder'] == 1
    assert main(['classify', '--operator', files['double'], '--cap', '3']) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)['isometricOrder'] == 'none <= 3'


def test_gram(files, capsys):
    assert main(['gram', '--tuple', files['lebesgue'], '--degree', '2']) == EXIT_PASS
    doc = json.loads(capsys.readouterr().out)
    assert doc['ordering'] == 'k-major'
    assert np.allclose(np.array(doc['matrix'])[:, :, 0], np.diag([1.0, 2.0, 3.0]))


def test_recover_tuple(files, capsys):
    assert main(['recover', '--tuple', files['tuple']]) == EXIT_PASS
    doc = json.loads(capsys.readouterr().out)
    assert doc['pass']
    assert doc['m'] == 3
    assert doc['S'] == 13
    assert doc['feasible'] == [True, True]


def test_recover_isometric_shift(files, capsys):
    assert main(['roundtrip', '--operator', files['shift'], '--m', '3']) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)['pass']


def test_recover_out_of_class(files, capsys):
    assert main(['recover', '--operator', files['alternating'], '--m', '2']) == EXIT_FAIL
    doc = json.loads(capsys.readouterr().out)
    assert not doc['pass']
    assert len(doc['diagnostics']) > 0


def test_recover_needs_order(files, capsys):
    assert main(['recover', '--operator', files['shift']]) == EXIT_ERROR
    assert "key 'm' is required" in capsys.readouterr().err


def test_wold(files, capsys):
    assert main(['wold', '--operator', files['unitary']]) == EXIT_PASS
    assert json.loads(capsys.readouterr().out)['unitaryDim'] == 3
    assert main(['wold', '--operator', files['double']]) == EXIT_FAIL


def test_quadrature(files, capsys):
    code = main(['quadrature', '--measure', files['measure'], '--polynomial', files['polynomial'], '--order', '1'])
    rows = _lines(capsys.readouterr().out)
    assert code == EXIT_PASS
    assert set([r['identity'] for r in rows]) == set(['refined_integral', 'refined_difference'])
    assert set([r['R'] for r in rows]) == set([0.5, 0.9])


def test_text_output(files, capsys):
    main(['classify', '--operator', files['jordan'], '--output', 'text'])
    assert 'isometricOrder' in capsys.readouterr().out
    main(['verify', '--measure', files['measure'], '--polynomial', files['polynomial'], '--order', '1',
          '--output', 'text'])
    assert 'PASS' in capsys.readouterr().out


def test_run_scenarios(files, tmp_path, capsys):
    s1 = tmp_path / 'classify.yaml'
    s1.write_text('kind: classify\ninputs:\n  operator: {}\n'.format(files['jordan']))
    s2 = tmp_path / 'gram.yaml'
    s2.write_text('kind: gram\ndegree: 1\ninputs:\n  tuple: {}\n'.format(files['lebesgue']))
    assert main(['run', str(s1), str(s2), '--jobs', '2']) == EXIT_PASS
    out = capsys.readouterr().out
    assert '"isometricOrder": 3' in out
    assert '"ordering": "k-major"' in out


def test_bad_scenario(tmp_path, capsys):
    s = tmp_path / 'bad.yaml'
    s.write_text('kind: plot\n')
    assert main(['run', str(s)]) == EXIT_ERROR
    assert 'ParseError' in capsys.readouterr().err
