import json
import numpy as np
import pytest

from dslib.errors import ParseError, NonPSDWeight
from dslib.measures import make_atomic, make_trig
from dslib.polynomials import from_scalar
from dslib.spaces import MeasureTuple
from dslib.dirichlet import make_report
from dslib.dsl_load import parse_complex, parse_measure, parse_polynomial, parse_tuple, parse_operator
from dslib.dsl_load import parse_moments, parse_scenario, read_document, load_measure, load_tuple
from dslib.dsl_save import to_json, measure_to_dict, polynomial_to_dict, tuple_to_dict, operator_to_dict
from dslib.dsl_save import moments_to_dict, report_lines, reports_table, save_json, save_lines

ATOMIC = {'dimE': 1, 'kind': 'atomic', 'atoms': [{'angle': 0.0, 'weight': [[1.0]]},
                                                 {'angle': 3.0, 'weight': [[[0.5, 0.0]]]}]}


def test_parse_complex():
    assert parse_complex(2, 'x') == 2.0
    assert parse_complex([1.0, -2.0], 'x') == 1.0 - 2.0j
    for bad in [True, 'a', [1.0], [1.0, 2.0, 3.0]]:
        with pytest.raises(ParseError):
            parse_complex(bad, 'x')


def test_parse_atomic_measure():
    mu = parse_measure(ATOMIC)
    assert mu.natoms == 2
    assert mu.moment(0)[0, 0] == pytest.approx(1.5)


def test_unknown_keys_are_named():
    with pytest.raises(ParseError, match="unknown key 'atom'"):
        parse_measure({'dimE': 1, 'kind': 'atomic', 'atom': []})
    with pytest.raises(ParseError, match="unknown key 'coeffs'"):
        parse_measure(dict(ATOMIC, coeffs={}))
    with pytest.raises(ParseError, match="missing key 'kind'"):
        parse_measure({'dimE': 1})
    with pytest.raises(ParseError):
        parse_measure(dict(ATOMIC, kind='smooth'))


def test_parse_validates_weights():
    with pytest.raises(NonPSDWeight):
        parse_measure({'dimE': 1, 'kind': 'atomic', 'atoms': [{'angle': 0.0, 'weight': [[-1.0]]}]})


def test_parse_trig_measure():
    mu = parse_measure({'dimE': 1, 'kind': 'trig', 'coeffs': {'0': [[1.0]], '1': [[[0.0, 0.25]]]}})
    assert mu.moment(-1)[0, 0] == 0.25j
    assert mu.moment(1)[0, 0] == -0.25j
    with pytest.raises(ParseError):
        parse_measure({'dimE': 1, 'kind': 'trig', 'coeffs': {'x': [[1.0]]}})


def test_parse_polynomial_and_tuple():
    f = parse_polynomial({'dimE': 2, 'coeffs': [[1, 0], [[0, 1], 2]]})
    assert f.coeff(1)[0] == 1j
    with pytest.raises(ParseError):
        parse_polynomial({'dimE': 2, 'coeffs': [[1]]})
    mt = parse_tuple({'m': 3, 'measures': [ATOMIC, ATOMIC]})
    assert mt.m == 3
    with pytest.raises(ParseError, match='m-1'):
        parse_tuple({'m': 3, 'measures': [ATOMIC]})


def test_parse_operator():
    T, kernel = parse_operator({'dim': 2, 'matrix': [[0, 0], [1, 0]], 'kernel': [[1, 0]]})
    assert T[1, 0] == 1.0
    assert kernel.shape == (2, 1)
    T, kernel = parse_operator({'dim': 2, 'matrix': [[1, 0], [0, 1]]})
    assert kernel is None
    with pytest.raises(ParseError):
        parse_operator({'dim': 3, 'matrix': [[1, 0], [0, 1]]})


def test_parse_moments():
    seq = parse_moments({'dimE': 1, 'moments': [[[0.5]], [[1.0]], [[0.5]]]})
    assert seq.maxOrder == 1
    with pytest.raises(ParseError):
        parse_moments({'dimE': 1, 'moments': [[[0.5]], [[1.0]]]})


def test_parse_scenario():
    scn = parse_scenario({'kind': 'recover', 'tol': '1e-8', 'degree': 12, 'inputs': {'tuple': 't.json'}})
    assert scn['tol'] == 1e-8
    assert scn['inputs'] == {'tuple': 't.json'}
    with pytest.raises(ParseError):
        parse_scenario({'kind': 'plot'})
    with pytest.raises(ParseError):
        parse_scenario({'kind': 'gram', 'degree': 2.5})
    with pytest.raises(ParseError, match="unknown key 'file'"):
        parse_scenario({'kind': 'gram', 'inputs': {'file': 'x'}})


def test_read_document(tmp_path, write_doc):
    with pytest.raises(FileNotFoundError):
        read_document(str(tmp_path / 'missing.json'))
    with pytest.raises(ParseError):
        read_document(write_doc('bad.json', '{"dimE": '))
    assert load_measure(write_doc('mu.json', ATOMIC)).natoms == 2
    yfile = tmp_path / 'scn.yaml'
    yfile.write_text('kind: gram\ndegree: 3\n')
    assert read_document(str(yfile)) == {'kind': 'gram', 'degree': 3}


def test_written_documents_parse_back(tmp_path):
    mu = make_trig({0: np.eye(2), 1: 0.25 * np.eye(2)})
    nu = make_atomic([(1.0, np.diag([1.0, 2.0]))])
    mt = MeasureTuple([mu, nu])
    ofile = str(tmp_path / 'out' / 'tuple.json')
    save_json(ofile, tuple_to_dict(mt))
    back = load_tuple(ofile)
    for j in range(-2, 3):
        assert np.allclose(back.measure(1).moment(j), mu.moment(j))
        assert np.allclose(back.measure(2).moment(j), nu.moment(j))
    doc = json.loads(to_json(measure_to_dict(nu)))
    assert doc['atoms'][0]['weight'][1][1] == [2.0, 0.0]
    assert polynomial_to_dict(from_scalar([1.0, 1j], [1.0]))['coeffs'] == [[[1.0, 0.0]], [[0.0, 1.0]]]
    assert operator_to_dict(np.eye(2), np.eye(2)[:, :1])['kernel'] == [[[1.0, 0.0], [0.0, 0.0]]]


def test_json_keys_sorted():
    assert to_json({'b': 1, 'a': np.float64(2.0), 'c': np.bool_(True)}) == '{"a": 2.0, "b": 1, "c": true}'
    assert to_json(1.0 + 2.0j) == '[1.0, 2.0]'


def test_report_streams(tmp_path):
    rows = [make_report('difference', 0, 1e-12, 1e-8), make_report('difference', 1, 1.0, 1e-8)]
    text = report_lines(rows)
    lines = text.splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])['pass'] is False
    table = reports_table(rows, color=False)
    assert 'PASS' in table and 'FAIL' in table
    assert '\033[' not in table
    assert '\033[32m' in reports_table(rows, color=True)
    assert reports_table([]) == '(no reports)\n'
    ofile = tmp_path / 'r.jsonl'
    save_lines(str(ofile), rows)
    assert ofile.read_text() == text


def test_moments_to_dict():
    seq = parse_moments({'dimE': 1, 'moments': [[[0.5]], [[1.0]], [[0.5]]]})
    assert moments_to_dict(seq)['moments'][1] == [[[1.0, 0.0]]]
