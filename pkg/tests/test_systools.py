import os
import pytest

from dslib.systools import check_dir, load_config, get_config, write_atomic


def test_packaged_defaults():
    config = get_config()
    assert config['tolerances']['exact'] == 1e-8
    assert config['recovery']['degree'] == 16
    assert config['corpus']['seed'] == 20261019


def test_user_file_and_overrides(tmp_path):
    ifile = tmp_path / 'user.yaml'
    ifile.write_text('tolerances:\n  exact: 1.0e-6\ncorpus:\n  ntriples: 5\n')
    config = get_config(str(ifile), overrides={'corpus': {'seed': 1}})
    assert config['tolerances']['exact'] == 1e-6
    assert config['tolerances']['quadrature'] == 1e-3
    assert config['corpus']['ntriples'] == 5
    assert config['corpus']['seed'] == 1


def test_empty_and_missing_config(tmp_path):
    ifile = tmp_path / 'empty.yaml'
    ifile.write_text('')
    assert load_config(str(ifile)) == {}
    with pytest.raises(AssertionError):
        load_config(str(tmp_path / 'none.yaml'))


def test_write_atomic(tmp_path):
    ofile = str(tmp_path / 'a' / 'b' / 'out.txt')
    write_atomic(ofile, 'one\n')
    write_atomic(ofile, 'two\n')
    with open(ofile) as f:
        assert f.read() == 'two\n'
    assert [x for x in os.listdir(os.path.dirname(ofile)) if x.startswith('.tmp_')] == []
    check_dir(ofile)
