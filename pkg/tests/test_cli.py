import json
import subprocess
import sys

import pytest

from gforge.cli import main

DRINKER = 'ex x. (P(x) -> all y. P(y))'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ord_commands(capsys):
    assert run(capsys, 'ord', 'cmp', 'w+1', 'w')[:2] == (0, 'GT\n')
    assert run(capsys, 'ord', 'add', '1', 'w')[1] == 'w\n'
    assert run(capsys, 'ord', 'omega', '0')[1] == '1\n'
    assert run(capsys, 'ord', 'enum', '2')[1].split('\n')[:4] == ['0', '1', '1+1', 'w']
    assert run(capsys, 'ord', 'validate', '<<>>')[1] == 'valid\n'


def test_parse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(['ord', 'cmp', 'w^', 'w'])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['tree', 'embed', '(o', 'o'])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(['nonsense'])
    assert e.value.code == 2


def test_domain_errors_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, 'check', str(tmp_path / 'missing.json'))
    assert code == 1 and err.startswith('error:')
    bad = tmp_path / 'bad.json'
    bad.write_text('not json')
    assert run(capsys, 'herbrand', str(bad))[0] == 1


def test_prove_found_and_exhausted(capsys, tmp_path):
    code, out, _ = run(capsys, 'prove', DRINKER)
    assert code == 0
    assert out.splitlines()[0] == 'found' and 'cut-free: true' in out and 'check: ok' in out
    code, out, _ = run(capsys, 'prove', 'all x. P(x)', '--fuel', '50')
    assert code == 0 and out.splitlines()[0] == 'exhausted'
    assert out.rstrip().endswith('formula in the countermodel: false')


def test_prove_emit_check_herbrand(capsys, tmp_path):
    path = tmp_path / 'd.json'
    run(capsys, 'prove', 'ex x. (P(x) -> P(f(x)))', '--emit', str(path))
    assert run(capsys, 'check', str(path))[1] == 'ok\n'
    out = run(capsys, 'herbrand', str(path))[1]
    assert 'term: x' in out and out.splitlines()[-1].startswith('disjunction:')


def test_json_envelope(capsys):
    code, out, _ = run(capsys, '--json', 'ord', 'succ', 'w')
    assert code == 0 and json.loads(out) == {'ok': True, 'result': 'w+1'}
    out = run(capsys, '--json', 'prove', 'all x. P(x)', '--fuel', '5')[1]
    body = json.loads(out)['result']
    assert body['result'] == 'exhausted' and body['value'] is False


def test_formula_and_tree_commands(capsys):
    assert run(capsys, 'fm', 'rank', 'all x. X(x)')[1] == '1\n'
    assert run(capsys, 'fm', 'negate', 'all x. X(x)')[1] == 'ex x. !X(x)\n'
    assert run(capsys, 'tree', 'embed', 'o', '(o,o)')[1] == 'true\n'
    assert run(capsys, 'tree', 'embed', '((o,o),o)', '(o,(o,o))')[1] == 'false\n'
    assert run(capsys, 'tree', 'uembed', '((o,o),o)', '(o,(o,o))')[1] == 'true\n'


def test_kruskal_commands(capsys):
    out = run(capsys, 'kruskal', 'longest-bad', '--nodes', '3')[1]
    assert out == 'length: 2\nwitness: (o,o) o\n'
    out = run(capsys, 'kruskal', 'wpo', '--height', '2')[1]
    assert 'trees: 5' in out and 'transitive: yes' in out


def test_inf_commands(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, 'inf', 'ti', '26', '--target', '2')
    assert code == 0 and 'certificate: ok' in out
    recipe = tmp_path / 'r.rcp'
    recipe.write_text('; progression\n(prog 26)\n')
    monkeypatch.setenv('GFORGE_PROBE_BUDGET', '4')
    out = run(capsys, 'inf', 'check', str(recipe))[1]
    assert 'probe: budget 4' in out and out.rstrip().endswith('check: ok')
    monkeypatch.setenv('GFORGE_PROBE_BUDGET', 'lots')
    assert run(capsys, 'inf', 'check', str(recipe))[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, '-m', 'gforge', 'ord', 'cmp', 'w', 'w+1'],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == 'LT\n'
