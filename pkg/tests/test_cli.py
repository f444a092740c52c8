#!/usr/bin/env python
"""
Tests for the ``ensync`` command line.
"""
import numpy as np
import pandas as pd
import pytest

from ensync.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main
from ensync.formats import PerformanceFile, read_gains, read_truth


def simulate_file(tmp_path, *extra, name='perf.csv'):
    out = str(tmp_path / name)
    code = main(['simulate', '--K', '4', '--N', '46', '--base-T', '500', '--seed', '7',
                 '--out', out] + list(extra))
    assert code == EXIT_OK
    return out


def test_simulate_deadpan(tmp_path):
    truth = str(tmp_path / 'truth.csv')
    out = simulate_file(tmp_path, '--condition', 'deadpan', '--truth', truth)
    perf = PerformanceFile.read(out)
    assert perf.onsets.shape == (47, 4)
    assert perf.data.N == 46
    alpha, beta = read_truth(truth, 4)
    assert alpha.shape == (46, 12)
    np.testing.assert_array_equal(alpha, 0.25)


def test_simulate_is_reproducible(tmp_path):
    a = simulate_file(tmp_path, '--condition', 'normal', name='a.csv')
    b = simulate_file(tmp_path, '--condition', 'normal', name='b.csv')
    with open(a, 'rb') as fa, open(b, 'rb') as fb:
        assert fa.read() == fb.read()


def test_simulate_speed(tmp_path):
    out = simulate_file(tmp_path, '--condition', 'speed', '--leader', '2')
    iois = PerformanceFile.read(out).data.iois
    # the leader plays fastest in the middle of the performance
    assert np.argmin(iois[:, 1]) > 15


@pytest.mark.parametrize('args', [
    ['simulate', '--condition', 'speed', '--out', 'x.csv'],
    ['simulate', '--condition', 'speed', '--leader', '9', '--out', 'x.csv'],
    ['simulate', '--condition', 'deadpan', '--leader', '1', '--out', 'x.csv'],
    ['simulate', '--K', '0', '--out', 'x.csv'],
    ['simulate', '--condition', 'allegro', '--out', 'x.csv'],
    ['simulate'],
    ['filter', '--input', 'x.csv'],
    [],
])
def test_usage_errors(tmp_path, monkeypatch, args):
    monkeypatch.chdir(tmp_path)
    assert main(args) == EXIT_USAGE
    assert not (tmp_path / 'x.csv').exists()


def test_simulation_instability(tmp_path, capsys):
    out = str(tmp_path / 'perf.csv')
    code = main(['simulate', '--K', '2', '--N', '46', '--alpha', '1.5', '--sigma-T', '40',
                 '--seed', '1', '--out', out])
    assert code == EXIT_NUMERICAL
    assert 'step' in capsys.readouterr().err


def test_filter_and_smooth(tmp_path, capsys):
    perf = simulate_file(tmp_path, '--condition', 'deadpan')
    filtered = str(tmp_path / 'filtered.csv')
    smoothed = str(tmp_path / 'smoothed.csv')
    capsys.readouterr()

    assert main(['filter', '--input', perf, '--out', filtered]) == EXIT_OK
    summary = capsys.readouterr().out
    for key in ('N=46', 'K=4', 'mode=filtered', 'runtime_ms=', 'loglik='):
        assert key in summary

    assert main(['smooth', '--input', perf, '--out', smoothed]) == EXIT_OK
    assert 'mode=smoothed' in capsys.readouterr().out

    f = read_gains(filtered)
    s = read_gains(smoothed)
    assert len(f) == len(s) == 46 * 12
    assert set(f['mode']) == {'filtered'}
    assert set(s['mode']) == {'smoothed'}
    last_f = f[f['n'] == 46]
    last_s = s[s['n'] == 46]
    np.testing.assert_allclose(last_s['alpha_mean'].to_numpy(), last_f['alpha_mean'].to_numpy(),
                               rtol=0, atol=1e-9)


def test_onset_and_ioi_inputs_agree(tmp_path):
    perf = simulate_file(tmp_path, '--condition', 'normal')
    data = PerformanceFile.read(perf).data
    ioi_path = str(tmp_path / 'iois.csv')
    PerformanceFile(data, mode='ioi', units='s').write(ioi_path)

    a = str(tmp_path / 'a.csv')
    b = str(tmp_path / 'b.csv')
    assert main(['smooth', '--input', perf, '--out', a]) == EXIT_OK
    assert main(['smooth', '--input', ioi_path, '--out', b]) == EXIT_OK
    ga, gb = read_gains(a), read_gains(b)
    np.testing.assert_allclose(ga['alpha_mean'], gb['alpha_mean'], rtol=1e-9, atol=1e-12)


def test_config_and_dump(tmp_path):
    perf = simulate_file(tmp_path, '--condition', 'deadpan')
    cfg = tmp_path / 'quartet.cfg'
    cfg.write_text('sigma_T2 = 300\nalpha_init = 0.3\n')
    dumped = str(tmp_path / 'effective.cfg')
    out = str(tmp_path / 'gains.csv')
    code = main(['filter', '--input', perf, '--config', str(cfg), '--out', out,
                 '--dump-config', dumped])
    assert code == EXIT_OK
    with open(dumped) as f:
        text = f.read()
    assert 'sigma_T2 = 300' in text
    assert 'alpha_init = 0.29999999999999999' in text


@pytest.mark.parametrize('content', [
    'n,onset_p1,onset_p2\n0,0,0\n1,500\n',
    'hello\n',
    'n,onset_p1\n0,10\n1,5\n',
])
def test_malformed_input(tmp_path, capsys, content):
    bad = tmp_path / 'bad.csv'
    bad.write_text(content)
    code = main(['smooth', '--input', str(bad), '--out', str(tmp_path / 'g.csv')])
    assert code == EXIT_USAGE
    assert 'ensync:' in capsys.readouterr().err


def test_missing_input(tmp_path):
    code = main(['filter', '--input', str(tmp_path / 'nope.csv'),
                 '--out', str(tmp_path / 'g.csv')])
    assert code == EXIT_USAGE


def test_bad_config(tmp_path):
    perf = simulate_file(tmp_path, '--condition', 'deadpan')
    cfg = tmp_path / 'bad.cfg'
    cfg.write_text('tempo = 120\n')
    code = main(['filter', '--input', perf, '--config', str(cfg),
                 '--out', str(tmp_path / 'g.csv')])
    assert code == EXIT_USAGE


def test_recover(tmp_path, capsys):
    report = str(tmp_path / 'report.csv')
    code = main(['recover', '--condition', 'speed', '--leader', '2', '--K', '4', '--N', '46',
                 '--seed', '3', '--report', report])
    assert code == EXIT_OK
    assert 'window=16-46' in capsys.readouterr().out
    with open(report) as f:
        assert f.readline().startswith('# condition=speed')
    df = pd.read_csv(report, comment='#')
    assert list(df.columns) == ['i', 'j', 'mae_alpha', 'slope_alpha']
    assert len(df) == 12
    assert np.all(np.isfinite(df['slope_alpha']))


def test_bench(capsys):
    assert main(['bench', '--K', '2', '--N', '10', '--repeat', '3']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'median_ms=' in out
    assert 'repeat=3' in out
