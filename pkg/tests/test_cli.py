"""The command line front-end: reports, exit codes and determinism."""

import json
import pathlib

import pytest
from click.testing import CliRunner

from mforge.cli import main

MANIFESTS = pathlib.Path(__file__).resolve().parent.parent / 'manifests'
T_DIVISION = str(MANIFESTS / 't_division.json')
CARLITZ = str(MANIFESTS / 'carlitz.json')
DRINFELD = str(MANIFESTS / 'drinfeld_rank2.json')


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def report(*args):
    res = invoke(*args)
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_rank_report():
    rep = report('rank', '--manifest', T_DIVISION)
    assert rep['command'] == 'rank'
    assert rep['result']['rank'] == 1 and rep['result']['dual_rank'] == 1
    assert rep['result']['f'] == 't'
    assert rep['result']['excluded_primes_deg_le_2'] == ['t']
    assert rep['all_certificates_passed']
    assert {c['name'] for c in rep['certificates']} >= {'diagonalization', 'rank_cross_check'}


def test_prank_report():
    rep = report('prank', '--manifest', T_DIVISION, '--prime', 't', '--prime', 't-1',
                 '--prime', 't+1', '--prime', 't^2+1')
    ranks = {row['prime']: row['p_rank'] for row in rep['result']['primes']}
    assert ranks == {'t': 0, 't+2': 1, 't+1': 1, 't^2+1': 1}
    assert rep['all_certificates_passed']


def test_diagonalize_report():
    rep = report('diagonalize', '--manifest', T_DIVISION)
    assert rep['all_certificates_passed']
    # the tau-degree sum over L(t) is the motive rank
    assert sum(rep['result']['degrees']) == 1


def test_special_functions_report():
    rep = report('special-functions', '--manifest', CARLITZ, '--ramification', '2')
    assert rep['result']['special_function']['certified']
    assert 'carlitz_period' in rep['result']
    assert rep['all_certificates_passed']
    assert rep['precision_floor_log'] is not None


def test_torsion_report():
    rep = report('torsion', '--manifest', CARLITZ, '--prime', 't-1', '--n', '2',
                 '--ramification', '2')
    assert len(rep['result']['rows']) == 3
    assert rep['all_certificates_passed']


def test_trivialize_reports():
    rep = report('trivialize', '--manifest', CARLITZ, '--prime', 't-1', '--n', '2',
                 '--ramification', '2')
    assert rep['all_certificates_passed']
    assert rep['result']['invariant_basis']['certified']
    rep = report('trivialize', '--manifest', DRINFELD, '--prime', 't-1', '--u-prec', '160')
    assert rep['all_certificates_passed']
    assert rep['result']['branches'] == [0, 2]


def test_output_file_and_summary(tmp_path):
    out = tmp_path / 'rank.json'
    res = invoke('rank', '--manifest', T_DIVISION, '--out', str(out))
    assert res.exit_code == 0
    assert res.output.startswith('rank: rank 1')
    assert json.loads(out.read_text())['result']['rank'] == 1


def test_reports_are_deterministic():
    args = ('torsion', '--manifest', CARLITZ, '--prime', 't^2+1', '--n', '1')
    first = invoke(*args)
    second = invoke(*args)
    assert first.exit_code == 0
    assert first.output == second.output


@pytest.mark.parametrize('args', [
    ('prank', '--manifest', T_DIVISION, '--prime', 't^2-1'),
    ('torsion', '--manifest', T_DIVISION),
    ('torsion', '--manifest', CARLITZ, '--branch', '7'),
    ('rank', '--manifest', CARLITZ, '--u-prec', '0'),
])
def test_input_errors_exit_2(args):
    res = invoke(*args)
    assert res.exit_code == 2


def test_malformed_manifest_exits_2(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"q": 3, "d": 1, "phi_t": [[["th"]], [["0"]]]}')
    assert invoke('rank', '--manifest', str(bad)).exit_code == 2
    bad.write_text('{')
    assert invoke('rank', '--manifest', str(bad)).exit_code == 2


def test_precision_failure_exits_4():
    res = invoke('torsion', '--manifest', CARLITZ, '--n', '3', '--u-prec', '8')
    assert res.exit_code == 4
    assert '--u-prec 16' in res.output


def test_help_lists_commands():
    res = invoke('--help')
    assert res.exit_code == 0
    for name in ('rank', 'prank', 'diagonalize', 'special-functions', 'torsion', 'trivialize'):
        assert name in res.output
