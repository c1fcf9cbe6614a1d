# -*- coding: utf-8 -*-
import json

import pandas as pd
import pytest

from conftest import BASELINE, PLAN
from gnssqlink.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


def read_table(filename):
    return pd.read_csv(filename, comment='#')


def test_budget(tmp_path) -> None:
    out = str(tmp_path / "budget.json")
    assert main(['budget', '--scenario', BASELINE, '--out', out]) == EXIT_OK
    with open(out) as report_file:
        report = json.load(report_file)
    ffdp = [b for b in report['budgets'] if b['model'] == 'ffdp']
    assert ffdp[0]['l_down_db'] == pytest.approx(62.01, abs=0.05)
    assert len(report['budgets']) == 2
    assert report['on_lateral_lobe']


def test_usage_errors(tmp_path) -> None:
    assert main(['budget']) == EXIT_USAGE
    assert main(['budget', '--scenario',
                 str(tmp_path / "missing.json")]) == EXIT_USAGE
    with open(BASELINE) as config_file:
        config = json.load(config_file)
    config['noise']['cosmic_hz'] = 1.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(config))
    assert main(['budget', '--scenario', str(bad)]) == EXIT_USAGE
    assert main(['simulate', '--scenario', BASELINE, '--duration-s', '0',
                 '--out', str(tmp_path / "tags.csv")]) == EXIT_USAGE


def test_missing_tags(tmp_path) -> None:
    assert main(['analyze', '--scenario', BASELINE, '--tags',
                 str(tmp_path / "missing.csv"), '--out',
                 str(tmp_path / "out")]) == EXIT_DATA


def test_simulate_is_reproducible(tmp_path) -> None:
    contents = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        assert main(['simulate', '--scenario', BASELINE, '--duration-s', '2',
                     '--seed', '9', '--out', str(out)]) == EXIT_OK
        contents.append(out.read_bytes())
    assert contents[0] == contents[1]


def test_simulate_and_analyze(tmp_path) -> None:
    tags = str(tmp_path / "tags.csv")
    out = tmp_path / "analysis"
    assert main(['simulate', '--scenario', BASELINE, '--duration-s', '30',
                 '--seed', '5', '--out', tags]) == EXIT_OK
    assert main(['analyze', '--scenario', BASELINE, '--tags', tags,
                 '--out', str(out)]) == EXIT_OK
    for name in ("intervals_ch0.csv", "histogram_ch0.csv",
                 "occupancy_ch0.csv", "summary.json"):
        assert (out / name).exists()
    with open(str(out / "intervals_ch0.csv")) as table_file:
        assert table_file.readline().startswith("# scenario_hash=")
    assert len(read_table(str(out / "intervals_ch0.csv"))) == 6
    with open(str(out / "summary.json")) as summary_file:
        summary = json.load(summary_file)
    assert summary['seed'] == 5
    channel = summary['channels'][0]
    assert channel['n_intervals'] == 6
    assert channel['r_det_hz'] == pytest.approx(58.0, rel=0.3)

    projection = str(tmp_path / "projection.json")
    assert main(['project', '--scenario', BASELINE, '--plan', PLAN,
                 '--summary', str(out / "summary.json"),
                 '--out', projection]) == EXIT_OK


def test_response(tmp_path) -> None:
    out = tmp_path / "response"
    assert main(['response', '--scenario', BASELINE, '--incidence-deg', '5',
                 '9', '--out', str(out)]) == EXIT_OK
    assert (out / "response_5deg.csv").exists()
    assert (out / "response_9deg.csv").exists()
    table = read_table(str(out / "peak_to_peak.csv"))
    assert list(table.incidence_deg) == [5.0, 9.0]
    assert 330.0 <= table.peak_to_peak_ps[1] <= 530.0
    assert table.span_ps[1] > table.span_ps[0]


def test_project(tmp_path) -> None:
    out = str(tmp_path / "projection.json")
    assert main(['project', '--scenario', BASELINE, '--plan', PLAN,
                 '--out', out]) == EXIT_OK
    with open(out) as report_file:
        report = json.load(report_file)
    assert report['baseline']['r_det_hz'] == pytest.approx(58.0, rel=0.02)
    assert 5e3 < report['projection']['r_det_hz'] < 5e4
    assert 100.0 < report['projection']['snr'] < 1000.0


def test_project_without_signal(tmp_path) -> None:
    summary = tmp_path / "summary.json"
    summary.write_text(json.dumps({'channels': [
        {'channel': 0, 'no_signal': True, 'r_det_hz': None, 'snr': None,
         'mu_sat': None}]}))
    assert main(['project', '--scenario', BASELINE, '--plan', PLAN,
                 '--summary', str(summary)]) == EXIT_DATA


def test_unwritable_output(tmp_path) -> None:
    out = str(tmp_path / "missing" / "budget.json")
    assert main(['budget', '--scenario', BASELINE, '--out', out]) == EXIT_USAGE
    tags = str(tmp_path / "missing" / "tags.csv")
    assert main(['simulate', '--scenario', BASELINE, '--duration-s', '1',
                 '--out', tags]) == EXIT_USAGE
