# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from scipy.stats import kstest

from conftest import background_simulator, signal_simulator
from gnssqlink.analysis import (Histogram, IntervalStats, ResidualSet,
                                estimate_pass_summary, filter_intervals,
                                fit_decay_half_life, interval_stats,
                                period_occupancy, residuals, windowed_counts,
                                wrap_residuals)
from gnssqlink.ccr_response import peak_to_peak
from gnssqlink.constants import PS_PER_S
from gnssqlink.exceptions import DataError, UsageError
from gnssqlink.protocol import effective_duty_cycle
from gnssqlink.simulator import SIGNAL, simulate_pass
from gnssqlink.tags import TagStream

PERIOD = 10000


def uniform_residuals(n, seed, duration=60 * PS_PER_S):
    rng = np.random.default_rng(seed)
    times = np.sort(rng.integers(0, duration, n))
    return ResidualSet(rng.integers(-PERIOD // 2 + 1, PERIOD // 2 + 1, n),
                       times, PERIOD, duration=duration)


def pass_statistics(scenario, stream):
    params = scenario.analysis
    arrivals = scenario.arrivals()
    rs = residuals(stream, arrivals)
    stats = interval_stats(rs, arrivals, params.interval, params.window,
                           params.duty_cycle, params.exclusion,
                           params.threshold)
    selected = filter_intervals(stats, params.threshold)
    summary = estimate_pass_summary(selected, scenario.budget(),
                                    scenario.rep_rate)
    return rs, stats, selected, summary


def test_wrap_residuals() -> None:
    delays = [0, PERIOD, 5000, -5000, 5001, -4999, 3 * PERIOD + 17]
    assert wrap_residuals(delays, PERIOD).tolist() == [0, 0, 5000, 5000,
                                                       -4999, -4999, 17]


def test_residuals_against_references() -> None:
    t_ref = np.array([1000, 50000, 90000])
    rs = residuals(t_ref + np.array([0, PERIOD, -120]), t_ref,
                   pulse_period=10.0)
    assert rs.residuals.tolist() == [0, 0, -120]
    assert rs.pulse_period == PERIOD
    with pytest.raises(UsageError):
        residuals(t_ref, t_ref)
    with pytest.raises(UsageError):
        residuals(t_ref, t_ref[:2], pulse_period=10.0)


def test_residuals_of_empty_stream(baseline) -> None:
    rs = residuals(TagStream([], []), baseline.arrivals())
    assert len(rs) == 0
    counts = windowed_counts(rs)
    assert counts == (0, 0.0)


def test_uniform_background_wraps_uniformly() -> None:
    rng = np.random.default_rng(1)
    times = rng.integers(0, 10**12, 10**5)
    rs = residuals(times, np.zeros_like(times), pulse_period=10.0)
    assert rs.residuals.min() > -PERIOD // 2
    assert rs.residuals.max() <= PERIOD // 2
    statistic = kstest(rs.residuals, 'uniform',
                       args=(-PERIOD / 2.0, PERIOD)).statistic
    assert statistic < 0.01


def test_windowed_counts_all_on_time() -> None:
    rs = ResidualSet(np.zeros(1000), np.arange(1000), PERIOD)
    assert windowed_counts(rs, 400, 1000) == (1000, 0.0)


def test_background_estimate_is_unbiased() -> None:
    n_tot, n_bkg = [], []
    for seed in range(100):
        rs = uniform_residuals(10**5, seed)
        tot, bkg = windowed_counts(rs, 400, 1000)
        n_tot.append(tot)
        n_bkg.append(bkg)
    expected = 10**5 * 400 / PERIOD
    assert np.mean(n_bkg) == pytest.approx(expected, rel=0.01)
    assert np.mean(n_tot) == pytest.approx(expected, rel=0.01)
    # single acquisition: estimate within 3 sigma of the counts
    sigma = math.sqrt(n_tot[0] + n_bkg[0] * 400 / (PERIOD - 2000))
    assert abs(n_tot[0] - n_bkg[0]) < 3.0 * sigma


def test_window_geometry() -> None:
    rs = uniform_residuals(100, 0)
    with pytest.raises(UsageError):
        windowed_counts(rs, 2500, 1000)
    with pytest.raises(UsageError):
        windowed_counts(rs, 400, 5000)
    with pytest.raises(UsageError):
        windowed_counts(rs, 0, 1000)


def test_background_only_intervals(baseline) -> None:
    rs = uniform_residuals(12000, 2)
    stats = interval_stats(rs, None, 5.0, 400, 0.3, 1000, 30.0)
    assert len(stats) == 12
    assert not any(s.selected for s in stats)
    total = sum(s.n_det for s in stats)
    sigma = math.sqrt(sum(s.n_tot_w + s.n_out * s.bkg_scale**2
                          for s in stats))
    assert abs(total) < 3.0 * sigma
    summary = estimate_pass_summary(filter_intervals(stats, 30.0),
                                    baseline.budget(), 1e8)
    assert summary.no_signal
    assert summary.as_dict()['r_det_hz'] is None


def test_filter_intervals() -> None:
    background = uniform_residuals(12000, 3, duration=62 * PS_PER_S)
    k = np.repeat(np.arange(6), 100)
    times = np.concatenate((background.times, k * 5 * PS_PER_S + 1000))
    values = np.concatenate((background.residuals, np.zeros(len(k))))
    rs = ResidualSet(values, times, PERIOD, duration=62 * PS_PER_S)
    stats = interval_stats(rs, None, 5.0, 400, 0.3, 1000, 30.0)
    assert len(stats) == 12
    selected = filter_intervals(stats, 30.0)
    assert [s.k for s in selected] == list(range(6))
    assert [s.k for s in stats if s.selected] == list(range(6))
    assert filter_intervals(stats, 1e6) == []


def test_interval_snr() -> None:
    stats = IntervalStats(0, 5.0, 0.3, 58 * 1.5 + 111.8 * 1.5, 111.8 * 1.5,
                          0, 0.0)
    assert stats.r_det == pytest.approx(58.0, abs=0.7)
    assert stats.snr == pytest.approx(0.52, abs=0.03)
    assert stats.bkg_rate_w == pytest.approx(111.8)


def test_baseline_closure(baseline, baseline_pass) -> None:
    rs, stats, selected, summary = pass_statistics(baseline, baseline_pass)
    assert len(stats) == 60
    assert len(selected) >= 50
    assert not summary.no_signal

    # ground truth of the simulator
    t_ref, valid = baseline.arrivals().match(baseline_pass.times)
    r = wrap_residuals(baseline_pass.times[valid] - t_ref[valid], PERIOD)
    truth = baseline_pass.truth[valid]
    k = baseline_pass.times[valid] // (5 * PS_PER_S)
    kept = (r >= -200) & (r < 200) & np.isin(k, [s.k for s in selected])
    exposure = len(selected) * 5.0 * 0.3
    truth_rate = np.count_nonzero(truth[kept] == SIGNAL) / exposure
    assert abs(summary.r_det - truth_rate) < 3.0 * summary.r_det_error

    # configured link, seen through the duty cycle and the window
    rtt = float(baseline.range_profile.rtt_ps(0.0)) / 1e9
    duty = effective_duty_cycle(baseline.schedule, rtt)
    response = baseline.response().broadened(40.0)
    in_window = float(response.cdf(199.5) - response.cdf(-200.5))
    forward = baseline.baseline().r_det
    expected = forward * duty / 0.3 * in_window
    assert abs(summary.r_det - expected) < 3.0 * summary.r_det_error + 1.0
    assert summary.r_det == pytest.approx(58.0, rel=0.15)

    expected_snr = forward * in_window / (2795.0 * 400 / PERIOD)
    assert summary.snr == pytest.approx(expected_snr, abs=0.06)
    assert summary.snr == pytest.approx(0.53, rel=0.2)

    relative = summary.r_det_error / summary.r_det
    expected_mu = baseline.mu_sat * duty / 0.3 * in_window
    assert abs(summary.mu_sat - expected_mu) < \
        3.0 * relative * expected_mu + 0.3
    assert summary.mu_sat == pytest.approx(15.0, rel=0.2)


def test_baseline_histogram(baseline, baseline_pass) -> None:
    rs, stats, selected, _ = pass_statistics(baseline, baseline_pass)
    histogram = Histogram.from_residuals(rs, 100)
    assert len(histogram.counts) == 101
    assert histogram.centers[50] == 0.0
    assert histogram.total == len(rs)
    kept = rs.in_intervals([s.k for s in selected], 5.0)
    assert 0.8 * len(rs) < len(kept) <= len(rs)
    assert np.argmax(histogram.counts) in (49, 50, 51)


def test_closed_shutter_holds_dark_counts(baseline, baseline_pass) -> None:
    occupancy = period_occupancy(baseline_pass, baseline.schedule,
                                 baseline.arrivals())
    assert occupancy.n_periods == pytest.approx(1500.0)
    assert occupancy.total.sum() == len(baseline_pass)
    closed = occupancy.counts['closed'].sum()
    expected = 700.0 * 0.115 * 1500
    assert abs(closed - expected) < 3.0 * math.sqrt(expected)
    rates = occupancy.rates('closed')[:100]
    assert np.mean(rates) == pytest.approx(700.0, rel=0.02)
    signal = occupancy.counts['signal']
    assert signal[:130].sum() == 0
    assert signal[130:190].sum() > 0


def test_fluorescence_half_life(baseline) -> None:
    stream = background_simulator(baseline).simulate(60.0, seed=4)
    occupancy = period_occupancy(stream, baseline.schedule)
    half_life, error = fit_decay_half_life(occupancy, 105.0, 190.0)
    assert half_life == pytest.approx(5.0, rel=0.1)
    assert error < 0.5
    with pytest.raises(DataError):
        fit_decay_half_life(occupancy, 0.0, 2.0)


def test_signature_of_simulated_histogram(wide) -> None:
    stream = signal_simulator(wide).simulate(2.0, seed=6)
    rs = residuals(stream, wide.arrivals())
    histogram = Histogram.from_residuals(rs, 100)
    assert peak_to_peak(histogram.to_profile(), 150) == \
        pytest.approx(430.0, abs=100.0)


def test_histogram_errors() -> None:
    with pytest.raises(UsageError):
        Histogram([0.0, 1.0], [1, 2])
    with pytest.raises(UsageError):
        Histogram.from_residuals(uniform_residuals(10, 0), 0)
    with pytest.raises(DataError):
        ResidualSet([6000], [0], PERIOD)


def channel_summary(scenario, stream, channel):
    params = scenario.analysis
    arrivals = scenario.arrivals()
    stats = interval_stats(stream.select(channel), arrivals, params.interval,
                           params.window, params.duty_cycle, params.exclusion,
                           params.threshold)
    budget = scenario.budget(receiver=scenario.receiver(channel))
    return estimate_pass_summary(filter_intervals(stats, params.threshold),
                                 budget, scenario.rep_rate, channel)


def test_dual_channel_closure(dual) -> None:
    stream = simulate_pass(dual, 300.0, seed=3)
    rtt = float(dual.range_profile.rtt_ps(0.0)) / 1e9
    duty = effective_duty_cycle(dual.schedule, rtt)
    summaries = {}
    for rx in dual.receivers:
        summary = channel_summary(dual, stream, rx.channel_id)
        assert summary.n_selected == 60
        response = dual.response().broadened(rx.jitter_fwhm)
        in_window = float(response.cdf(199.5) - response.cdf(-200.5))
        expected = dual.baseline(channel=rx.channel_id).r_det * duty / 0.3 * \
            in_window
        assert abs(summary.r_det - expected) < \
            3.0 * summary.r_det_error + 0.3
        summaries[rx.channel_id] = summary

    spad = summaries[0]
    assert spad.r_det == pytest.approx(27.0, rel=0.15)
    assert spad.snr == pytest.approx(0.43, abs=0.06)
    assert spad.mu_sat == pytest.approx(15.0, rel=0.2)
    assert 3.5 < spad.r_det / summaries[1].r_det < 7.5
