# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from scipy.stats import kstest

from conftest import background_simulator, signal_simulator
from gnssqlink.analysis import residuals
from gnssqlink.constants import PS_PER_MS, PS_PER_S
from gnssqlink.exceptions import UsageError
from gnssqlink.link_budget import detection_probability
from gnssqlink.protocol import ProtocolSchedule
from gnssqlink.simulator import (ALBEDO, DARK, FLUORESCENCE, SIGNAL,
                                 NoiseModel, apply_dead_time, simulate_pass)
from gnssqlink.tags import TagStream


def within(count, expected, sigmas=3.0):
    return abs(count - expected) < sigmas * math.sqrt(expected)


def test_same_seed_same_stream(baseline) -> None:
    first = simulate_pass(baseline, 2.0, seed=7)
    second = simulate_pass(baseline, 2.0, seed=7)
    assert np.array_equal(first.times, second.times)
    assert np.array_equal(first.truth, second.truth)
    assert first.metadata == second.metadata
    assert first.metadata['scenario_hash'] == baseline.hash
    other = simulate_pass(baseline, 2.0, seed=8)
    assert not np.array_equal(first.times, other.times)


def test_workers_do_not_change_stream(baseline) -> None:
    serial = simulate_pass(baseline, 2.0, seed=3)
    parallel = simulate_pass(baseline, 2.0, seed=3, workers=3)
    assert np.array_equal(serial.times, parallel.times)
    assert np.array_equal(serial.truth, parallel.truth)


def test_zero_duration(baseline) -> None:
    with pytest.raises(UsageError):
        simulate_pass(baseline, 0.0, seed=1)


def test_no_signal_without_photons(baseline) -> None:
    stream = background_simulator(baseline).simulate(2.0, seed=1)
    assert stream.counts()['signal'] == 0
    assert len(stream) > 0


def test_signal_count(baseline, baseline_minute) -> None:
    budget = baseline.budget()
    p = detection_probability(baseline.mu_sat, budget.t_down, budget.t_rx)
    rtt = float(baseline.range_profile.rtt_ps(0.0))
    _, rx_close = baseline.schedule.rx_window_ps
    periods = 60.0 * PS_PER_S / baseline.schedule.period_ps
    expected = p * (rx_close - rtt) / baseline.schedule.pulse_period_ps * \
        periods
    assert expected == pytest.approx(58.0 * 0.3 * 60.0, rel=0.05)
    assert within(baseline_minute.counts()['signal'], expected)


def test_background_counts(baseline, baseline_minute) -> None:
    counts = baseline_minute.counts()
    assert within(counts['dark'], 700.0 * 60.0)
    assert within(counts['albedo'], 1900.0 * 0.085 / 0.2 * 60.0)


def test_fluorescence_rate_in_signal_region(baseline, baseline_minute) -> None:
    schedule = baseline.schedule
    rtt = float(baseline.range_profile.rtt_ps(0.0))
    _, rx_close = schedule.rx_window_ps
    phase = schedule.phase(baseline_minute.times)
    in_region = (baseline_minute.truth == FLUORESCENCE) & (phase >= rtt) & \
        (phase < rx_close)
    periods = 60.0 * PS_PER_S / schedule.period_ps
    expected = 195.0 * (rx_close - rtt) / PS_PER_S * periods
    assert within(np.count_nonzero(in_region), expected)


def test_optical_events_need_open_shutter(baseline, baseline_minute) -> None:
    is_open = baseline.schedule.shutter_open(baseline_minute.times)
    optical = baseline_minute.truth != DARK
    assert is_open[optical].all()
    closed = 0.115 / 0.2 * 700.0 * 60.0
    assert within(np.count_nonzero(~is_open), closed)
    assert np.all(baseline_minute.truth[~is_open] == DARK)


def test_signal_follows_array_response(baseline) -> None:
    stream = signal_simulator(baseline).simulate(6.0, seed=5)
    assert stream.counts()['signal'] > 10**5
    rs = residuals(stream, baseline.arrivals())
    assert len(rs) > 0.99 * len(stream)
    response = baseline.response().broadened(40.0)
    assert kstest(rs.residuals, response.cdf).statistic < 0.02


def test_fluorescence_calibration(baseline) -> None:
    noise = baseline.noise
    schedule = baseline.schedule
    rtt = float(baseline.range_profile.rtt_ps(0.0))
    amplitude = noise.fluorescence_amplitude(schedule, rtt)
    assert amplitude == pytest.approx(105e3, rel=0.01)
    phase = np.linspace(rtt, 190 * PS_PER_MS, 200001)
    mean = amplitude * np.mean(noise.decay(phase, schedule))
    assert mean == pytest.approx(195.0, rel=1e-3)
    assert noise.decay(105 * PS_PER_MS, schedule) == pytest.approx(0.5)
    assert NoiseModel().fluorescence_amplitude(schedule, rtt) == 0.0


def test_fluorescence_without_return() -> None:
    schedule = ProtocolSchedule(rx_close=190.0)
    noise = NoiseModel(fluorescence_rate=100.0)
    # returns after the shutter closes: calibrated over the whole window
    amplitude = noise.fluorescence_amplitude(schedule, 195 * PS_PER_MS)
    phase = np.linspace(105 * PS_PER_MS, 190 * PS_PER_MS, 200001)
    assert amplitude * np.mean(noise.decay(phase, schedule)) == \
        pytest.approx(100.0, rel=1e-3)


def test_channels_scale_with_transmittance(dual) -> None:
    stream = simulate_pass(dual, 10.0, seed=11)
    assert stream.channel_ids == [0, 1]
    spad, pmt = stream.select(0).counts(), stream.select(1).counts()
    assert spad['signal'] > pmt['signal']
    assert spad['albedo'] > 3 * pmt['albedo']
    assert within(pmt['dark'], 300.0 * 10.0)


def test_apply_dead_time() -> None:
    stream = TagStream([0, 10, 100, 105, 20], [0, 0, 0, 0, 1],
                       [SIGNAL, DARK, ALBEDO, DARK, DARK])
    dead = apply_dead_time(stream, 50)
    assert dead.select(0).times.tolist() == [0, 100]
    assert dead.select(1).times.tolist() == [20]
    assert apply_dead_time(stream, 0) is stream


def test_dead_time_in_simulation(baseline) -> None:
    stream = simulate_pass(baseline, 1.0, seed=2, dead_time=50000.0)
    assert np.all(np.diff(stream.times) >= 50000)
