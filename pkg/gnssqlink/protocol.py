# -*- coding: utf-8 -*-
"""Two-way communication protocol and expected times of arrival.

Two-way communication protocol and expected times of arrival provide the
following functionality:

- describing the shutter schedule of the protocol;
- describing the slant range of the satellite during an acquisition;
- evaluating the effective duty cycle for a given round trip time;
- evaluating the expected time of arrival of a transmitted pulse;
- matching detections to the nearest expected pulse.

Times are integer picoseconds from the start of the acquisition, which
coincides with the start of a protocol period.
"""

import logging

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from gnssqlink.base import check_positive
from gnssqlink.constants import (DUTY_CYCLE, GNSS_RANGE_BOUNDS, PS_PER_MS,
                                 PS_PER_NS, PS_PER_S, SPEED_OF_LIGHT)
from gnssqlink.exceptions import DataError, DomainError, UsageError

logger = logging.getLogger(__name__)


class ProtocolSchedule(object):
    """Shutter schedule of the two-way protocol.

    The transmitting shutter is open in [tx_open, tx_close) and the receiving
    one in [rx_open, rx_close) of every period; the SLR pulse that triggers
    fluorescence is fired at slr_fire. Times are given in ms, the pulse
    period in ns.
    """

    def __init__(self, period=200.0, tx_open=0.0, tx_close=100.0,
                 slr_fire=100.0, rx_open=105.0, rx_close=180.0,
                 pulse_period=10.0, duty_cycle=DUTY_CYCLE):
        self._period = int(round(check_positive(period, "Period") *
                                 PS_PER_MS))
        self._tx_open = int(round(tx_open * PS_PER_MS))
        self._tx_close = int(round(tx_close * PS_PER_MS))
        self._rx_open = int(round(rx_open * PS_PER_MS))
        self._rx_close = int(round(rx_close * PS_PER_MS))
        self._slr_fire = int(round(slr_fire * PS_PER_MS))
        self._pulse_period = int(round(check_positive(pulse_period,
                                                      "Pulse period") *
                                       PS_PER_NS))
        for name, (start, stop) in (('tx', (self._tx_open, self._tx_close)),
                                    ('rx', (self._rx_open, self._rx_close))):
            if not 0 <= start < stop <= self._period:
                raise UsageError("The {} window must be a non-empty part of "
                                 "the period.".format(name))
        if self._tx_open < self._rx_close and self._rx_open < self._tx_close:
            raise UsageError("The tx and rx windows must be disjoint.")
        if not 0 <= self._slr_fire < self._period:
            raise UsageError("The SLR pulse must be fired within the period.")
        if not 0.0 < duty_cycle <= 1.0:
            raise DomainError("Duty cycle must lie in (0, 1], got {}."
                              "".format(duty_cycle))
        self._duty_cycle = float(duty_cycle)

    def __repr__(self):
        return ("ProtocolSchedule(period={0} ms, tx=[{1}, {2}) ms, "
                "rx=[{3}, {4}) ms)".format(
                    self._period / PS_PER_MS, self._tx_open / PS_PER_MS,
                    self._tx_close / PS_PER_MS, self._rx_open / PS_PER_MS,
                    self._rx_close / PS_PER_MS))

    @property
    def duty_cycle(self):
        """Nominal duty cycle used by the analysis."""
        return self._duty_cycle

    @property
    def period_ps(self):
        """Protocol period (ps)."""
        return self._period

    @property
    def pulse_period_ps(self):
        """Period (ps) between two transmitted pulses."""
        return self._pulse_period

    @property
    def pulses_per_period(self):
        """Number of pulses transmitted in a period."""
        return -(-(self._tx_close - self._tx_open) // self._pulse_period)

    @property
    def rx_window_ps(self):
        """Receiving window (ps) within a period."""
        return self._rx_open, self._rx_close

    @property
    def slr_fire_ps(self):
        """SLR firing time (ps) within a period."""
        return self._slr_fire

    @property
    def tx_window_ps(self):
        """Transmitting window (ps) within a period."""
        return self._tx_open, self._tx_close

    def as_dict(self):
        """Schedule as a plain dictionary (ms, ns)."""
        return {'period_ms': self._period / PS_PER_MS,
                'tx_open_ms': self._tx_open / PS_PER_MS,
                'tx_close_ms': self._tx_close / PS_PER_MS,
                'slr_fire_ms': self._slr_fire / PS_PER_MS,
                'rx_open_ms': self._rx_open / PS_PER_MS,
                'rx_close_ms': self._rx_close / PS_PER_MS,
                'pulse_period_ns': self._pulse_period / PS_PER_NS,
                'duty_cycle': self._duty_cycle}

    def phase(self, times):
        """Time (ps) elapsed since the start of the current period."""
        return np.mod(np.asarray(times, dtype=np.int64), self._period)

    def shutter_open(self, times):
        """Retrieve whether the receiving shutter is open at the given
        times (ps).
        """
        phase = self.phase(times)
        return (phase >= self._rx_open) & (phase < self._rx_close)

    def signal_region(self, rtt):
        """Intervals (ps, within a period, possibly beyond it) in which the
        returns of the pulses transmitted in a period reach an open receiving
        shutter, for a round trip time in ps.
        """
        start, stop = self._tx_open + rtt, self._tx_close + rtt
        region = []
        for shift in (0, self._period):
            lo = max(start, self._rx_open + shift)
            hi = min(stop, self._rx_close + shift)
            if hi > lo:
                region.append((lo, hi))
        return region


def effective_duty_cycle(schedule, rtt):
    """Fraction of the period in which the returns of transmitted pulses
    reach an open receiving shutter, for a round trip time in ms.
    """
    rtt_ps = float(rtt) * PS_PER_MS
    if not 0.0 < rtt_ps < schedule.period_ps:
        raise DomainError("Round trip time must lie in (0, {0}) ms, got {1} "
                          "ms.".format(schedule.period_ps / PS_PER_MS, rtt))
    covered = sum(hi - lo for lo, hi in schedule.signal_region(rtt_ps))
    return covered / schedule.period_ps


class RangeProfile(object):
    """Slant range (m) of the satellite against the time (s) elapsed since
    the start of the acquisition; linearly interpolated, held constant beyond
    the samples.
    """

    def __init__(self, samples, bounds=GNSS_RANGE_BOUNDS):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 2 or len(samples) < 2:
            raise UsageError("Range profile needs at least two (time, range) "
                             "samples.")
        if np.any(np.diff(samples[:, 0]) <= 0.0):
            raise UsageError("Range profile times must be increasing.")
        if bounds is not None and (np.any(samples[:, 1] < bounds[0]) or
                                   np.any(samples[:, 1] > bounds[1])):
            raise DomainError("Slant ranges must lie in [{0}, {1}] km."
                              "".format(bounds[0] / 1e3, bounds[1] / 1e3))
        self._times = samples[:, 0]
        self._ranges = samples[:, 1]

    def __repr__(self):
        return "<RangeProfile {0} samples, mean {1:.0f} km>".format(
            len(self._times), self.mean_range / 1e3)

    @classmethod
    def constant(cls, slant_range, duration=86400.0, **kwargs):
        """Profile at a constant slant range (m)."""
        return cls([(0.0, slant_range), (duration, slant_range)], **kwargs)

    @classmethod
    def from_csv(cls, filename, **kwargs):
        """Load a range profile from a CSV file with columns t_s and
        range_m.
        """
        try:
            table = pd.read_csv(filename, comment='#')
        except (OSError, ValueError) as err:
            raise DataError("Could not load range profile from {0}: {1}"
                            "".format(filename, err))
        if not {'t_s', 'range_m'} <= set(table.columns):
            raise DataError("Could not load range profile from {}: expected "
                            "columns t_s and range_m.".format(filename))
        return cls(table[['t_s', 'range_m']].to_numpy(dtype=float), **kwargs)

    @property
    def mean_range(self):
        """Time-averaged slant range (m) over the samples."""
        return float(trapezoid(self._ranges, self._times) /
                     (self._times[-1] - self._times[0]))

    @property
    def samples(self):
        """Samples as (time, range) rows."""
        return np.column_stack((self._times, self._ranges))

    def range_at(self, elapsed):
        """Slant range (m) at the given elapsed time (s)."""
        return np.interp(elapsed, self._times, self._ranges)

    def rtt_ps(self, elapsed):
        """Round trip time (ps) of a pulse emitted at the given elapsed time
        (s).
        """
        return 2.0 * self.range_at(elapsed) / SPEED_OF_LIGHT * PS_PER_S


class ExpectedArrivals(object):
    """Expected times of arrival of the transmitted pulses, from a range
    profile and a protocol schedule.
    """

    def __init__(self, profile, schedule):
        self._profile = profile
        self._schedule = schedule

    @property
    def profile(self):
        """Range profile."""
        return self._profile

    @property
    def schedule(self):
        """Protocol schedule."""
        return self._schedule

    def emission(self, period_index, pulse_index):
        """Emission time (ps) of a pulse of a period."""
        tx_open, _ = self._schedule.tx_window_ps
        return np.asarray(period_index, dtype=np.int64) * \
            self._schedule.period_ps + tx_open + \
            np.asarray(pulse_index, dtype=np.int64) * \
            self._schedule.pulse_period_ps

    def arrival(self, emission):
        """Expected time of arrival (ps) of pulses emitted at the given
        times (ps).
        """
        emission = np.asarray(emission, dtype=np.int64)
        rtt = self._profile.rtt_ps(emission / PS_PER_S)
        return emission + np.rint(rtt).astype(np.int64)

    def match(self, times):
        """Match detections (ps) to the nearest transmitted pulse.

        Returns the expected times of arrival of the matched pulses and a
        mask of the detections that fall in the signal region, i.e., whose
        matched pulse belongs to a transmitting window and which reached an
        open receiving shutter.
        """
        times = np.asarray(times, dtype=np.int64)
        emission = times - np.rint(self._profile.rtt_ps(
            times / PS_PER_S)).astype(np.int64)
        for _ in range(2):
            emission = times - np.rint(self._profile.rtt_ps(
                emission / PS_PER_S)).astype(np.int64)
        schedule = self._schedule
        tx_open, _ = schedule.tx_window_ps
        # nearest pulse first, then the period it belongs to
        offset = emission - tx_open + schedule.pulse_period_ps // 2
        period_index = np.floor_divide(offset, schedule.period_ps)
        offset = offset - period_index * schedule.period_ps
        pulse_index = np.floor_divide(offset, schedule.pulse_period_ps)
        valid = (pulse_index >= 0) & \
            (pulse_index < schedule.pulses_per_period) & \
            schedule.shutter_open(times)
        t_ref = self.arrival(self.emission(period_index, pulse_index))
        return t_ref, valid


def expected_arrival(pulse_index, profile, schedule, period_index=0):
    """Expected time of arrival (ps) of a transmitted pulse."""
    if not 0 <= int(pulse_index) < schedule.pulses_per_period:
        raise UsageError("Pulse index {0} lies outside the transmitting "
                         "window of {1} pulses.".format(
                             pulse_index, schedule.pulses_per_period))
    arrivals = ExpectedArrivals(profile, schedule)
    return int(arrivals.arrival(arrivals.emission(period_index,
                                                  pulse_index)))
