# -*- coding: utf-8 -*-
"""Detection statistics of a pass.

Detection statistics of a pass provide the following functionality:

- evaluating the residuals between detections and expected times of arrival;
- histogramming residuals;
- counting detections in the signal window and estimating the background;
- evaluating detection rate and SNR per time interval;
- filtering intervals by detection rate;
- summarizing a pass (mean detection rate, SNR and mean photon number);
- histogramming detections over the protocol period;
- fitting the half-life of the fluorescence decay.

Residual windows are half-open: the signal window is [-w/2, w/2) and the
background region is r < -exclusion or r >= exclusion, so that, for integer
residuals uniform over a pulse period P, the background estimate
N_out * w / (P - 2 * exclusion) is unbiased.
"""

import logging
import math

import numpy as np
from scipy.optimize import curve_fit

from gnssqlink.ccr_response import TemporalProfile
from gnssqlink.constants import (BIN_WIDTH_PS, DUTY_CYCLE, EXCLUSION_PS,
                                 INTERVAL_S, PS_PER_MS, PS_PER_NS, PS_PER_S,
                                 THRESHOLD_HZ, WINDOW_PS)
from gnssqlink.exceptions import DataError, UsageError
from gnssqlink.link_budget import estimate_mu_sat
from gnssqlink.protocol import ExpectedArrivals
from gnssqlink.tags import TagStream

logger = logging.getLogger(__name__)

OCCUPANCY_CLASSES = ('closed', 'open', 'signal')


def wrap_residuals(delays, pulse_period):
    """Wrap delays (ps) into (-P/2, P/2] for a pulse period P (ps)."""
    half = pulse_period // 2
    return half - np.mod(half - np.asarray(delays, dtype=np.int64),
                         pulse_period)


class ResidualSet(object):
    """Residuals (ps) of the detections of a channel with respect to their
    expected times of arrival, with the detection times (ps).
    """

    def __init__(self, residuals, times, pulse_period, channel=None,
                 duration=None):
        self._residuals = np.asarray(residuals, dtype=np.int64)
        self._times = np.asarray(times, dtype=np.int64)
        if self._residuals.shape != self._times.shape:
            raise DataError("Residuals and detection times must match.")
        self._pulse_period = int(pulse_period)
        half = self._pulse_period // 2
        if np.any(np.abs(self._residuals) > half):
            raise DataError("Residuals must not exceed half the pulse "
                            "period.")
        self._channel = channel
        self._duration = duration

    def __len__(self):
        return len(self._residuals)

    def __repr__(self):
        return "<ResidualSet {0} residuals, channel {1}>".format(
            len(self), self._channel)

    @property
    def channel(self):
        """Source channel, if a single one."""
        return self._channel

    @property
    def duration(self):
        """Acquisition duration (ps), if known."""
        return self._duration

    @property
    def pulse_period(self):
        """Pulse period (ps)."""
        return self._pulse_period

    @property
    def residuals(self):
        """Residuals (ps)."""
        return self._residuals

    @property
    def times(self):
        """Detection times (ps)."""
        return self._times

    def interval_indices(self, tau):
        """Index k of the interval of duration tau (s) of each residual."""
        return np.floor_divide(self._times, int(round(tau * PS_PER_S)))

    def in_intervals(self, indices, tau):
        """Residuals of the detections that belong to the given intervals."""
        mask = np.isin(self.interval_indices(tau), np.asarray(list(indices),
                                                              dtype=np.int64))
        return ResidualSet(self._residuals[mask], self._times[mask],
                           self._pulse_period, self._channel, self._duration)


def residuals(tags, refs, pulse_period=None):
    """Residuals between the detections and the nearest expected time of
    arrival.

    The references are either the expected arrivals of the pulses, in which
    case only the detections in the signal region are kept, or the expected
    time of arrival (ps) of every detection. The pulse period is in ns; it
    defaults to the one of the protocol schedule of the expected arrivals.
    """
    if isinstance(tags, TagStream):
        times, duration = tags.times, tags.duration
        channels = np.unique(tags.channels)
        channel = int(channels[0]) if len(channels) == 1 else None
    else:
        times, duration, channel = np.asarray(tags, dtype=np.int64), None, \
            None
    if pulse_period is None:
        if not isinstance(refs, ExpectedArrivals):
            raise UsageError("Could not evaluate residuals: unknown pulse "
                             "period.")
        period = refs.schedule.pulse_period_ps
    else:
        period = int(round(float(pulse_period) * PS_PER_NS))
    if period <= 0:
        raise UsageError("Pulse period must be positive.")
    if isinstance(refs, ExpectedArrivals):
        t_ref, valid = refs.match(times)
        times, t_ref = times[valid], t_ref[valid]
    else:
        t_ref = np.asarray(refs, dtype=np.int64)
        if t_ref.shape != times.shape:
            raise UsageError("Could not evaluate residuals: one expected "
                             "time of arrival per detection is needed.")
    return ResidualSet(wrap_residuals(times - t_ref, period), times, period,
                       channel, duration)


class Histogram(object):
    """Histogram of residuals (ps)."""

    def __init__(self, edges, counts):
        self._edges = np.asarray(edges, dtype=float)
        self._counts = np.asarray(counts, dtype=np.int64)
        if len(self._edges) != len(self._counts) + 1:
            raise UsageError("Histogram needs one edge more than bins.")
        if np.any(self._counts < 0):
            raise UsageError("Histogram counts must be non-negative.")

    @classmethod
    def from_residuals(cls, rs, bin_width=BIN_WIDTH_PS):
        """Histogram covering the whole pulse period, with bins centered on
        multiples of the bin width (ps).
        """
        if not bin_width > 0:
            raise UsageError("Bin width must be positive.")
        half = rs.pulse_period / 2.0
        n = int(math.ceil(half / bin_width))
        edges = (np.arange(-n, n + 2) - 0.5) * bin_width
        counts, _ = np.histogram(rs.residuals, bins=edges)
        return cls(edges, counts)

    @property
    def bin_width(self):
        """Bin width (ps)."""
        return float(self._edges[1] - self._edges[0])

    @property
    def centers(self):
        """Bin centers (ps)."""
        return 0.5 * (self._edges[:-1] + self._edges[1:])

    @property
    def counts(self):
        """Counts per bin."""
        return self._counts

    @property
    def edges(self):
        """Bin edges (ps)."""
        return self._edges

    @property
    def total(self):
        """Total number of counts."""
        return int(self._counts.sum())

    def to_profile(self):
        """Histogram normalized to a temporal profile."""
        total = max(self.total, 1)
        return TemporalProfile(self.bin_width, self._edges[0],
                               self._counts / (total * self.bin_width))


def _check_windows(window, exclusion, pulse_period):
    if not window > 0:
        raise UsageError("Signal window must be positive, got {} ps."
                         "".format(window))
    if not window < 2 * exclusion:
        raise UsageError("Signal window of {0} ps overlaps the background "
                         "region beyond {1} ps.".format(window, exclusion))
    if not 2 * exclusion < pulse_period:
        raise UsageError("Exclusion of {0} ps leaves no background region in "
                         "a pulse period of {1} ps.".format(exclusion,
                                                            pulse_period))


def _window_masks(r, window, exclusion):
    in_window = (r >= -window / 2.0) & (r < window / 2.0)
    out = (r < -exclusion) | (r >= exclusion)
    return in_window, out


def windowed_counts(rs, window=WINDOW_PS, exclusion=EXCLUSION_PS):
    """Count the residuals in the signal window (ps) and estimate the
    background in the window from the residuals beyond the exclusion (ps).
    """
    _check_windows(window, exclusion, rs.pulse_period)
    in_window, out = _window_masks(rs.residuals, window, exclusion)
    n_out = int(np.count_nonzero(out))
    return int(np.count_nonzero(in_window)), \
        n_out * window / (rs.pulse_period - 2.0 * exclusion)


class IntervalStats(object):
    """Detection statistics of a time interval."""

    def __init__(self, k, tau, delta, n_tot_w, n_bkg_w, n_out, bkg_scale,
                 selected=False):
        self.k = int(k)
        self.tau = float(tau)
        self.delta = float(delta)
        self.n_tot_w = int(n_tot_w)
        self.n_bkg_w = float(n_bkg_w)
        self.n_out = int(n_out)
        self.bkg_scale = float(bkg_scale)
        self.selected = bool(selected)

    def __repr__(self):
        return "IntervalStats(k={0}, r_det={1:.1f} Hz, snr={2:.3g})".format(
            self.k, self.r_det, self.snr)

    @property
    def bkg_rate_w(self):
        """Background rate (Hz) in the signal window."""
        return self.n_bkg_w / (self.tau * self.delta)

    @property
    def n_det(self):
        """Background-subtracted number of detections in the window."""
        return self.n_tot_w - self.n_bkg_w

    @property
    def r_det(self):
        """Detection rate (Hz)."""
        return self.n_det / (self.tau * self.delta)

    @property
    def snr(self):
        """Ratio of detections to background counts in the window."""
        if self.n_bkg_w == 0.0:
            return math.inf if self.n_det > 0 else math.nan
        return self.n_det / self.n_bkg_w

    def as_dict(self):
        """Statistics as a plain dictionary."""
        return {'k': self.k, 'tau_s': self.tau, 'n_tot_w': self.n_tot_w,
                'n_bkg_w': self.n_bkg_w, 'n_det': self.n_det,
                'r_det_hz': self.r_det, 'bkg_rate_w_hz': self.bkg_rate_w,
                'snr': self.snr, 'selected': self.selected}


def interval_stats(tags, refs, tau=INTERVAL_S, window=WINDOW_PS,
                   delta=DUTY_CYCLE, exclusion=EXCLUSION_PS,
                   threshold=THRESHOLD_HZ):
    """Detection statistics of the intervals of duration tau (s) of an
    acquisition; trailing partial intervals are dropped.

    The tags are either a stream or its residual set; the intervals whose
    detection rate reaches the threshold (Hz) are marked as selected.
    """
    if not tau > 0:
        raise UsageError("Interval duration must be positive, got {} s."
                         "".format(tau))
    if not 0.0 < delta <= 1.0:
        raise UsageError("Duty cycle must lie in (0, 1], got {}."
                         "".format(delta))
    rs = tags if isinstance(tags, ResidualSet) else residuals(tags, refs)
    _check_windows(window, exclusion, rs.pulse_period)
    span = rs.duration
    if span is None:
        span = int(rs.times[-1]) + 1 if len(rs) else 0
    n_intervals = int(span // int(round(tau * PS_PER_S)))
    k = rs.interval_indices(tau)
    in_window, out = _window_masks(rs.residuals, window, exclusion)
    inside = k < n_intervals
    n_tot = np.bincount(k[in_window & inside], minlength=n_intervals)
    n_out = np.bincount(k[out & inside], minlength=n_intervals)
    scale = window / (rs.pulse_period - 2.0 * exclusion)
    stats = [IntervalStats(i, tau, delta, n_tot[i], n_out[i] * scale,
                           n_out[i], scale)
             for i in range(n_intervals)]
    for s in stats:
        s.selected = _reaches(s, threshold)
    logger.debug("%d of %d intervals reach %s Hz.",
                 sum(s.selected for s in stats), n_intervals, threshold)
    return stats


def _reaches(stats, threshold):
    # a threshold of zero or below disables the selection
    return threshold <= 0.0 or stats.r_det >= threshold


def filter_intervals(stats, threshold=THRESHOLD_HZ):
    """Intervals whose detection rate reaches the threshold (Hz); every
    interval is kept for a threshold of zero or below.
    """
    return [s for s in stats if _reaches(s, threshold)]


class PassSummary(object):
    """Summary of the detection statistics of a pass."""

    def __init__(self, r_det=None, snr=None, mu_sat=None, r_det_error=None,
                 n_selected=0, n_det=0.0, n_bkg_w=0.0, channel=None,
                 no_signal=False):
        self.r_det = r_det
        self.snr = snr
        self.mu_sat = mu_sat
        self.r_det_error = r_det_error
        self.n_selected = n_selected
        self.n_det = n_det
        self.n_bkg_w = n_bkg_w
        self.channel = channel
        self.no_signal = no_signal

    def __repr__(self):
        if self.no_signal:
            return "PassSummary(no signal)"
        return "PassSummary(r_det={0:.1f} Hz, snr={1:.3g}, mu_sat={2:.3g})" \
            "".format(self.r_det, self.snr, self.mu_sat)

    def as_dict(self):
        """Summary as a plain dictionary; non-finite values become None."""
        def finite(value):
            if value is None or not math.isfinite(value):
                return None
            return float(value)

        return {'channel': self.channel, 'no_signal': self.no_signal,
                'n_selected': self.n_selected, 'n_det': finite(self.n_det),
                'n_bkg_w': finite(self.n_bkg_w),
                'r_det_hz': finite(self.r_det),
                'r_det_error_hz': finite(self.r_det_error),
                'snr': finite(self.snr), 'mu_sat': finite(self.mu_sat)}


def estimate_pass_summary(selected, budget, rep_rate, channel=None):
    """Average the selected intervals into the mean detection rate (Hz),
    the SNR (ratio of summed counts) and the mean photon number at the
    satellite, for a repetition rate in Hz.

    The statistical error of the detection rate combines the Poisson errors
    of the window counts and of the scaled background counts.
    """
    selected = list(selected)
    if not selected:
        logger.debug("No interval selected: no signal.")
        return PassSummary(channel=channel, no_signal=True)
    if budget.t_rx is None:
        raise UsageError("Could not summarize pass: the budget lacks the "
                         "receiver transmittance.")
    exposure = sum(s.tau * s.delta for s in selected)
    n_det = sum(s.n_det for s in selected)
    n_bkg = sum(s.n_bkg_w for s in selected)
    variance = sum(s.n_tot_w + s.n_out * s.bkg_scale**2 for s in selected)
    r_det = n_det / exposure
    if n_bkg > 0.0:
        snr = n_det / n_bkg
    else:
        snr = math.inf if n_det > 0.0 else math.nan
    mu_sat = estimate_mu_sat(r_det, rep_rate, budget.t_down, budget.t_rx)
    summary = PassSummary(r_det, snr, mu_sat, math.sqrt(variance) / exposure,
                          len(selected), n_det, n_bkg, channel)
    logger.debug("Pass summary: %r", summary)
    return summary


class PeriodOccupancy(object):
    """Histogram of detections over the protocol period, per class: closed
    shutter, open shutter outside the signal region, signal region.
    """

    def __init__(self, edges, counts, n_periods):
        self._edges = np.asarray(edges, dtype=float)
        self._counts = {name: np.asarray(counts[name], dtype=np.int64)
                        for name in OCCUPANCY_CLASSES}
        self._n_periods = float(n_periods)

    @property
    def centers(self):
        """Bin centers (ms)."""
        return 0.5 * (self._edges[:-1] + self._edges[1:])

    @property
    def counts(self):
        """Counts per bin of each class."""
        return self._counts

    @property
    def edges(self):
        """Bin edges (ms)."""
        return self._edges

    @property
    def n_periods(self):
        """Number of protocol periods covered by the acquisition."""
        return self._n_periods

    @property
    def total(self):
        """Counts per bin of all classes."""
        return sum(self._counts.values())

    def rates(self, name=None):
        """Detection rate (Hz) per bin of a class, or of all classes."""
        counts = self.total if name is None else self._counts[name]
        widths = np.diff(self._edges) / 1e3
        return counts / (widths * max(self._n_periods, 1e-300))


def period_occupancy(tags, schedule, arrivals=None, bin_width=1.0):
    """Histogram the detections against the time (ms) elapsed since the
    start of the period, classed by shutter state and, when the expected
    arrivals are given, by membership of the signal region.
    """
    if not bin_width > 0:
        raise UsageError("Bin width must be positive.")
    period_ms = schedule.period_ps / PS_PER_MS
    n = int(math.ceil(period_ms / bin_width))
    edges = np.arange(n + 1) * bin_width
    edges[-1] = period_ms
    phase = schedule.phase(tags.times) / PS_PER_MS
    open_ = schedule.shutter_open(tags.times)
    signal = np.zeros(len(tags), dtype=bool)
    if arrivals is not None and len(tags):
        _, signal = arrivals.match(tags.times)
    masks = {'closed': ~open_, 'open': open_ & ~signal,
             'signal': open_ & signal}
    counts = {name: np.histogram(phase[mask], bins=edges)[0]
              for name, mask in masks.items()}
    return PeriodOccupancy(edges, counts, tags.duration / schedule.period_ps)


def _decay(t, amplitude, half_life, offset):
    return amplitude * np.exp2(-t / half_life) + offset


def fit_decay_half_life(occupancy, start, stop=None):
    """Fit an exponential decay with a constant floor to the occupancy from
    start (ms) to stop (ms), both within an open shutter; returns the
    half-life (ms) and its standard error.
    """
    centers = occupancy.centers
    total = occupancy.total
    stop = occupancy.edges[-1] if stop is None else stop
    mask = (centers > start) & (centers < stop)
    if np.count_nonzero(total[mask]) < 4:
        raise DataError("Could not fit decay: fewer than four populated "
                        "bins.")
    t, counts = centers[mask] - start, total[mask].astype(float)
    guess = (counts[0], (t[-1] - t[0]) / 4.0, counts.min())
    try:
        params, covariance = curve_fit(
            _decay, t, counts, p0=guess,
            sigma=np.sqrt(np.maximum(counts, 1.0)),
            bounds=([0.0, 1e-6, 0.0], [np.inf, np.inf, np.inf]))
    except (RuntimeError, ValueError) as err:
        raise DataError("Could not fit decay: {}".format(err))
    return float(params[1]), float(math.sqrt(covariance[1, 1]))
