# -*- coding: utf-8 -*-
"""Monte Carlo simulation of the two-way single-photon channel.

Monte Carlo simulation of the two-way single-photon channel provides the
following functionality:

- describing the background of the receiving channels;
- calibrating the fluorescence decay to an average rate in the signal region;
- simulating the detections of the photons reflected by the satellite;
- simulating dark counts, albedo and fluorescence detections;
- simulating a whole pass as a stream of time-tagged detections;
- applying a detector dead time to a stream.

A pass is simulated one protocol period at a time. Every period, truth class
and channel draws from its own generator, derived from the seed, so that
streams do not depend on the number of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from gnssqlink.base import check_positive
from gnssqlink.constants import (FLUORESCENCE_HALF_LIFE_MS, PS_PER_MS,
                                 PS_PER_S, TRUTH_CLASSES)
from gnssqlink.exceptions import UsageError
from gnssqlink.link_budget import (detection_probability,
                                   receiver_transmittance)
from gnssqlink.protocol import ExpectedArrivals
from gnssqlink.tags import TagStream

logger = logging.getLogger(__name__)

SIGNAL, DARK, FLUORESCENCE, ALBEDO = range(len(TRUTH_CLASSES))


class NoiseModel(object):
    """Background of the receiving channels.

    The fluorescence rate is the average over the signal region of a decay
    that starts at every SLR firing; the albedo rate applies while the
    receiving shutter is open. Both refer to the first receiving channel and
    scale with the transmittance of the others. The dark count rate is the
    one quoted for the link baseline; each detector draws dark counts at its
    own rate.
    """

    def __init__(self, fluorescence_rate=0.0, albedo_rate=0.0, dark_rate=0.0,
                 fluorescence_half_life=FLUORESCENCE_HALF_LIFE_MS):
        self._fluorescence_rate = check_positive(
            fluorescence_rate, "Fluorescence rate", allow_zero=True)
        self._albedo_rate = check_positive(albedo_rate, "Albedo rate",
                                           allow_zero=True)
        self._dark_rate = check_positive(dark_rate, "Dark count rate",
                                         allow_zero=True)
        self._fluorescence_half_life = check_positive(
            fluorescence_half_life, "Fluorescence half-life")

    def __repr__(self):
        return ("NoiseModel(dark={0} Hz, fluorescence={1} Hz, albedo={2} Hz)"
                "".format(self._dark_rate, self._fluorescence_rate,
                          self._albedo_rate))

    @property
    def albedo_rate(self):
        """Albedo detection rate (Hz) while the shutter is open."""
        return self._albedo_rate

    @property
    def dark_rate(self):
        """Dark count rate (Hz) of the link baseline."""
        return self._dark_rate

    @property
    def fluorescence_half_life(self):
        """Half-life (ms) of the fluorescence decay."""
        return self._fluorescence_half_life

    @property
    def fluorescence_rate(self):
        """Average fluorescence detection rate (Hz) in the signal region."""
        return self._fluorescence_rate

    def decay(self, phase, schedule):
        """Fluorescence decay factor at the given phases (ps) of the period,
        relative to the latest SLR firing.
        """
        elapsed = np.mod(np.asarray(phase, dtype=float) -
                         schedule.slr_fire_ps, schedule.period_ps)
        return np.exp2(-elapsed / (self._fluorescence_half_life * PS_PER_MS))

    def fluorescence_amplitude(self, schedule, rtt):
        """Fluorescence rate (Hz) right after the SLR firing, such that the
        average over the signal region for the round trip time rtt (ps)
        equals the configured rate.

        When no return reaches the open shutter, the average is taken over
        the whole receiving window instead.
        """
        if self._fluorescence_rate == 0.0:
            return 0.0
        region = schedule.signal_region(rtt) or [schedule.rx_window_ps]
        length = sum(hi - lo for lo, hi in region)
        integral = sum(self._decay_integral(lo, hi, schedule)
                       for lo, hi in region)
        return self._fluorescence_rate * length / integral

    def _decay_integral(self, lo, hi, schedule):
        rate = math.log(2.0) / (self._fluorescence_half_life * PS_PER_MS)
        total = 0.0
        for start, stop in _split_at_firing(lo, hi, schedule):
            total += float(self.decay(start, schedule)) * \
                -math.expm1(-rate * (stop - start)) / rate
        return total


def _split_at_firing(lo, hi, schedule):
    """Split [lo, hi) (ps) at the SLR firings."""
    period, fire = schedule.period_ps, schedule.slr_fire_ps
    first = int(math.floor((lo - fire) / period)) + 1
    cuts = [fire + n * period for n in range(first, first + 2 +
                                             int((hi - lo) // period))]
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    return list(zip(edges[:-1], edges[1:]))


def apply_dead_time(stream, dead_time):
    """Drop the detections that fall within the dead time (ps) of the
    previous retained detection of the same channel.
    """
    dead_time = int(round(check_positive(dead_time, "Dead time",
                                         allow_zero=True)))
    if dead_time == 0 or len(stream) == 0:
        return stream
    keep = np.ones(len(stream), dtype=bool)
    last = {}
    for i, (t, channel) in enumerate(zip(stream.times.tolist(),
                                         stream.channels.tolist())):
        if channel in last and t - last[channel] < dead_time:
            keep[i] = False
        else:
            last[channel] = t
    logger.debug("Dead time removed %d detections.", np.count_nonzero(~keep))
    truth = None if stream.truth is None else stream.truth[keep]
    return TagStream(stream.times[keep], stream.channels[keep], truth,
                     stream.metadata)


class Simulator(object):
    """Monte Carlo simulator of the detections of a pass.

    The down-link transmittance is given as a function of the slant range
    (m); the array response is the one of the satellite without detector
    jitter, which is added per receiving channel.
    """

    def __init__(self, schedule, profile, receivers, response, noise, mu_sat,
                 downlink, workers=1, dead_time=None, verbose=False):
        receivers = list(receivers)
        if not receivers:
            raise UsageError("Could not create simulator: no receiving "
                             "channel.")
        channel_ids = [rx.channel_id for rx in receivers]
        if len(set(channel_ids)) != len(channel_ids):
            raise UsageError("Could not create simulator: duplicate channel "
                             "IDs.")
        if int(workers) < 1:
            raise UsageError("Number of workers must be positive.")
        self._schedule = schedule
        self._profile = profile
        self._receivers = receivers
        self._response = response
        self._noise = noise
        self._mu_sat = check_positive(mu_sat, "Mean photon number",
                                      allow_zero=True)
        self._downlink = downlink
        self._workers = int(workers)
        self._dead_time = dead_time
        self.verbose = verbose
        self._arrivals = ExpectedArrivals(profile, schedule)
        self._t_rx = [float(receiver_transmittance(rx)) for rx in receivers]
        self._responses = [response.broadened(rx.jitter_fwhm)
                           for rx in receivers]
        self._fluorescence_amplitude = noise.fluorescence_amplitude(
            schedule, float(profile.rtt_ps(0.0)))

    @property
    def arrivals(self):
        """Expected times of arrival of the transmitted pulses."""
        return self._arrivals

    @property
    def mu_sat(self):
        """Mean photon number per pulse at the satellite."""
        return self._mu_sat

    @property
    def noise(self):
        """Background of the receiving channels."""
        return self._noise

    @property
    def receivers(self):
        """Receiving channels."""
        return self._receivers

    @property
    def schedule(self):
        """Protocol schedule."""
        return self._schedule

    @property
    def workers(self):
        """Number of threads simulating periods concurrently."""
        return self._workers

    def simulate(self, duration, seed, metadata=None, verbose=None):
        """Simulate the detections of all channels over a duration (s)."""
        if verbose is None:
            verbose = self.verbose
        duration_ps = int(round(float(duration) * PS_PER_S))
        if duration_ps <= 0:
            raise UsageError("Could not simulate pass: duration must be "
                             "positive, got {} s.".format(duration))
        seed = int(seed)
        n_chunks = -(-duration_ps // self._schedule.period_ps)

        def run(chunk):
            return self._simulate_period(chunk, seed, duration_ps)

        if self._workers > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as pool:
                chunks = list(pool.map(run, range(n_chunks)))
        else:
            chunks = [run(chunk) for chunk in range(n_chunks)]
        events = [event for chunk in chunks for event in chunk]
        if events:
            times = np.concatenate([e[0] for e in events])
            channels = np.concatenate([np.full(len(e[0]), e[1], np.int16)
                                       for e in events])
            truth = np.concatenate([np.full(len(e[0]), e[2], np.int8)
                                    for e in events])
        else:
            times = channels = truth = np.array([], dtype=np.int64)
        metadata = dict(metadata or {})
        metadata.update({'seed': seed, 'duration_ps': duration_ps,
                         'channels': [rx.channel_id
                                      for rx in self._receivers]})
        stream = TagStream.from_events(times, channels, truth, metadata)
        if self._dead_time:
            stream = apply_dead_time(stream, self._dead_time)
        message = "Simulated {0} s with seed {1}: {2}.".format(
            duration, seed, ", ".join("{0} {1}".format(n, name) for name, n
                                      in stream.counts().items()))
        if verbose:
            logger.info(message)
        else:
            logger.debug(message)
        return stream

    def _rng(self, seed, truth, channel, chunk):
        return np.random.default_rng(np.random.SeedSequence(
            seed, spawn_key=(truth, channel, chunk)))

    def _simulate_period(self, chunk, seed, duration_ps):
        start = chunk * self._schedule.period_ps
        stop = min(start + self._schedule.period_ps, duration_ps)
        rx_open, rx_close = self._schedule.rx_window_ps
        open_lo, open_hi = start + rx_open, min(start + rx_close, stop)
        t_rx_0 = self._t_rx[0]
        events = []
        for rx, t_rx, response in zip(self._receivers, self._t_rx,
                                      self._responses):
            channel = rx.channel_id
            scale = t_rx / t_rx_0
            times = self._signal(chunk, t_rx, response,
                                 self._rng(seed, SIGNAL, channel, chunk))
            events.append((times[(times >= 0) & (times < duration_ps)],
                           channel, SIGNAL))
            events.append((self._uniform(
                start, stop, rx.dark_rate,
                self._rng(seed, DARK, channel, chunk)), channel, DARK))
            events.append((self._fluorescence(
                open_lo, open_hi, scale,
                self._rng(seed, FLUORESCENCE, channel, chunk)),
                channel, FLUORESCENCE))
            events.append((self._uniform(
                open_lo, open_hi, self._noise.albedo_rate * scale,
                self._rng(seed, ALBEDO, channel, chunk)), channel, ALBEDO))
        return [event for event in events if len(event[0])]

    def _signal(self, chunk, t_rx, response, rng):
        schedule, profile = self._schedule, self._profile
        tx_open, tx_close = schedule.tx_window_ps
        rx_open, rx_close = schedule.rx_window_ps
        pulse_period = schedule.pulse_period_ps
        first_emission = chunk * schedule.period_ps + tx_open
        last_emission = chunk * schedule.period_ps + tx_close
        elapsed = np.linspace(first_emission, last_emission, 17) / PS_PER_S
        knots = profile.samples[:, 0]
        elapsed = np.concatenate((elapsed, knots[(knots > elapsed[0]) &
                                                 (knots < elapsed[-1])]))
        rtt = profile.rtt_ps(elapsed)
        # one pulse of margin covers the spread of the array response
        rtt_lo = math.floor(rtt.min()) - pulse_period
        rtt_hi = math.ceil(rtt.max()) + pulse_period
        slant_range = float(profile.range_at(
            0.5 * (first_emission + last_emission) / PS_PER_S))
        p = detection_probability(self._mu_sat, self._downlink(slant_range),
                                  t_rx)
        pulses = []
        for shift in (0, schedule.period_ps):
            first = max(-(-(rx_open + shift - tx_open - rtt_hi) //
                          pulse_period), 0)
            last = min(-(-(rx_close + shift - tx_open - rtt_lo) //
                         pulse_period), schedule.pulses_per_period)
            if last <= first:
                continue
            n = rng.binomial(last - first, p)
            if n:
                pulses.append(first + rng.choice(last - first, size=n,
                                                 replace=False))
        if not pulses:
            return np.array([], dtype=np.int64)
        pulses = np.unique(np.concatenate(pulses))
        t_ref = self._arrivals.arrival(self._arrivals.emission(chunk, pulses))
        times = t_ref + np.rint(response.sample(len(t_ref), rng)).astype(
            np.int64)
        return np.unique(times[schedule.shutter_open(times)])

    def _uniform(self, lo, hi, rate, rng):
        if hi <= lo or rate == 0.0:
            return np.array([], dtype=np.int64)
        n = rng.poisson(rate * (hi - lo) / PS_PER_S)
        return np.unique(rng.integers(lo, hi, size=n, dtype=np.int64))

    def _fluorescence(self, lo, hi, scale, rng):
        """Thinning of an exponentially decaying process, with a piecewise
        constant envelope that restarts at every SLR firing.
        """
        amplitude = self._fluorescence_amplitude * scale
        if hi <= lo or amplitude == 0.0:
            return np.array([], dtype=np.int64)
        times = []
        for start, stop in _split_at_firing(lo, hi, self._schedule):
            envelope = amplitude * float(self._noise.decay(start,
                                                           self._schedule))
            n = rng.poisson(envelope * (stop - start) / PS_PER_S)
            candidates = rng.integers(start, stop, size=n, dtype=np.int64)
            accept = rng.random(n) * envelope <= amplitude * \
                self._noise.decay(candidates, self._schedule)
            times.append(candidates[accept])
        return np.unique(np.concatenate(times))


def simulate_pass(scenario, duration, seed, workers=1, dead_time=None,
                  verbose=False):
    """Simulate the time-tagged detections of a pass described by a
    scenario.
    """
    if not float(duration) > 0.0:
        raise UsageError("Could not simulate pass: duration must be "
                         "positive, got {} s.".format(duration))
    simulator = Simulator(scenario.schedule, scenario.range_profile,
                          scenario.receivers, scenario.response(),
                          scenario.noise, scenario.mu_sat,
                          scenario.downlink_transmittance, workers=workers,
                          dead_time=dead_time, verbose=verbose)
    return simulator.simulate(duration, seed,
                              metadata={'scenario_hash': scenario.hash})
