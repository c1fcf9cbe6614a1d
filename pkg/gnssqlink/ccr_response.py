# -*- coding: utf-8 -*-
"""Far field lobes and temporal signature of flat CCR arrays.

Far field lobes and temporal signature of flat CCR arrays provide the
following functionality:

- evaluating the displacement of the lateral lobes of the far field pattern
  of an uncoated corner cube;
- checking whether the velocity aberration places the telescope on a lateral
  lobe;
- evaluating the per-CCR two-way delays under oblique incidence;
- evaluating the temporal impulse response ("signature") of an array;
- measuring the peak-to-peak distance of a bimodal signature.

Each CCR is assumed not to change the temporal shape of the pulse, only to
delay it according to its position in the array.
"""

import logging
import math

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.optimize import curve_fit
from scipy.signal import find_peaks
from scipy.special import ndtr

from gnssqlink.base import check_positive
from gnssqlink.constants import (GNSS_VELOCITY_ABERRATION, MIN_SEPARATION_PS,
                                 PS_PER_S, SPEED_OF_LIGHT,
                                 TIR_LOBE_DISPLACEMENT)
from gnssqlink.exceptions import DomainError, UsageError

logger = logging.getLogger(__name__)

_PROFILE_HALF_SPAN = 8.0  # profile extent beyond the extreme CCRs, in sigma
_RING_NODES = 96  # azimuth samples of the ring signature model
_RESOLVED_DIP = 0.1  # dip, relative to the lower maximum, of resolved lobes


def lobe_displacement(wavelength, ccr_diameter):
    """Angular displacement (rad) of the lateral lobes from the center of
    the far field pattern.
    """
    wavelength = check_positive(wavelength, "Wavelength")
    ccr_diameter = check_positive(ccr_diameter, "CCR diameter")
    return TIR_LOBE_DISPLACEMENT * wavelength / ccr_diameter


def velocity_aberration_check(theta_d, v_aberration=GNSS_VELOCITY_ABERRATION,
                              tolerance=5e-6):
    """Retrieve whether the telescope sits on a lateral lobe, and the gap
    (rad) between lobe displacement and velocity aberration.
    """
    gap = abs(float(theta_d) - float(v_aberration))
    return gap <= tolerance, gap


def _unit_vector(azimuth):
    return np.array([math.cos(azimuth), math.sin(azimuth)])


def _check_incidence(incidence):
    incidence = float(incidence)
    if not 0.0 <= incidence < math.pi / 2.0:
        raise DomainError("Incidence must lie in [0, pi/2), got {} rad."
                          "".format(incidence))
    return incidence


def max_spread_azimuth(geom, samples=360):
    """Azimuth (rad) of the line-of-sight projection which maximizes the
    spread of the CCR delays.
    """
    azimuths = math.pi * np.arange(samples) / samples
    projections = geom.positions @ np.vstack((np.cos(azimuths),
                                              np.sin(azimuths)))
    spans = projections.max(axis=0) - projections.min(axis=0)
    return float(azimuths[np.argmax(spans)])


def ccr_time_offsets(geom, incidence, azimuth=None):
    """Per-CCR two-way delays (ps), re-centered to zero mean."""
    incidence = _check_incidence(incidence)
    if azimuth is None:
        azimuth = max_spread_azimuth(geom)
    delays = 2.0 * (geom.positions @ _unit_vector(azimuth)) * \
        math.sin(incidence) / SPEED_OF_LIGHT * PS_PER_S
    return delays - delays.mean()


def signature_span(geom, incidence, azimuth=None):
    """Spread (ps) between the earliest and the latest CCR delay."""
    offsets = ccr_time_offsets(geom, incidence, azimuth)
    return float(offsets.max() - offsets.min())


class ArrayResponse(object):
    """Temporal response of an array: one pulse per CCR, delayed by the CCR
    offset and weighted by the CCR weight.
    """

    def __init__(self, offsets, pulse, weights=None):
        offsets = np.asarray(offsets, dtype=float)
        if offsets.size == 0:
            raise UsageError("Array response needs at least one CCR.")
        if weights is None:
            weights = np.ones_like(offsets)
        weights = np.asarray(weights, dtype=float)
        if weights.shape != offsets.shape or np.any(weights < 0.0) or \
                weights.sum() <= 0.0:
            raise UsageError("CCR weights must be non-negative, one per CCR.")
        self._offsets = offsets + pulse.center
        self._weights = weights / weights.sum()
        self._pulse = pulse

    @classmethod
    def from_geometry(cls, geom, incidence, pulse, azimuth=None,
                      weights=None):
        """Response of an array geometry under the given incidence."""
        return cls(ccr_time_offsets(geom, incidence, azimuth), pulse, weights)

    @property
    def offsets(self):
        """Per-CCR delays (ps)."""
        return self._offsets

    @property
    def pulse(self):
        """Pulse reflected by each CCR."""
        return self._pulse

    @property
    def sigma(self):
        """Standard deviation (ps) of the pulse of a single CCR."""
        return self._pulse.sigma

    def broadened(self, jitter_fwhm):
        """Response convolved with Gaussian detector jitter."""
        pulse = self._pulse.broadened(jitter_fwhm)
        return ArrayResponse(self._offsets - self._pulse.center, pulse,
                             self._weights)

    def cdf(self, t):
        """Cumulative distribution at time t (ps)."""
        t = np.asarray(t, dtype=float)
        z = (t[..., np.newaxis] - self._offsets) / self.sigma
        return ndtr(z) @ self._weights

    def pdf(self, t):
        """Probability density (1/ps) at time t (ps)."""
        t = np.asarray(t, dtype=float)
        z = (t[..., np.newaxis] - self._offsets) / self.sigma
        return (np.exp(-0.5 * z * z) @ self._weights) / \
            (self.sigma * math.sqrt(2.0 * math.pi))

    def bin_masses(self, edges):
        """Probability mass between consecutive bin edges (ps)."""
        z = (np.asarray(edges, dtype=float)[:, np.newaxis] - self._offsets) / \
            self.sigma
        left, right = z[:-1], z[1:]
        # right tails from the survival function to avoid cancellation
        masses = np.where(left > 0.0, ndtr(-left) - ndtr(-right),
                          ndtr(right) - ndtr(left))
        return np.clip(masses, 0.0, None) @ self._weights

    def sample(self, size, rng):
        """Draw delays (ps) from the response."""
        ccr = rng.choice(len(self._offsets), size=size, p=self._weights)
        return rng.normal(self._offsets[ccr], self.sigma)


class TemporalProfile(object):
    """Binned temporal distribution with bins of equal width (ps) starting
    at an origin (ps, left edge of the first bin).
    """

    def __init__(self, bin_width, origin, densities):
        self._bin_width = check_positive(bin_width, "Bin width")
        self._origin = float(origin)
        densities = np.asarray(densities, dtype=float)
        if densities.size == 0 or np.any(densities < 0.0):
            raise UsageError("Profile densities must be non-negative.")
        self._densities = densities

    def __len__(self):
        return len(self._densities)

    @property
    def area(self):
        """Integral of the profile."""
        return float(self._densities.sum() * self._bin_width)

    @property
    def bin_width(self):
        """Bin width (ps)."""
        return self._bin_width

    @property
    def centers(self):
        """Bin centers (ps)."""
        return self._origin + self._bin_width * \
            (np.arange(len(self._densities)) + 0.5)

    @property
    def densities(self):
        """Densities (1/ps) of the bins."""
        return self._densities

    @property
    def origin(self):
        """Left edge of the first bin (ps)."""
        return self._origin

    def with_background(self, level):
        """Profile with a uniform background floor (1/ps) added."""
        level = check_positive(level, "Background level", allow_zero=True)
        return TemporalProfile(self._bin_width, self._origin,
                               self._densities + level)


def array_impulse_response(geom, incidence, azimuth, pulse, bin_width,
                           weights=None, background=0.0):
    """Temporal impulse response of an array: normalized sum of the pulses
    reflected by all CCRs, binned with bins centered on multiples of the bin
    width.
    """
    if bin_width > pulse.fwhm / 4.0:
        raise UsageError("Bin width of {0} ps is too coarse for a pulse of "
                         "{1} ps FWHM.".format(bin_width, pulse.fwhm))
    if len(geom) == 0:
        raise UsageError("Array geometry needs at least one CCR.")
    response = ArrayResponse.from_geometry(geom, incidence, pulse, azimuth,
                                           weights)
    lo = response.offsets.min() - _PROFILE_HALF_SPAN * response.sigma
    hi = response.offsets.max() + _PROFILE_HALF_SPAN * response.sigma
    first = int(math.floor(lo / bin_width))
    last = int(math.ceil(hi / bin_width))
    edges = (np.arange(first, last + 2) - 0.5) * bin_width
    masses = response.bin_masses(edges)
    profile = TemporalProfile(bin_width, edges[0],
                              masses / (masses.sum() * bin_width))
    logger.debug("Impulse response of %r at %.2f deg: %d bins", geom,
                 math.degrees(incidence), len(profile))
    if background:
        profile = profile.with_background(background)
    return profile


def _ring_masses(edges, center, half_span, sigma):
    phi = (np.arange(_RING_NODES) + 0.5) * (2.0 * math.pi / _RING_NODES)
    offsets = center + half_span * np.cos(phi)
    cdf = ndtr((edges[:, np.newaxis] - offsets) / sigma)
    return np.diff(cdf, axis=0).mean(axis=1)


def _fit_ring_lobes(profile, first, second):
    """Separation (ps) of the lobes of a ring signature fitted to a profile.

    The model spreads the delays uniformly in azimuth over a ring of the
    given half span, blurs them with a Gaussian and adds a uniform floor.
    Returns None when the fit does not converge.
    """
    densities = np.asarray(profile.densities, dtype=float)
    width = profile.bin_width
    centers = profile.centers
    edges = profile.origin + width * np.arange(len(densities) + 1)

    def model(_, center, half_span, sigma, amplitude, floor):
        return amplitude * _ring_masses(edges, center, half_span, sigma) / \
            width + floor

    floor = float(densities.min())
    signal = densities - floor
    amplitude = float(signal.sum() * width)
    mean = float(np.sum(signal * centers) / signal.sum())
    variance = float(np.sum(signal * (centers - mean)**2) / signal.sum())
    half_span = 0.5 * abs(centers[second] - centers[first])
    sigma = math.sqrt(max(variance - 0.5 * half_span**2, width**2))
    p0 = [0.5 * (centers[first] + centers[second]), half_span, sigma,
          amplitude, floor]
    bounds = ([centers[0], 0.0, 1e-3 * width, 0.0, 0.0],
              [centers[-1], centers[-1] - centers[0], np.inf, np.inf,
               np.inf])
    try:
        params, _ = curve_fit(model, centers, densities, p0=p0,
                              bounds=bounds, x_scale='jac')
    except (RuntimeError, ValueError) as err:
        logger.debug("Ring signature fit failed: %s", err)
        return None
    if not np.all(np.isfinite(params)):
        return None
    return 2.0 * float(params[1])


def peak_to_peak(profile, min_separation=MIN_SEPARATION_PS, smoothing=30.0,
                 prominence=0.02):
    """Distance (ps) between the two highest local maxima of a profile
    separated by at least min_separation, or 0 if only one peak exists.

    Local maxima are searched after boxcar smoothing over the given width
    (ps), skipped for bins at least as wide; maxima whose prominence is below
    the given fraction of the highest density are ignored. Two maxima still
    joined by a shallow dip are blurred lobes: their distance is that of the
    lobes of a ring signature fitted to the profile.
    """
    densities = np.asarray(profile.densities, dtype=float)
    if densities.size == 0:
        raise UsageError("Could not measure peak-to-peak distance: empty "
                         "profile.")
    size = int(round(smoothing / profile.bin_width)) if smoothing else 0
    if size > 1:
        densities = uniform_filter1d(densities, size=size, mode='nearest')
    top = densities.max()
    if top <= 0.0:
        return 0.0
    # padded so that maxima in the first and last bins are found
    floor = densities.min()
    padded = np.concatenate(([floor], densities, [floor]))
    peaks, _ = find_peaks(padded, prominence=prominence * top)
    peaks = peaks - 1
    if len(peaks) < 2:
        return 0.0
    peaks = peaks[np.argsort(-densities[peaks], kind='stable')]
    highest = int(peaks[0])
    for other in peaks[1:]:
        other = int(other)
        separation = abs(other - highest) * profile.bin_width
        if separation < min_separation:
            continue
        first, second = sorted((highest, other))
        dip = densities[first:second + 1].min()
        if dip <= _RESOLVED_DIP * min(densities[first], densities[second]):
            return float(separation)
        lobes = _fit_ring_lobes(profile, first, second)
        return float(separation) if lobes is None else lobes
    return 0.0
