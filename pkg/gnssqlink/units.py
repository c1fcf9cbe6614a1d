# -*- coding: utf-8 -*-
"""Units, dB bookkeeping and pulse shapes.

Units, dB bookkeeping and pulse shapes provide the following functionality:

- representing transmittances and losses in dB;
- converting a transmittance to a loss in dB and back;
- converting a Gaussian full width at half maximum to a standard deviation;
- representing a Gaussian pulse (density, distribution, sampling).

All times are picoseconds, distances meters and rates hertz. Conversions
accept scalars and numpy arrays; scalars come back as Transmittance or LossDb.
"""

import numpy as np
from scipy.special import ndtr

from gnssqlink.constants import FWHM_PER_SIGMA
from gnssqlink.exceptions import DomainError


class Transmittance(float):
    """Dimensionless transmitted fraction in (0, 1]."""

    def __new__(cls, value):
        value = float(value)
        if not 0.0 < value <= 1.0:
            raise DomainError(
                "Transmittance must lie in (0, 1], got {}.".format(value))
        return super(Transmittance, cls).__new__(cls, value)

    def __repr__(self):
        return "Transmittance({!r})".format(float(self))


class LossDb(float):
    """Non-negative loss in decibels."""

    def __new__(cls, value):
        value = float(value)
        if not value >= 0.0:
            raise DomainError(
                "Loss must be non-negative, got {} dB.".format(value))
        return super(LossDb, cls).__new__(cls, value)

    def __repr__(self):
        return "LossDb({!r})".format(float(self))


def db_from_transmittance(t):
    """Convert a transmittance to a loss in dB."""
    if np.ndim(t):
        t = np.asarray(t, dtype=float)
        if np.any((t <= 0.0) | (t > 1.0)):
            raise DomainError("Transmittance must lie in (0, 1].")
        return -10.0 * np.log10(t)
    t = Transmittance(t)
    return LossDb(abs(-10.0 * np.log10(t)))  # abs() turns -0.0 into 0.0


def transmittance_from_db(l):
    """Convert a loss in dB to a transmittance."""
    if np.ndim(l):
        l = np.asarray(l, dtype=float)
        if np.any(~(l >= 0.0)):
            raise DomainError("Loss must be non-negative.")
        return np.power(10.0, -l / 10.0)
    l = LossDb(l)
    return Transmittance(10.0 ** (-l / 10.0))


def fwhm_to_sigma(fwhm):
    """Convert a Gaussian full width at half maximum to a standard
    deviation.
    """
    fwhm = float(fwhm)
    if not fwhm > 0.0:
        raise DomainError("FWHM must be positive, got {} ps.".format(fwhm))
    return fwhm / FWHM_PER_SIGMA


class GaussianPulse(object):
    """Gaussian pulse parametrized by its FWHM (ps) and center (ps)."""

    def __init__(self, fwhm, center=0.0):
        self._sigma = fwhm_to_sigma(fwhm)
        self._fwhm = float(fwhm)
        self._center = float(center)

    def __repr__(self):
        return "GaussianPulse(fwhm={0}, center={1})".format(self._fwhm,
                                                            self._center)

    @property
    def center(self):
        """Pulse center (ps)."""
        return self._center

    @property
    def fwhm(self):
        """Pulse full width at half maximum (ps)."""
        return self._fwhm

    @property
    def sigma(self):
        """Pulse standard deviation (ps)."""
        return self._sigma

    def broadened(self, jitter_fwhm):
        """Pulse convolved with Gaussian jitter of the given FWHM."""
        sigma = np.hypot(self._sigma, fwhm_to_sigma(jitter_fwhm))
        return GaussianPulse(sigma * FWHM_PER_SIGMA, self._center)

    def pdf(self, t):
        """Probability density (1/ps) at time t (ps)."""
        z = (np.asarray(t, dtype=float) - self._center) / self._sigma
        return np.exp(-0.5 * z * z) / (self._sigma * np.sqrt(2.0 * np.pi))

    def cdf(self, t):
        """Cumulative distribution at time t (ps)."""
        return ndtr((np.asarray(t, dtype=float) - self._center) / self._sigma)

    def sample(self, size, rng):
        """Draw arrival times (ps) from the pulse."""
        return rng.normal(self._center, self._sigma, size)
