# -*- coding: utf-8 -*-
"""Optical components of the two-way link.

Optical components of the two-way link provide individual descriptions of
the following components:

- corner-cube retroreflector (CCR);
- array of corner-cube retroreflectors mounted on a satellite;
- ground telescope;
- receiving channel (optics and single-photon detector).
"""

import math

from gnssqlink.base import Component, check_fraction, check_positive
from gnssqlink.exceptions import DomainError, UsageError
from gnssqlink.units import LossDb, transmittance_from_db

ARRAY_SHAPES = ('ring', 'rectangle', 'disk')


class CcrSpec(Component):
    """Corner-cube retroreflector."""

    def __init__(self, diameter, reflectivity, coated=False, name=None):
        super(CcrSpec, self).__init__(name)
        self._diameter = check_positive(diameter, "CCR diameter")
        if self._diameter >= 0.2:
            raise DomainError("CCR diameter must be below 0.2 m, got {} m."
                              "".format(self._diameter))
        self._reflectivity = check_fraction(reflectivity, "CCR reflectivity")
        self._coated = bool(coated)

    @property
    def area(self):
        """CCR aperture area (m^2)."""
        return math.pi * (self._diameter / 2.0)**2

    @property
    def coated(self):
        """Whether the CCR back faces are coated."""
        return self._coated

    @property
    def diameter(self):
        """CCR diameter (m)."""
        return self._diameter

    @property
    def reflectivity(self):
        """CCR reflectivity."""
        return self._reflectivity


class CcrArraySpec(Component):
    """Array of corner-cube retroreflectors mounted on a satellite."""

    def __init__(self, ccr, count, effective_area, cross_section,
                 shape='ring', outer_diameter=None, inner_diameter=0.0,
                 width=None, height=None, name=None):
        super(CcrArraySpec, self).__init__(name)
        if not isinstance(ccr, CcrSpec):
            raise TypeError("Type of CCR is not supported.")
        if int(count) <= 0:
            raise DomainError(
                "CCR count must be positive, got {}.".format(count))
        if shape not in ARRAY_SHAPES:
            raise UsageError("Array shape {0} is not supported; expected one "
                             "of {1}.".format(shape, ", ".join(ARRAY_SHAPES)))
        self._ccr = ccr
        self._count = int(count)
        self._effective_area = check_positive(effective_area,
                                              "Array effective area")
        if self._effective_area > self._count * ccr.area * (1.0 + 1e-12):
            raise DomainError(
                "Array effective area {0} m^2 exceeds the total aperture of "
                "{1} CCRs.".format(self._effective_area, self._count))
        self._cross_section = check_positive(cross_section,
                                             "Array cross-section")
        self._shape = shape
        if shape == 'rectangle':
            self._width = check_positive(width, "Array width")
            self._height = check_positive(height, "Array height")
            self._outer_diameter = math.hypot(self._width, self._height)
            self._inner_diameter = 0.0
        else:
            self._outer_diameter = check_positive(outer_diameter,
                                                  "Array outer diameter")
            self._inner_diameter = check_positive(inner_diameter or 0.0,
                                                  "Array inner diameter",
                                                  allow_zero=True)
            if self._inner_diameter >= self._outer_diameter:
                raise DomainError("Array inner diameter must be smaller than "
                                  "its outer diameter.")
            self._width = self._height = None

    @property
    def ccr(self):
        """Single CCR of the array."""
        return self._ccr

    @property
    def count(self):
        """Number of CCRs."""
        return self._count

    @property
    def cross_section(self):
        """Array optical cross-section (m^2)."""
        return self._cross_section

    @property
    def effective_area(self):
        """Array effective area (m^2)."""
        return self._effective_area

    @property
    def height(self):
        """Height of a rectangular array (m)."""
        return self._height

    @property
    def inner_diameter(self):
        """Inner diameter of a ring or disk array (m)."""
        return self._inner_diameter

    @property
    def outer_diameter(self):
        """Outer diameter of a ring or disk array, or the diagonal of a
        rectangular one (m).
        """
        return self._outer_diameter

    @property
    def shape(self):
        """Array shape tag."""
        return self._shape

    @property
    def solid_angle(self):
        """Solid angle (sr) of the top-hat far field pattern implied by the
        cross-section.
        """
        return 4.0 * math.pi * self._ccr.reflectivity * \
            self._effective_area / self._cross_section

    @property
    def width(self):
        """Width of a rectangular array (m)."""
        return self._width


class Telescope(Component):
    """Ground telescope."""

    def __init__(self, diameter, name=None):
        super(Telescope, self).__init__(name)
        self._diameter = check_positive(diameter, "Telescope diameter")

    @property
    def area(self):
        """Telescope collecting area (m^2)."""
        return math.pi * (self._diameter / 2.0)**2

    @property
    def diameter(self):
        """Telescope aperture diameter (m)."""
        return self._diameter


class ReceiverSpec(Component):
    """Receiving channel made of optics and a single-photon detector."""

    def __init__(self, optics_loss, detector_efficiency, dark_rate,
                 jitter_fwhm, channel_id=0, filter_band=3.0, name=None):
        super(ReceiverSpec, self).__init__(name)
        self._optics_loss = LossDb(optics_loss)
        self._detector_efficiency = check_fraction(detector_efficiency,
                                                   "Detector efficiency")
        self._dark_rate = check_positive(dark_rate, "Dark count rate",
                                         allow_zero=True)
        self._jitter_fwhm = check_positive(jitter_fwhm, "Detector jitter")
        if int(channel_id) < 0:
            raise DomainError(
                "Channel ID must be non-negative, got {}.".format(channel_id))
        self._channel_id = int(channel_id)
        self._filter_band = check_positive(filter_band, "Filter band")

    @property
    def channel_id(self):
        """Time-tagger channel of the detector."""
        return self._channel_id

    @property
    def dark_rate(self):
        """Detector dark count rate (Hz)."""
        return self._dark_rate

    @property
    def detector_efficiency(self):
        """Detector quantum efficiency."""
        return self._detector_efficiency

    @property
    def filter_band(self):
        """FWHM of the spectral filter (nm)."""
        return self._filter_band

    @property
    def jitter_fwhm(self):
        """Detector jitter FWHM (ps)."""
        return self._jitter_fwhm

    @property
    def optics_loss(self):
        """Loss through the receiving optics (dB)."""
        return self._optics_loss

    @property
    def optics_transmittance(self):
        """Transmittance of the receiving optics."""
        return transmittance_from_db(self._optics_loss)
