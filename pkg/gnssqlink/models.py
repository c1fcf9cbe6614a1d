# -*- coding: utf-8 -*-
"""Satellites equipped with CCR arrays.

Satellites equipped with CCR arrays provide individual descriptions of the
following models:

- generic satellite with a flat CCR array;
- GLONASS-K1 satellite (holed circular array, e.g., Glonass-134);
- GLONASS-M satellite (rectangular array, e.g., Glonass-131).

Array sizes and cross-sections of the presets are nominal values; the
cross-sections match the far field diffraction model of their CCRs, so that
both diffraction models agree.
"""

from gnssqlink.base import Component
from gnssqlink.constants import UNCOATED_REFLECTIVITY
from gnssqlink.exceptions import UsageError
from gnssqlink.geometry import ArrayGeometry
from gnssqlink.objects import CcrArraySpec, CcrSpec


class SatelliteModel(Component):
    """Generic satellite with a flat array of identical CCRs.

    The CCR positions are loaded from a CSV file when one is given, and are
    otherwise populated according to the array shape, with a CCR pitch equal
    to the CCR diameter for disks and rectangles.
    """

    def __init__(self, ccr_diameter, effective_area, cross_section,
                 reflectivity=UNCOATED_REFLECTIVITY, coated=False,
                 shape='ring', ccr_count=None, outer_diameter=None,
                 inner_diameter=0.0, width=None, height=None,
                 geometry_csv=None, name=None):
        super(SatelliteModel, self).__init__(name)
        ccr = CcrSpec(ccr_diameter, reflectivity, coated)
        if geometry_csv is not None:
            geometry = ArrayGeometry.from_csv(
                geometry_csv, shape, outer_diameter=outer_diameter,
                width=width, height=height)
        elif shape == 'ring':
            if ccr_count is None:
                raise UsageError("Could not populate ring array: CCR count "
                                 "is needed.")
            geometry = ArrayGeometry.ring(outer_diameter, ccr_count)
        elif shape == 'disk':
            geometry = ArrayGeometry.disk(outer_diameter, ccr_diameter,
                                          inner_diameter)
        else:
            geometry = ArrayGeometry.rectangle(width, height, ccr_diameter)
        self._geometry = geometry
        self._array = CcrArraySpec(
            ccr, len(geometry) if ccr_count is None else ccr_count,
            effective_area, cross_section, shape,
            outer_diameter=outer_diameter, inner_diameter=inner_diameter,
            width=width, height=height, name=name)

    @property
    def array(self):
        """CCR array mounted on the satellite."""
        return self._array

    @property
    def ccr(self):
        """Single CCR of the array."""
        return self._array.ccr

    @property
    def geometry(self):
        """Positions of the CCRs in the array plane."""
        return self._geometry


class GlonassK1(SatelliteModel):
    """GLONASS-K1 satellite; the array is modelled as a ring of CCRs."""

    def __init__(self, **kwargs):
        params = dict(ccr_diameter=0.026, effective_area=0.025,
                      cross_section=4.3e7, shape='ring', ccr_count=48,
                      outer_diameter=0.42, name="GLONASS-K1")
        params.update(kwargs)
        super(GlonassK1, self).__init__(**params)


class GlonassM(SatelliteModel):
    """GLONASS-M satellite with a rectangular array of CCRs."""

    def __init__(self, **kwargs):
        params = dict(ccr_diameter=0.026, effective_area=0.03,
                      cross_section=5.2e7, shape='rectangle', width=0.5,
                      height=0.3, name="GLONASS-M")
        params.update(kwargs)
        super(GlonassM, self).__init__(**params)


SATELLITE_MODELS = {'glonass-k1': GlonassK1, 'glonass-m': GlonassM}


def get_satellite_model(model, **overrides):
    """Retrieve a satellite preset, with individual parameters overridden."""
    try:
        cls = SATELLITE_MODELS[str(model).lower()]
    except KeyError:
        raise UsageError("Satellite model {0} is not supported; expected one "
                         "of {1}.".format(model,
                                          ", ".join(sorted(SATELLITE_MODELS))))
    return cls(**overrides)
