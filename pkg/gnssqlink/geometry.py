# -*- coding: utf-8 -*-
"""Geometry of CCR arrays.

Geometry of CCR arrays provides the positions of the CCRs in the plane of a
flat array, together with the following functionality:

- populating a ring of CCRs uniformly in angle;
- populating a disk, optionally holed, with hexagonally packed CCRs;
- populating a rectangle with a square grid of CCRs;
- loading CCR positions from a CSV file (columns x_m, y_m);
- building the geometry described by an array specification.
"""

import math

import numpy as np
import pandas as pd

from gnssqlink.exceptions import DataError, UsageError
from gnssqlink.objects import ARRAY_SHAPES

_FIT_TOLERANCE = 1e-9  # m


class ArrayGeometry(object):
    """Positions (m) of the CCRs in the plane of a flat array."""

    def __init__(self, positions, shape='ring', outer_diameter=None,
                 width=None, height=None):
        positions = np.atleast_2d(np.array(positions, dtype=float))
        if positions.size == 0:
            raise UsageError("Array geometry needs at least one CCR.")
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise UsageError("CCR positions must be (x, y) pairs.")
        if shape not in ARRAY_SHAPES:
            raise UsageError("Array shape {} is not supported.".format(shape))
        if shape == 'rectangle':
            if width is not None and height is not None and (
                    np.any(np.abs(positions[:, 0]) > width/2 + _FIT_TOLERANCE)
                    or np.any(np.abs(positions[:, 1]) >
                              height/2 + _FIT_TOLERANCE)):
                raise UsageError("CCR positions exceed the {0} x {1} m "
                                 "rectangle.".format(width, height))
        elif outer_diameter is not None and np.any(
                np.hypot(positions[:, 0], positions[:, 1]) >
                outer_diameter/2 + _FIT_TOLERANCE):
            raise UsageError("CCR positions exceed the outer diameter of {} m."
                             "".format(outer_diameter))
        self._positions = positions
        self._positions.flags.writeable = False
        self._shape = shape
        self._outer_diameter = outer_diameter
        self._width = width
        self._height = height

    def __len__(self):
        return len(self._positions)

    def __repr__(self):
        return "<ArrayGeometry {0} of {1} CCRs>".format(self._shape,
                                                        len(self))

    @property
    def outer_diameter(self):
        """Declared outer diameter (m), if any."""
        return self._outer_diameter

    @property
    def positions(self):
        """CCR positions (m), one (x, y) row per CCR."""
        return self._positions

    @property
    def shape(self):
        """Array shape tag."""
        return self._shape

    @classmethod
    def ring(cls, outer_diameter, count):
        """Ring of CCR centers populated uniformly in angle."""
        angles = 2.0 * math.pi * np.arange(int(count)) / int(count)
        radius = outer_diameter / 2.0
        return cls(np.column_stack((radius * np.cos(angles),
                                    radius * np.sin(angles))),
                   'ring', outer_diameter=outer_diameter)

    @classmethod
    def disk(cls, outer_diameter, pitch, inner_diameter=0.0):
        """Disk, holed if an inner diameter is given, populated with
        hexagonally packed CCRs whose apertures fit in the annulus.
        """
        r_max = outer_diameter/2.0 - pitch/2.0
        r_min = inner_diameter/2.0 + pitch/2.0 if inner_diameter else 0.0
        n = int(math.ceil(r_max / pitch)) + 1
        i, j = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1))
        x = pitch * (i + 0.5 * (j % 2)).ravel()
        y = pitch * math.sqrt(3.0) / 2.0 * j.ravel()
        r = np.hypot(x, y)
        keep = (r <= r_max + _FIT_TOLERANCE) & (r >= r_min - _FIT_TOLERANCE)
        if not np.any(keep):
            raise UsageError("No CCR of {0} m fits in the disk of {1} m."
                             "".format(pitch, outer_diameter))
        return cls(np.column_stack((x[keep], y[keep])), 'disk',
                   outer_diameter=outer_diameter)

    @classmethod
    def rectangle(cls, width, height, pitch):
        """Rectangle populated with a square grid of CCRs."""
        nx = max(int(math.floor(width / pitch + _FIT_TOLERANCE)), 1)
        ny = max(int(math.floor(height / pitch + _FIT_TOLERANCE)), 1)
        x = (np.arange(nx) - (nx - 1) / 2.0) * pitch
        y = (np.arange(ny) - (ny - 1) / 2.0) * pitch
        xx, yy = np.meshgrid(x, y)
        return cls(np.column_stack((xx.ravel(), yy.ravel())), 'rectangle',
                   width=width, height=height)

    @classmethod
    def from_csv(cls, filename, shape='ring', **kwargs):
        """Load CCR positions from a CSV file with columns x_m and y_m."""
        try:
            table = pd.read_csv(filename, comment='#')
        except (OSError, ValueError) as err:
            raise DataError("Could not load array geometry from {0}: {1}"
                            "".format(filename, err))
        missing = {'x_m', 'y_m'} - set(table.columns)
        if missing:
            raise DataError("Could not load array geometry from {0}: missing "
                            "columns {1}.".format(filename,
                                                  ", ".join(sorted(missing))))
        return cls(table[['x_m', 'y_m']].to_numpy(dtype=float), shape,
                   **kwargs)

    @classmethod
    def from_spec(cls, spec):
        """Geometry described by an array specification."""
        if spec.shape == 'ring':
            return cls.ring(spec.outer_diameter, spec.count)
        if spec.shape == 'disk':
            return cls.disk(spec.outer_diameter, spec.ccr.diameter,
                            spec.inner_diameter)
        return cls.rectangle(spec.width, spec.height, spec.ccr.diameter)
