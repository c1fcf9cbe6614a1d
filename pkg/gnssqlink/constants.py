# -*- coding: utf-8 -*-
"""Assorted constants.

Assorted constants provide the following constants:

- physical constants and unit conversion factors;
- constants of the far field diffraction pattern of uncoated corner cubes;
- default parameters of the two-way single-photon exchange;
- substitute name for unnamed components.
"""

import math

SPEED_OF_LIGHT = 299792458.0  # m/s
PS_PER_S = 10**12
PS_PER_MS = 10**9
PS_PER_NS = 10**3
FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))  # 2.354820045...

TIR_CENTRAL_PEAK = 0.264  # central intensity of a TIR corner cube relative
                          # to a circular aperture of equivalent area
TIR_LATERAL_LOBE = 0.3  # intensity of the six lateral lobes relative to the
                        # central peak
TIR_LOBE_DISPLACEMENT = 1.4  # lobe displacement in units of lambda/D_CCR
UNCOATED_REFLECTIVITY = 0.93
GNSS_VELOCITY_ABERRATION = 26e-6  # rad
GNSS_RANGE_BOUNDS = (19000e3, 26000e3)  # m

ATMOSPHERE_LOSS_DB = 0.4  # clear sky at 532 nm
DUTY_CYCLE = 0.3
INTERVAL_S = 5.0
WINDOW_PS = 400
EXCLUSION_PS = 1000
THRESHOLD_HZ = 30.0
BIN_WIDTH_PS = 100
PROFILE_BIN_WIDTH_PS = 10
MIN_SEPARATION_PS = 150
FLUORESCENCE_HALF_LIFE_MS = 5.0

TRUTH_CLASSES = ('signal', 'dark', 'fluorescence', 'albedo')

EMPTY_NAME = "*Unnamed*"  # substitute name for a component whose name has
                          # not been specified during initialization
