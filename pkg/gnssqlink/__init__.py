# -*- coding: utf-8 -*-
"""GNSS-QLink: single-photon exchange with GNSS retroreflectors.

GNSS-QLink models the two-way single-photon link between a ground station
and the corner-cube retroreflector (CCR) array of a GNSS satellite: the
down-link budget, the temporal signature of the array, the Monte Carlo
simulation of time-tagged detections, and the detection statistics of a pass
together with the projection of an upgraded link.
"""

__version__ = '0.1.0'

from .analysis import (Histogram, IntervalStats, PassSummary, ResidualSet,
                       estimate_pass_summary, filter_intervals,
                       interval_stats, period_occupancy, residuals,
                       windowed_counts)
from .ccr_response import (ArrayResponse, TemporalProfile,
                           array_impulse_response, ccr_time_offsets,
                           lobe_displacement, peak_to_peak)
from .geometry import ArrayGeometry
from .link_budget import (LinkBaseline, LinkBudget, LinkGeometry,
                          UpgradePlan, diffraction_cross_section,
                          diffraction_ffdp, downlink_budget, estimate_mu_sat,
                          project_upgraded_link)
from .models import GlonassK1, GlonassM, SatelliteModel
from .objects import CcrArraySpec, CcrSpec, ReceiverSpec, Telescope
from .protocol import (ExpectedArrivals, ProtocolSchedule, RangeProfile,
                       effective_duty_cycle, expected_arrival)
from .scenario import Scenario, load_scenario, load_upgrade_plan
from .simulator import NoiseModel, Simulator, simulate_pass
from .tags import TagStream, read_tag_stream, write_tag_stream
from .units import (GaussianPulse, LossDb, Transmittance,
                    db_from_transmittance, transmittance_from_db)
from . import (analysis, ccr_response, geometry, link_budget, models,
               objects, protocol, scenario, simulator, tags, units)
