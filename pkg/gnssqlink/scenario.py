# -*- coding: utf-8 -*-
"""Scenario and upgrade plan files.

Scenario and upgrade plan files provide the following functionality:

- loading and validating a scenario file (JSON, units in the key names);
- hashing a scenario for provenance;
- building the link geometry, budget, array response, protocol schedule,
  receivers and noise model described by a scenario;
- evaluating the link baseline of a scenario;
- loading an upgrade plan file.

A scenario has the sections geometry, satellite, transmitter, receivers,
protocol, noise and analysis, and the key downlink_model. Relative file
references resolve against the directory of the scenario file.
"""

import contextlib
import hashlib
import json
import logging
import math
import os

from gnssqlink.ccr_response import ArrayResponse, array_impulse_response
from gnssqlink.constants import (ATMOSPHERE_LOSS_DB, BIN_WIDTH_PS,
                                 DUTY_CYCLE, EXCLUSION_PS,
                                 FLUORESCENCE_HALF_LIFE_MS, INTERVAL_S,
                                 MIN_SEPARATION_PS, PROFILE_BIN_WIDTH_PS,
                                 THRESHOLD_HZ, WINDOW_PS)
from gnssqlink.exceptions import DomainError, ScenarioError, UsageError
from gnssqlink.link_budget import (LinkBaseline, LinkGeometry, UpgradePlan,
                                   downlink_budget, forward_detection_rate,
                                   receiver_transmittance, to_model_tag)
from gnssqlink.models import SatelliteModel, get_satellite_model
from gnssqlink.objects import ReceiverSpec, Telescope
from gnssqlink.protocol import ExpectedArrivals, ProtocolSchedule, RangeProfile
from gnssqlink.simulator import NoiseModel
from gnssqlink.units import GaussianPulse

logger = logging.getLogger(__name__)

_REQUIRED = object()

SECTIONS = ('geometry', 'satellite', 'transmitter', 'receivers', 'protocol',
            'noise', 'analysis', 'downlink_model')

# scenario key -> (satellite model parameter, factor to SI)
_SATELLITE_KEYS = {
    'ccr_diameter_mm': ('ccr_diameter', 1e-3),
    'reflectivity': ('reflectivity', None),
    'coated': ('coated', None),
    'ccr_count': ('ccr_count', None),
    'effective_area_m2': ('effective_area', None),
    'cross_section_m2': ('cross_section', None),
    'shape': ('shape', None),
    'outer_diameter_m': ('outer_diameter', None),
    'inner_diameter_m': ('inner_diameter', None),
    'width_m': ('width', None),
    'height_m': ('height', None),
    'geometry_csv': ('geometry_csv', None)
    }

_PLAN_KEYS = {
    'source_mu': 'source_mu',
    'tx_divergence_semi_angle_urad': 'tx_divergence_semi_angle',
    'diffraction_gain_db': 'diffraction_gain',
    'bs_removal_signal_factor': 'bs_removal_signal_factor',
    'filter_band_nm': 'filter_band',
    'albedo_scale': 'albedo_scale',
    'fluorescence_removed': 'fluorescence_removed',
    'dark_rate_hz': 'dark_rate',
    'window_ps': 'window',
    'rep_rate_mhz': 'rep_rate'
    }


@contextlib.contextmanager
def _section(key):
    """Report invalid parameters of a section as a scenario error naming
    the section.
    """
    try:
        yield
    except ScenarioError:
        raise
    except (DomainError, UsageError, TypeError) as err:
        raise ScenarioError(key, "is invalid ({})".format(
            str(err).rstrip('.')))


def _get(section, key, path, default=_REQUIRED, kind=float):
    if key not in section:
        if default is _REQUIRED:
            raise ScenarioError("{0}.{1}".format(path, key), "is missing")
        return default
    value = section[key]
    if kind is None or value is None:
        return value
    try:
        if kind is bool and not isinstance(value, bool):
            raise ValueError(value)
        if kind is float and isinstance(value, bool):
            raise ValueError(value)
        return kind(value)
    except (TypeError, ValueError):
        raise ScenarioError("{0}.{1}".format(path, key),
                            "has invalid value {!r}".format(value))


def _check_keys(section, allowed, path):
    if not isinstance(section, dict):
        raise ScenarioError(path, "must be an object")
    for key in sorted(section):
        if key not in allowed:
            raise ScenarioError("{0}.{1}".format(path, key), "is not "
                                "supported")


def scenario_hash(config):
    """SHA-256 of the canonical JSON of a configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class AnalysisParameters(object):
    """Parameters of the detection statistics."""

    def __init__(self, interval=INTERVAL_S, window=WINDOW_PS,
                 duty_cycle=DUTY_CYCLE, threshold=THRESHOLD_HZ,
                 bin_width=BIN_WIDTH_PS, exclusion=EXCLUSION_PS,
                 min_separation=MIN_SEPARATION_PS):
        self.interval = interval
        self.window = window
        self.duty_cycle = duty_cycle
        self.threshold = threshold
        self.bin_width = bin_width
        self.exclusion = exclusion
        self.min_separation = min_separation

    def as_dict(self):
        """Parameters as a plain dictionary."""
        return {'interval_s': self.interval, 'window_ps': self.window,
                'duty_cycle': self.duty_cycle,
                'threshold_hz': self.threshold,
                'bin_width_ps': self.bin_width,
                'exclusion_ps': self.exclusion,
                'min_separation_ps': self.min_separation}


class Scenario(object):
    """Scenario of a pass: link geometry, satellite, transmitter, receivers,
    protocol, noise and analysis parameters.
    """

    def __init__(self, config, base_dir='.', name=None):
        _check_keys(config, SECTIONS, 'scenario')
        self._config = config
        self._base_dir = base_dir
        self._name = name
        self._hash = scenario_hash(config)
        self._load_geometry(config.get('geometry', {}))
        self._load_satellite(config.get('satellite', {}))
        self._load_transmitter(config.get('transmitter', {}))
        self._load_receivers(config.get('receivers', _REQUIRED))
        self._load_protocol(config.get('protocol', {}))
        self._load_noise(config.get('noise', {}))
        self._load_analysis(config.get('analysis', {}))
        with _section('downlink_model'):
            self._model = to_model_tag(config.get('downlink_model', 'ffdp'))

    def __repr__(self):
        return "<Scenario {0} ({1})>".format(self._name, self._hash[:12])

    def _path(self, filename):
        if os.path.isabs(filename):
            return filename
        return os.path.join(self._base_dir, filename)

    def _load_geometry(self, section):
        path = 'geometry'
        _check_keys(section, ('wavelength_nm', 'telescope_diameter_m',
                              'slant_range_km', 'range_profile_csv',
                              'atmosphere_loss_db', 'incidence_deg',
                              'azimuth_deg'), path)
        with _section(path):
            self._wavelength = _get(section, 'wavelength_nm', path,
                                    532.0) * 1e-9
            self._telescope = Telescope(
                _get(section, 'telescope_diameter_m', path, 1.5),
                name="ground telescope")
            self._l_a = _get(section, 'atmosphere_loss_db', path,
                             ATMOSPHERE_LOSS_DB)
            self._incidence = math.radians(_get(section, 'incidence_deg',
                                                path, 0.0))
            azimuth = _get(section, 'azimuth_deg', path, None)
            self._azimuth = None if azimuth is None else math.radians(azimuth)
        csv = _get(section, 'range_profile_csv', path, None, kind=str)
        if csv is not None:
            with _section(path + '.range_profile_csv'):
                self._profile = RangeProfile.from_csv(self._path(csv))
        else:
            slant_range = _get(section, 'slant_range_km', path) * 1e3
            with _section(path + '.slant_range_km'):
                self._profile = RangeProfile.constant(slant_range)

    def _load_satellite(self, section):
        path = 'satellite'
        _check_keys(section, ('model',) + tuple(_SATELLITE_KEYS), path)
        params = {}
        for key, (name, factor) in _SATELLITE_KEYS.items():
            if key in section:
                kind = {'coated': bool, 'ccr_count': int, 'shape': str,
                        'geometry_csv': str}.get(key, float)
                value = _get(section, key, path, kind=kind)
                params[name] = value * factor if factor else value
        if 'geometry_csv' in params:
            params['geometry_csv'] = self._path(params['geometry_csv'])
        model = _get(section, 'model', path, None, kind=str)
        with _section(path):
            if model is not None:
                self._satellite = get_satellite_model(model, **params)
            else:
                for key in ('ccr_diameter_mm', 'effective_area_m2',
                            'cross_section_m2'):
                    _get(section, key, path)
                self._satellite = SatelliteModel(**params)

    def _load_transmitter(self, section):
        path = 'transmitter'
        _check_keys(section, ('rep_rate_mhz', 'pulse_fwhm_ps', 'mu_sat'),
                    path)
        with _section(path):
            self._rep_rate = _get(section, 'rep_rate_mhz', path, 100.0) * 1e6
            if not self._rep_rate > 0.0:
                raise ScenarioError(path + '.rep_rate_mhz', "must be "
                                    "positive")
            self._pulse = GaussianPulse(_get(section, 'pulse_fwhm_ps', path,
                                             100.0))
            self._mu_sat = _get(section, 'mu_sat', path)
            if self._mu_sat < 0.0:
                raise ScenarioError(path + '.mu_sat', "must be non-negative")

    def _load_receivers(self, receivers):
        path = 'receivers'
        if receivers is _REQUIRED:
            raise ScenarioError(path, "is missing")
        if not isinstance(receivers, list) or not receivers:
            raise ScenarioError(path, "must be a non-empty list")
        self._receivers = []
        for i, section in enumerate(receivers):
            item = "{0}[{1}]".format(path, i)
            _check_keys(section, ('channel', 'name', 'optics_loss_db',
                                  'efficiency', 'dark_rate_hz',
                                  'jitter_fwhm_ps', 'filter_band_nm'), item)
            with _section(item):
                self._receivers.append(ReceiverSpec(
                    _get(section, 'optics_loss_db', item),
                    _get(section, 'efficiency', item),
                    _get(section, 'dark_rate_hz', item),
                    _get(section, 'jitter_fwhm_ps', item, 40.0),
                    channel_id=_get(section, 'channel', item, i, kind=int),
                    filter_band=_get(section, 'filter_band_nm', item, 3.0),
                    name=_get(section, 'name', item, None, kind=str)))
        channels = [rx.channel_id for rx in self._receivers]
        if len(set(channels)) != len(channels):
            raise ScenarioError(path, "has duplicate channels")

    def _load_protocol(self, section):
        path = 'protocol'
        keys = ('period_ms', 'tx_open_ms', 'tx_close_ms', 'slr_fire_ms',
                'rx_open_ms', 'rx_close_ms', 'pulse_period_ns')
        _check_keys(section, keys, path)
        pulse_period = 1e3 / (self._rep_rate / 1e6)
        if 'pulse_period_ns' in section and \
                abs(_get(section, 'pulse_period_ns', path) - pulse_period) > \
                1e-9 * pulse_period:
            raise ScenarioError(path + '.pulse_period_ns', "does not match "
                                "transmitter.rep_rate_mhz")
        params = {key[:-3]: _get(section, key, path)
                  for key in keys[:-1] if key in section}
        with _section(path):
            self._schedule = ProtocolSchedule(
                pulse_period=pulse_period,
                duty_cycle=self._config.get('analysis', {}).get(
                    'duty_cycle', DUTY_CYCLE),
                **params)

    def _load_noise(self, section):
        path = 'noise'
        _check_keys(section, ('fluorescence_hz', 'fluorescence_half_life_ms',
                              'albedo_hz', 'dark_rate_hz'), path)
        with _section(path):
            self._noise = NoiseModel(
                _get(section, 'fluorescence_hz', path, 0.0),
                _get(section, 'albedo_hz', path, 0.0),
                _get(section, 'dark_rate_hz', path,
                     self._receivers[0].dark_rate),
                _get(section, 'fluorescence_half_life_ms', path,
                     FLUORESCENCE_HALF_LIFE_MS))

    def _load_analysis(self, section):
        path = 'analysis'
        defaults = AnalysisParameters().as_dict()
        _check_keys(section, tuple(defaults), path)
        params = {key: _get(section, key, path, value)
                  for key, value in defaults.items()}
        if not params['interval_s'] > 0.0:
            raise ScenarioError(path + '.interval_s', "must be positive")
        if not 0.0 < params['duty_cycle'] <= 1.0:
            raise ScenarioError(path + '.duty_cycle', "must lie in (0, 1]")
        if not 0.0 < params['window_ps'] < 2.0 * params['exclusion_ps']:
            raise ScenarioError(path + '.window_ps', "must be positive and "
                                "below twice exclusion_ps")
        if not 2.0 * params['exclusion_ps'] < self._schedule.pulse_period_ps:
            raise ScenarioError(path + '.exclusion_ps', "must be below half "
                                "the pulse period")
        if not params['bin_width_ps'] > 0.0:
            raise ScenarioError(path + '.bin_width_ps', "must be positive")
        self._analysis = AnalysisParameters(
            params['interval_s'], params['window_ps'], params['duty_cycle'],
            params['threshold_hz'], params['bin_width_ps'],
            params['exclusion_ps'], params['min_separation_ps'])

    @property
    def analysis(self):
        """Parameters of the detection statistics."""
        return self._analysis

    @property
    def array_geometry(self):
        """Positions of the CCRs of the satellite array."""
        return self._satellite.geometry

    @property
    def atmosphere_loss(self):
        """Atmospheric loss (dB)."""
        return self._l_a

    @property
    def azimuth(self):
        """Azimuth (rad) of the line of sight in the array plane, or None for
        the azimuth of maximum spread.
        """
        return self._azimuth

    @property
    def config(self):
        """Scenario configuration as loaded."""
        return self._config

    @property
    def hash(self):
        """SHA-256 of the canonical scenario configuration."""
        return self._hash

    @property
    def incidence(self):
        """Incidence angle (rad) on the satellite array."""
        return self._incidence

    @property
    def link_geometry(self):
        """Down-link geometry at the mean slant range."""
        return LinkGeometry(self._wavelength, self._telescope,
                            self._profile.mean_range, self._satellite.array)

    @property
    def model(self):
        """Diffraction model tag of the down-link."""
        return self._model

    @property
    def mu_sat(self):
        """Mean photon number per pulse at the satellite."""
        return self._mu_sat

    @property
    def name(self):
        """Scenario name."""
        return self._name

    @property
    def noise(self):
        """Background of the receiving channels."""
        return self._noise

    @property
    def pulse(self):
        """Transmitted pulse."""
        return self._pulse

    @property
    def range_profile(self):
        """Slant range of the satellite during the acquisition."""
        return self._profile

    @property
    def receivers(self):
        """Receiving channels."""
        return self._receivers

    @property
    def rep_rate(self):
        """Repetition rate (Hz) of the transmitted pulses."""
        return self._rep_rate

    @property
    def satellite(self):
        """Satellite and its CCR array."""
        return self._satellite

    @property
    def schedule(self):
        """Protocol schedule."""
        return self._schedule

    @property
    def telescope(self):
        """Ground telescope."""
        return self._telescope

    def arrivals(self):
        """Expected times of arrival of the transmitted pulses."""
        return ExpectedArrivals(self._profile, self._schedule)

    def budget(self, model=None, receiver=None, l_a=None, slant_range=None):
        """Link budget of a receiving channel (default: the first one)."""
        geometry = self.link_geometry
        if slant_range is not None:
            geometry = geometry.at_range(slant_range)
        return downlink_budget(
            geometry, self._model if model is None else model,
            self._l_a if l_a is None else l_a,
            self._receivers[0] if receiver is None else receiver)

    def downlink_transmittance(self, slant_range):
        """Down-link transmittance at a slant range (m)."""
        return float(downlink_budget(self.link_geometry.at_range(slant_range),
                                     self._model, self._l_a).t_down)

    def receiver(self, channel):
        """Receiving channel with the given ID."""
        for rx in self._receivers:
            if rx.channel_id == channel:
                return rx
        raise UsageError("Channel {} is not described by the scenario."
                         "".format(channel))

    def response(self, incidence=None):
        """Temporal response of the satellite array, without detector
        jitter, for an incidence (rad; default: the scenario one).
        """
        return ArrayResponse.from_geometry(
            self._satellite.geometry,
            self._incidence if incidence is None else incidence,
            self._pulse, self._azimuth)

    def impulse_response(self, incidence=None, jitter_fwhm=None,
                         bin_width=PROFILE_BIN_WIDTH_PS):
        """Binned temporal impulse response of the satellite array."""
        pulse = self._pulse if jitter_fwhm is None \
            else self._pulse.broadened(jitter_fwhm)
        return array_impulse_response(
            self._satellite.geometry,
            self._incidence if incidence is None else incidence,
            self._azimuth, pulse, bin_width)

    def baseline(self, summary=None, channel=None):
        """Link baseline of a receiving channel.

        The detection rate is the measured one of a pass summary when given,
        otherwise the forward rate of the scenario.
        """
        rx = self._receivers[0] if channel is None else self.receiver(channel)
        budget = self.budget(receiver=rx)
        if summary is not None and not summary.no_signal:
            r_det, mu_sat = summary.r_det, summary.mu_sat
        else:
            r_det = forward_detection_rate(self._mu_sat, self._rep_rate,
                                           budget.t_down,
                                           receiver_transmittance(rx))
            mu_sat = self._mu_sat
        return LinkBaseline(r_det, mu_sat, rx.dark_rate,
                            self._noise.fluorescence_rate,
                            self._noise.albedo_rate, self._analysis.window,
                            self._rep_rate, rx.filter_band)


def _read_json(filename, what):
    try:
        with open(filename) as config_file:
            return json.load(config_file)
    except OSError as err:
        raise UsageError("Could not load {0} from {1}: {2}".format(
            what, filename, err.strerror or err))
    except ValueError as err:
        raise ScenarioError(os.path.basename(str(filename)),
                            "is not valid JSON ({})".format(err))


def load_scenario(filename):
    """Load a scenario file."""
    config = _read_json(filename, "scenario")
    name = os.path.splitext(os.path.basename(str(filename)))[0]
    scenario = Scenario(config, os.path.dirname(os.path.abspath(
        str(filename))), name)
    logger.debug("Loaded scenario %r", scenario)
    return scenario


def load_upgrade_plan(filename):
    """Load an upgrade plan file."""
    config = _read_json(filename, "upgrade plan")
    _check_keys(config, tuple(_PLAN_KEYS), 'plan')
    params = {}
    for key, name in _PLAN_KEYS.items():
        if key in config:
            kind = bool if key == 'fluorescence_removed' else float
            params[name] = _get(config, key, 'plan', kind=kind)
    if 'tx_divergence_semi_angle' in params:
        params['tx_divergence_semi_angle'] *= 1e-6
    if 'rep_rate' in params:
        params['rep_rate'] *= 1e6
    _get(config, 'source_mu', 'plan')
    with _section('plan'):
        return UpgradePlan(**params)
