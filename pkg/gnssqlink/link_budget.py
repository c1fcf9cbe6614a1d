# -*- coding: utf-8 -*-
"""Link budget of the satellite-to-ground single-photon channel.

Link budget of the satellite-to-ground single-photon channel provides the
following functionality:

- evaluating the diffraction transmittance from the far field pattern of an
  uncoated corner cube;
- evaluating the diffraction transmittance from the array cross-section
  (top-hat far field pattern);
- combining diffraction and atmosphere into the down-link budget;
- evaluating the receiver transmittance;
- estimating the mean photon number at the satellite from a detection rate,
  and the forward detection rate from a mean photon number;
- evaluating the down-link of an active source with a given divergence;
- projecting detection rate and SNR of an upgraded link.
"""

import logging
import math

from gnssqlink.base import check_positive
from gnssqlink.constants import (ATMOSPHERE_LOSS_DB, PS_PER_S,
                                 TIR_CENTRAL_PEAK, TIR_LATERAL_LOBE)
from gnssqlink.exceptions import DomainError, UsageError
from gnssqlink.objects import CcrArraySpec, Telescope
from gnssqlink.units import (LossDb, Transmittance, db_from_transmittance,
                             transmittance_from_db)

logger = logging.getLogger(__name__)

MODELS = ('ffdp', 'cross_section')


def to_model_tag(model):
    """Retrieve the canonical diffraction model tag."""
    tag = str(model).replace('-', '_').lower()
    if tag not in MODELS:
        raise UsageError("Diffraction model {0} is not supported; expected "
                         "one of {1}.".format(model, ", ".join(MODELS)))
    return tag


def _check_range(slant_range):
    slant_range = float(slant_range)
    if not slant_range > 0.0:
        raise DomainError(
            "Slant range must be positive, got {} m.".format(slant_range))
    return slant_range


def diffraction_ffdp(ccr, tel, wavelength, slant_range, illuminated=1):
    """Diffraction transmittance received on a lateral lobe of the far field
    pattern of an uncoated (TIR) corner cube.

    The number of illuminated CCRs multiplies the result; it is 1 by default,
    which is the single-CCR evaluation that matches the measured losses.
    """
    slant_range = _check_range(slant_range)
    wavelength = check_positive(wavelength, "Wavelength")
    if ccr.coated:
        raise DomainError("Could not evaluate far field pattern of {}: only "
                          "uncoated (TIR) CCRs are modelled.".format(ccr))
    t = TIR_CENTRAL_PEAK * TIR_LATERAL_LOBE * illuminated * ccr.area * \
        tel.area / (wavelength * slant_range)**2
    return Transmittance(min(t, 1.0))


def top_hat_solid_angle(array):
    """Solid angle (sr) of the top-hat far field pattern of an array."""
    return array.solid_angle


def diffraction_cross_section(array, tel, slant_range):
    """Diffraction transmittance of a top-hat far field pattern whose solid
    angle is estimated from the array cross-section.
    """
    slant_range = _check_range(slant_range)
    denominator = 4.0 * math.pi * array.ccr.reflectivity * \
        array.effective_area * slant_range**2
    if denominator == 0.0:
        raise DomainError("Could not evaluate cross-section model: zero "
                          "denominator.")
    t = array.cross_section * tel.area / denominator
    return Transmittance(min(t, 1.0))


def matching_cross_section(t_diff, array, tel, slant_range):
    """Array cross-section (m^2) for which the cross-section model yields
    the given diffraction transmittance at the given slant range.
    """
    slant_range = _check_range(slant_range)
    return float(t_diff) * 4.0 * math.pi * array.ccr.reflectivity * \
        array.effective_area * slant_range**2 / tel.area


def active_downlink_transmittance(semi_angle, tel, slant_range):
    """Down-link transmittance of a Gaussian beam with the given divergence
    semi-angle (rad), received on its axis.
    """
    slant_range = _check_range(slant_range)
    semi_angle = check_positive(semi_angle, "Divergence semi-angle")
    t = 2.0 * tel.area / (math.pi * (semi_angle * slant_range)**2)
    return Transmittance(min(t, 1.0))


class LinkGeometry(object):
    """Geometry of the down-link: wavelength, telescope, slant range and
    satellite array.
    """

    def __init__(self, wavelength, telescope, slant_range, array):
        if not isinstance(telescope, Telescope):
            raise TypeError("Type of telescope is not supported.")
        if not isinstance(array, CcrArraySpec):
            raise TypeError("Type of array is not supported.")
        self._wavelength = check_positive(wavelength, "Wavelength")
        self._telescope = telescope
        self._slant_range = _check_range(slant_range)
        self._array = array

    @property
    def array(self):
        """Satellite CCR array."""
        return self._array

    @property
    def slant_range(self):
        """Slant range (m)."""
        return self._slant_range

    @property
    def telescope(self):
        """Ground telescope."""
        return self._telescope

    @property
    def wavelength(self):
        """Wavelength (m)."""
        return self._wavelength

    def at_range(self, slant_range):
        """Same geometry at another slant range."""
        return LinkGeometry(self._wavelength, self._telescope, slant_range,
                            self._array)


class LinkBudget(object):
    """Down-link and receiver budget."""

    def __init__(self, t_diff, t_a, model, t_rx=None):
        self._t_diff = Transmittance(t_diff)
        self._t_a = Transmittance(t_a)
        self._t_down = Transmittance(self._t_diff * self._t_a)
        self._t_rx = Transmittance(t_rx) if t_rx is not None else None
        self._model = to_model_tag(model)

    def __repr__(self):
        return "LinkBudget(model={0}, l_down={1:.2f} dB)".format(
            self._model, self.l_down)

    @property
    def l_down(self):
        """Down-link loss (dB)."""
        return db_from_transmittance(self._t_down)

    @property
    def l_rx(self):
        """Receiver loss (dB), if the receiver is known."""
        if self._t_rx is None:
            return None
        return db_from_transmittance(self._t_rx)

    @property
    def model(self):
        """Diffraction model tag."""
        return self._model

    @property
    def t_a(self):
        """Atmospheric transmittance."""
        return self._t_a

    @property
    def t_diff(self):
        """Diffraction transmittance."""
        return self._t_diff

    @property
    def t_down(self):
        """Down-link transmittance."""
        return self._t_down

    @property
    def t_rx(self):
        """Receiver transmittance, if the receiver is known."""
        return self._t_rx

    def as_dict(self):
        """Budget as a plain dictionary."""
        return {'model': self._model,
                't_diff': float(self._t_diff),
                't_a': float(self._t_a),
                't_down': float(self._t_down),
                'l_down_db': float(self.l_down),
                't_rx': None if self._t_rx is None else float(self._t_rx),
                'l_rx_db': None if self._t_rx is None else float(self.l_rx)}


def downlink_budget(geometry, model='ffdp', l_a=ATMOSPHERE_LOSS_DB,
                    receiver=None):
    """Combine the chosen diffraction model with the atmospheric
    transmittance into the down-link budget.
    """
    model = to_model_tag(model)
    if model == 'ffdp':
        t_diff = diffraction_ffdp(geometry.array.ccr, geometry.telescope,
                                  geometry.wavelength, geometry.slant_range)
    else:
        t_diff = diffraction_cross_section(geometry.array, geometry.telescope,
                                           geometry.slant_range)
    t_rx = receiver_transmittance(receiver) if receiver is not None else None
    budget = LinkBudget(t_diff, transmittance_from_db(l_a), model, t_rx)
    logger.debug("Down-link budget at %.0f km: %r", geometry.slant_range/1e3,
                 budget)
    return budget


def receiver_transmittance(rx, extra_loss=0.0):
    """Transmittance of the receiving optics and detector, with an optional
    extra loss (dB), e.g., an additional beam splitter.
    """
    t_optics = transmittance_from_db(LossDb(rx.optics_loss + extra_loss))
    return Transmittance(t_optics * rx.detector_efficiency)


def detection_probability(mu, t_down, t_rx):
    """Per-pulse detection probability of a Poissonian source, linearized
    below 1e-3.
    """
    mu = check_positive(mu, "Mean photon number", allow_zero=True)
    mean = mu * float(t_down) * float(t_rx)
    if mean < 1e-3:
        return mean
    return -math.expm1(-mean)


def forward_detection_rate(mu, rep_rate, t_down, t_rx):
    """Detection rate (Hz) expected from a mean photon number at the
    satellite.
    """
    return mu * check_positive(rep_rate, "Repetition rate") * \
        float(t_down) * float(t_rx)


def estimate_mu_sat(r_det, rep_rate, t_down, t_rx):
    """Estimate the mean photon number per pulse at the satellite from the
    detection rate (Hz).
    """
    denominator = float(rep_rate) * float(t_down) * float(t_rx)
    if not denominator > 0.0:
        raise DomainError("Could not estimate mean photon number: zero "
                          "denominator.")
    return float(r_det) / denominator


class LinkBaseline(object):
    """Measured signal and noise decomposition of a link, the starting point
    of a projection.
    """

    def __init__(self, r_det, mu_sat, n_rx, n_fluo, n_alb, window,
                 rep_rate, filter_band=3.0):
        self.r_det = float(r_det)
        self.mu_sat = check_positive(mu_sat, "Baseline mean photon number")
        self.n_rx = check_positive(n_rx, "Dark count rate", allow_zero=True)
        self.n_fluo = check_positive(n_fluo, "Fluorescence rate",
                                     allow_zero=True)
        self.n_alb = check_positive(n_alb, "Albedo rate", allow_zero=True)
        self.window = check_positive(window, "Window")
        self.rep_rate = check_positive(rep_rate, "Repetition rate")
        self.filter_band = check_positive(filter_band, "Filter band")

    @property
    def background(self):
        """Total background rate in the signal region (Hz)."""
        return self.n_rx + self.n_fluo + self.n_alb

    @property
    def snr(self):
        """Signal-to-background ratio within the window."""
        return _snr(self.r_det, self.background, self.window, self.rep_rate)

    def as_dict(self):
        """Baseline as a plain dictionary."""
        return {'r_det_hz': self.r_det, 'snr': self.snr,
                'mu_sat': self.mu_sat, 'n_rx_hz': self.n_rx,
                'n_fluo_hz': self.n_fluo, 'n_alb_hz': self.n_alb,
                'window_ps': self.window, 'rep_rate_hz': self.rep_rate,
                'filter_band_nm': self.filter_band}


class UpgradePlan(object):
    """Upgrades of source, down-link and receiver."""

    def __init__(self, source_mu, diffraction_gain=None,
                 bs_removal_signal_factor=1.0, filter_band=3.0,
                 albedo_scale=1.0, fluorescence_removed=False, dark_rate=None,
                 window=None, rep_rate=None, tx_divergence_semi_angle=None):
        self.source_mu = check_positive(source_mu, "Source mean photon number")
        if diffraction_gain is None and tx_divergence_semi_angle is None:
            raise UsageError("Could not define upgrade plan: either the "
                             "diffraction gain or the divergence of the "
                             "down-going beam is needed.")
        self.diffraction_gain = None if diffraction_gain is None \
            else float(diffraction_gain)
        self.tx_divergence_semi_angle = None \
            if tx_divergence_semi_angle is None \
            else check_positive(tx_divergence_semi_angle,
                                "Divergence semi-angle")
        self.bs_removal_signal_factor = check_positive(
            bs_removal_signal_factor, "Beam splitter removal factor")
        self.filter_band = check_positive(filter_band, "Filter band")
        self.albedo_scale = check_positive(albedo_scale, "Albedo scale")
        self.fluorescence_removed = bool(fluorescence_removed)
        self.dark_rate = dark_rate
        self.window = window
        self.rep_rate = rep_rate

    @classmethod
    def identity(cls, baseline):
        """Plan which leaves the baseline unchanged."""
        return cls(baseline.mu_sat, diffraction_gain=0.0,
                   filter_band=baseline.filter_band,
                   dark_rate=baseline.n_rx, window=baseline.window,
                   rep_rate=baseline.rep_rate)


class Projection(object):
    """Projected detection rate and SNR of an upgraded link."""

    def __init__(self, r_det, snr, n_rx, n_fluo, n_alb, window, rep_rate,
                 diffraction_gain):
        self.r_det = r_det
        self.snr = snr
        self.n_rx = n_rx
        self.n_fluo = n_fluo
        self.n_alb = n_alb
        self.window = window
        self.rep_rate = rep_rate
        self.diffraction_gain = diffraction_gain

    def __repr__(self):
        return "Projection(r_det={0:.4g} Hz, snr={1:.4g})".format(self.r_det,
                                                                  self.snr)

    def as_dict(self):
        """Projection as a plain dictionary."""
        return {'r_det_hz': self.r_det, 'snr': self.snr,
                'n_rx_hz': self.n_rx, 'n_fluo_hz': self.n_fluo,
                'n_alb_hz': self.n_alb, 'window_ps': self.window,
                'rep_rate_hz': self.rep_rate,
                'diffraction_gain_db': self.diffraction_gain}


def _snr(r_det, background, window, rep_rate):
    period = PS_PER_S / rep_rate
    if window > period:
        raise UsageError("Could not compute SNR: window of {0} ps is larger "
                         "than the pulse period of {1} ps.".format(window,
                                                                  period))
    in_window = background * window / period
    if in_window == 0.0:
        return math.inf if r_det > 0.0 else math.nan
    return r_det / in_window


def project_upgraded_link(baseline, plan, geometry=None, budget=None):
    """Project detection rate and SNR of the link upgraded by a plan.

    The diffraction gain is taken from the plan; when the plan only gives the
    divergence of the down-going beam, the gain is the ratio between the
    active down-link and the baseline diffraction transmittance, which needs
    the link geometry and the baseline budget.
    """
    gain = plan.diffraction_gain
    if gain is None:
        if geometry is None or budget is None:
            raise UsageError("Could not project upgraded link: the "
                             "diffraction gain needs the link geometry and "
                             "budget.")
        t_active = active_downlink_transmittance(
            plan.tx_divergence_semi_angle, geometry.telescope,
            geometry.slant_range)
        gain = float(db_from_transmittance(budget.t_diff) -
                     db_from_transmittance(t_active))
    rep_rate = baseline.rep_rate if plan.rep_rate is None \
        else check_positive(plan.rep_rate, "Repetition rate")
    window = baseline.window if plan.window is None \
        else check_positive(plan.window, "Window")
    if window > PS_PER_S / rep_rate:
        raise UsageError("Could not project upgraded link: window of {0} ps "
                         "is larger than the pulse period.".format(window))

    r_det = baseline.r_det * (plan.source_mu / baseline.mu_sat) * \
        10.0**(gain / 10.0) * plan.bs_removal_signal_factor * \
        (rep_rate / baseline.rep_rate)
    n_rx = baseline.n_rx if plan.dark_rate is None \
        else check_positive(plan.dark_rate, "Dark count rate", allow_zero=True)
    n_fluo = 0.0 if plan.fluorescence_removed else baseline.n_fluo
    n_alb = baseline.n_alb * (plan.filter_band / baseline.filter_band) * \
        plan.bs_removal_signal_factor * plan.albedo_scale
    snr = _snr(r_det, n_rx + n_fluo + n_alb, window, rep_rate)
    projection = Projection(r_det, snr, n_rx, n_fluo, n_alb, window, rep_rate,
                            gain)
    logger.debug("Projected upgraded link: %r", projection)
    return projection
