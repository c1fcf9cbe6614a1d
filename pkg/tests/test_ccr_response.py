# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from gnssqlink.ccr_response import (ArrayResponse, TemporalProfile,
                                    array_impulse_response,
                                    ccr_time_offsets, lobe_displacement,
                                    max_spread_azimuth, peak_to_peak,
                                    signature_span, velocity_aberration_check)
from gnssqlink.exceptions import DomainError, UsageError
from gnssqlink.geometry import ArrayGeometry
from gnssqlink.units import GaussianPulse

ring = ArrayGeometry.ring(0.42, 48)
pulse = GaussianPulse(100.0)


def test_lobe_displacement() -> None:
    theta_d = lobe_displacement(532e-9, 0.026)
    assert theta_d == pytest.approx(28.6e-6, abs=0.05e-6)
    assert theta_d == pytest.approx(29e-6, rel=0.02)
    with pytest.raises(DomainError):
        lobe_displacement(532e-9, 0.0)


def test_velocity_aberration_check() -> None:
    on_lobe, gap = velocity_aberration_check(28.6e-6)
    assert on_lobe
    assert gap == pytest.approx(2.6e-6)
    on_lobe, _ = velocity_aberration_check(60e-6)
    assert not on_lobe


def test_time_offsets() -> None:
    offsets = ccr_time_offsets(ring, math.radians(9.0))
    assert len(offsets) == 48
    assert offsets.mean() == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(ccr_time_offsets(ring, 0.0), 0.0)
    for incidence in (-0.1, math.pi / 2.0):
        with pytest.raises(DomainError):
            ccr_time_offsets(ring, incidence)


def test_signature_span() -> None:
    span_9 = signature_span(ring, math.radians(9.0))
    span_5 = signature_span(ring, math.radians(5.0))
    assert span_9 == pytest.approx(
        2.0 * 0.42 * math.sin(math.radians(9.0)) / 299792458.0 * 1e12,
        rel=1e-9)
    assert span_9 / span_5 == pytest.approx(
        math.sin(math.radians(9.0)) / math.sin(math.radians(5.0)), rel=0.1)
    between = signature_span(ring, math.radians(9.0),
                             max_spread_azimuth(ring) + math.pi / 48.0)
    assert between < span_9


def ring_profile(degrees):
    return array_impulse_response(ring, math.radians(degrees), None, pulse,
                                  10.0)


@pytest.mark.parametrize('degrees, expected', [(9.0, 430.0), (5.0, 250.0)])
def test_peak_to_peak(degrees, expected) -> None:
    profile = ring_profile(degrees)
    assert profile.area == pytest.approx(1.0, rel=1e-9)
    pp = peak_to_peak(profile, 150.0)
    assert pp == pytest.approx(expected, abs=100.0)
    # lobes sit at the extreme delays of the ring
    assert pp == pytest.approx(signature_span(ring, math.radians(degrees)),
                               rel=0.03)


def test_peak_to_peak_scales_with_incidence() -> None:
    ratio = peak_to_peak(ring_profile(9.0)) / peak_to_peak(ring_profile(5.0))
    expected = math.sin(math.radians(9.0)) / math.sin(math.radians(5.0))
    assert expected == pytest.approx(1.794, abs=1e-3)
    assert ratio == pytest.approx(expected, rel=0.1)


def test_peak_to_peak_of_resolved_peaks() -> None:
    densities = np.zeros(50)
    densities[[0, 30]] = 0.05
    profile = TemporalProfile(10.0, 0.0, densities)
    assert peak_to_peak(profile) == 300.0
    densities = np.zeros(50)
    densities[[10, 40]] = 0.05
    assert peak_to_peak(TemporalProfile(10.0, 0.0, densities)) == 300.0
    densities = np.zeros(50)
    densities[[19, 49]] = 0.05
    assert peak_to_peak(TemporalProfile(10.0, 0.0, densities)) == 300.0


def test_normal_incidence_single_peak() -> None:
    profile = array_impulse_response(ring, 0.0, None, pulse, 10.0)
    assert peak_to_peak(profile, 150.0) == 0.0
    centers = profile.centers
    assert centers[np.argmax(profile.densities)] == pytest.approx(0.0)


def test_impulse_response_errors() -> None:
    with pytest.raises(UsageError):
        array_impulse_response(ring, 0.1, None, pulse, 100.0)
    with pytest.raises(DomainError):
        array_impulse_response(ring, math.pi / 2.0, None, pulse, 10.0)


def test_background_floor() -> None:
    profile = array_impulse_response(ring, 0.1, None, pulse, 10.0)
    floored = array_impulse_response(ring, 0.1, None, pulse, 10.0,
                                     background=1e-4)
    np.testing.assert_allclose(floored.densities - profile.densities, 1e-4)


def test_array_response_matches_profile() -> None:
    response = ArrayResponse.from_geometry(ring, math.radians(9.0), pulse)
    assert response.cdf(0.0) == pytest.approx(0.5, abs=1e-9)
    assert response.cdf(2000.0) == pytest.approx(1.0)
    edges = np.array([-1000.0, 0.0, 1000.0])
    assert response.bin_masses(edges) == pytest.approx([0.5, 0.5])
    samples = response.sample(10000, np.random.default_rng(3))
    assert abs(samples.mean()) < 8.0
    with pytest.raises(UsageError):
        ArrayResponse([], pulse)


def test_peak_to_peak_of_flat_profile() -> None:
    assert peak_to_peak(TemporalProfile(10.0, 0.0, np.ones(50))) == 0.0
    with pytest.raises(UsageError):
        TemporalProfile(10.0, 0.0, [])
