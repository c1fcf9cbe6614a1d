# -*- coding: utf-8 -*-
import numpy as np
import pytest

from gnssqlink.exceptions import DomainError
from gnssqlink.units import (GaussianPulse, LossDb, Transmittance,
                             db_from_transmittance, fwhm_to_sigma,
                             transmittance_from_db)


def test_db_from_transmittance() -> None:
    assert db_from_transmittance(1.0) == 0.0
    assert db_from_transmittance(10**-6.21) == pytest.approx(62.1, abs=1e-9)
    assert db_from_transmittance(0.5) == pytest.approx(3.0103, abs=1e-4)
    assert isinstance(db_from_transmittance(0.5), LossDb)


def test_transmittance_from_db() -> None:
    assert transmittance_from_db(0.0) == 1.0
    assert transmittance_from_db(3.0) == pytest.approx(0.50119, abs=1e-5)
    assert transmittance_from_db(11.8) == pytest.approx(0.06607, abs=1e-5)
    assert isinstance(transmittance_from_db(3.0), Transmittance)


def test_db_round_trip() -> None:
    rng = np.random.default_rng(0)
    losses = rng.uniform(0.01, 100.0, 10**6)
    np.testing.assert_allclose(
        db_from_transmittance(transmittance_from_db(losses)), losses,
        rtol=1e-12, atol=0.0)


def test_losses_add_where_transmittances_multiply() -> None:
    rng = np.random.default_rng(1)
    t1 = 1.0 - rng.random(10**5)
    t2 = 1.0 - rng.random(10**5)
    np.testing.assert_allclose(
        db_from_transmittance(t1 * t2),
        db_from_transmittance(t1) + db_from_transmittance(t2),
        rtol=0.0, atol=1e-9)


@pytest.mark.parametrize('t', [0.0, -0.1, 1.5])
def test_transmittance_out_of_domain(t) -> None:
    with pytest.raises(DomainError):
        db_from_transmittance(t)
    with pytest.raises(DomainError):
        Transmittance(t)


def test_negative_loss() -> None:
    with pytest.raises(DomainError):
        transmittance_from_db(-1.0)
    with pytest.raises(DomainError):
        transmittance_from_db(np.array([1.0, -1.0]))
    with pytest.raises(DomainError):
        LossDb(-0.5)


def test_fwhm_to_sigma() -> None:
    assert fwhm_to_sigma(100.0) == pytest.approx(42.466, abs=1e-3)
    assert fwhm_to_sigma(40.0) == pytest.approx(16.986, abs=1e-3)
    assert fwhm_to_sigma(2.3548) == pytest.approx(1.0, abs=1e-4)
    for fwhm in (0.0, -40.0):
        with pytest.raises(DomainError):
            fwhm_to_sigma(fwhm)


def test_pulse_broadening() -> None:
    pulse = GaussianPulse(100.0, center=5.0)
    broad = pulse.broadened(40.0)
    assert broad.sigma == pytest.approx(np.hypot(42.466, 16.986), abs=1e-2)
    assert broad.center == 5.0
    assert pulse.cdf(5.0) == pytest.approx(0.5)
    assert pulse.pdf(5.0) == pytest.approx(
        1.0 / (pulse.sigma * np.sqrt(2.0 * np.pi)))
