# -*- coding: utf-8 -*-
import os

import pytest

from gnssqlink.objects import ReceiverSpec
from gnssqlink.scenario import load_scenario
from gnssqlink.simulator import NoiseModel, Simulator, simulate_pass

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), 'scenarios')


def scenario_path(name):
    return os.path.join(SCENARIO_DIR, name)


BASELINE = scenario_path('glonass134_19500km.json')
WIDE = scenario_path('glonass134_20200km.json')
DUAL = scenario_path('glonass131_20250km.json')
PLAN = scenario_path('upgrade_plan.json')


def signal_simulator(scenario, mu_sat=10.0, t_down=1e-3):
    """Noise-free simulator with a strong signal on a single channel."""
    rx = ReceiverSpec(8.8, 0.5, 0.0, 40.0)
    return Simulator(scenario.schedule, scenario.range_profile, [rx],
                     scenario.response(), NoiseModel(), mu_sat,
                     lambda slant_range: t_down)


def background_simulator(scenario):
    """Simulator of the scenario background, without any signal."""
    return Simulator(scenario.schedule, scenario.range_profile,
                     scenario.receivers, scenario.response(), scenario.noise,
                     0.0, scenario.downlink_transmittance)


@pytest.fixture(scope='session')
def baseline():
    return load_scenario(BASELINE)


@pytest.fixture(scope='session')
def wide():
    return load_scenario(WIDE)


@pytest.fixture(scope='session')
def dual():
    return load_scenario(DUAL)


@pytest.fixture(scope='session')
def baseline_minute(baseline):
    return simulate_pass(baseline, 60.0, seed=1)


@pytest.fixture(scope='session')
def baseline_pass(baseline):
    return simulate_pass(baseline, 300.0, seed=2)
