import os

import pytest

from helmguard.schemas import CbfParams, Gains, ScenarioConfig, SimMode, VesselParams
from helmguard.services import harness
from helmguard.services.scenario import load_scenario

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "scenarios")


@pytest.fixture
def params():
    return VesselParams()


@pytest.fixture
def gains():
    return Gains()


@pytest.fixture
def cbf_params():
    return CbfParams()


@pytest.fixture
def scenario():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def towing_circle_path():
    return os.path.join(SCENARIO_DIR, "towing_circle.json")


@pytest.fixture(scope="session")
def straight_tow_path():
    return os.path.join(SCENARIO_DIR, "straight_tow.json")


@pytest.fixture(scope="session")
def qp_log():
    """Full towing-circle run with the safety filter"""
    return harness.run(ScenarioConfig(mode=SimMode.QP))


@pytest.fixture(scope="session")
def reference_log():
    """Towing-circle run applying the backstepping input directly"""
    return harness.run(ScenarioConfig(mode=SimMode.REFERENCE))


@pytest.fixture(scope="session")
def straight_scenario(straight_tow_path):
    return load_scenario(straight_tow_path)
