import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from aqftlab.fincat import build_circle_model

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "aqftlab" / "fixtures"


@pytest.fixture(scope="session")
def circle2():
    return build_circle_model(2)


@pytest.fixture(scope="session")
def circle3():
    return build_circle_model(3)


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
