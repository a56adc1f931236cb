import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "wonderbt", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("wonderbt")

TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"]


@pytest.fixture(scope="session")
def a2():
    from wonderbt.rootsys import build_root_system

    return build_root_system("A2")
