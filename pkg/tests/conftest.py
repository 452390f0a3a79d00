import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("hullbound", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hullbound")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def roots(count, phase=0.0):
    return np.exp(1j * (phase + 2 * np.pi * np.arange(count) / count))
