import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_counts(rng, n, lam=1.0, symmetric=True):
    a = rng.poisson(lam, size=(n, n)).astype(float)
    if symmetric:
        a = np.triu(a) + np.triu(a, 1).T
    return a
