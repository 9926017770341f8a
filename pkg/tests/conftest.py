import numpy as np
import pytest

from fracmass import QuadratureSpec


@pytest.fixture
def spec():
    # small budget shared by the cheap MC tests
    return QuadratureSpec(sample_budget=40_000, rng_seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(20240816)
