import numpy as np
import pytest

from ofdm_bitload import SystemConfig, validate


@pytest.fixture
def cfg() -> SystemConfig:
    return validate(SystemConfig())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
