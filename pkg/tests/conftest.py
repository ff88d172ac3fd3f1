import math

import numpy as np
import pytest

from bellprocess.config import reset_config
from bellprocess.models import FockSpec, LatticeSpec, build_fock, build_two_level
from bellprocess.process import SamplerConfig

RABI_HORIZON = math.pi / 2 - 1e-6


@pytest.fixture(autouse=True)
def fresh_config():
    """Each test starts from the default package configuration."""
    reset_config()
    yield
    reset_config()


@pytest.fixture
def rabi():
    return build_two_level(omega=1.0)


@pytest.fixture
def fock():
    spec = FockSpec(lattice=LatticeSpec(L=3, eps=1.0), n_max=2, sources=[1], radius=1, coupling=0.1)
    return build_fock(spec)


@pytest.fixture
def sampler():
    return SamplerConfig(seed=1234)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
