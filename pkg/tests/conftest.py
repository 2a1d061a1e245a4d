import os
import tempfile

# log files go to a scratch directory, set before src.config reads the environment
os.environ.setdefault("LOG_DIR", tempfile.mkdtemp(prefix="mtriplet-logs-"))

import numpy as np
import pytest

from src.services.monopole_triplet_module.angular_separation import MINIMAL_FORBIDDEN, TripletState
from src.services.monopole_triplet_module.discrete_symmetry import project_to_sector
from src.services.monopole_triplet_module.monopole_gauges import builtin_profiles
from src.services.monopole_triplet_module.quantum_numbers import HalfInt


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def trivial():
    return builtin_profiles("trivial")


@pytest.fixture
def bps():
    return builtin_profiles("bps", mu=1.0)


@pytest.fixture
def make_state(rng):
    """Random unit-shell state, optionally projected onto a δ-sector."""

    def build(twoj=3, twom=1, A=0.0, delta=None):
        amps = rng.normal(size=12) + 1j * rng.normal(size=12)
        if twoj == 1:
            amps[list(MINIMAL_FORBIDDEN)] = 0.0
        state = TripletState(epsilon=0.0, j=HalfInt(twoj), m=HalfInt(twom), amplitudes=amps, A=A)
        return state if delta is None else project_to_sector(state, delta)

    return build
