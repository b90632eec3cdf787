import numpy as np
import pytest
from hypothesis import strategies as st

from magnonqi.magnon import MagnonAmplitudes
from magnonqi.qcore import StateVector

# w001 = w010 = w101 = w110 = 1/2, w100 = w011 = 0
BALANCED = MagnonAmplitudes(w001=0.5, w010=0.5, w100=0, w110=0.5, w101=0.5, w011=0)
# dense-coding substitution example: 3 * 1/4 + 2 * 1/8 = 1
DENSE_EXAMPLE = MagnonAmplitudes(
    w001=0.5, w010=0.5, w100=0, w110=1 / (2 * np.sqrt(2)), w101=0.5, w011=1 / (2 * np.sqrt(2))
)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(v / np.linalg.norm(v))


def states(n):
    return st.integers(0, 2**32 - 1).map(lambda seed: random_state(np.random.default_rng(seed), n))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
