import numpy as np
import pytest

from usynth.synth import enumerate_sequences, standard_gate_set


@pytest.fixture(scope="session")
def std_gateset():
    return standard_gate_set()


@pytest.fixture(scope="session")
def std_pool(std_gateset):
    return enumerate_sequences(std_gateset, 12)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
