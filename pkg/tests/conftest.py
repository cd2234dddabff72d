import numpy as np
import pytest

from dilithium_faultlab import scheme
from dilithium_faultlab.params import DILITHIUM2


@pytest.fixture(scope="session")
def keypair():
    """One deterministic level-2 key pair shared across the session."""
    return scheme.keygen(bytes(range(32)), DILITHIUM2)


@pytest.fixture()
def rng():
    return np.random.default_rng(0xFA017)
