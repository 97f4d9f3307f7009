import numpy as np
import pytest

from src.engines import DensePmf, output_distribution, random_brickwork, stream


@pytest.fixture
def rng() -> np.random.Generator:
    return stream(1234, 99)


@pytest.fixture
def brickwork_target() -> DensePmf:
    """Exact output pmf of a fixed 6-qubit, depth-12 brickwork circuit."""
    return output_distribution(random_brickwork(6, 12, seed=7))


@pytest.fixture
def pmf_pair(rng):
    def make(width: int):
        return DensePmf.random(width, rng), DensePmf.random(width, rng)

    return make
