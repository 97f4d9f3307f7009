"""Counter-based, splittable random streams.

Every random draw in the arena comes from ``stream(seed, *keys)``: a Philox generator
keyed by the run seed and a tuple of integers (round, batch, index, ...). Two streams
with different keys are independent, and the same keys always replay the same draws.
"""

from typing import List

import numpy as np


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for ``(seed, keys)``."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(sequence))


def streams(seed: int, count: int, *keys: int) -> List[np.random.Generator]:
    """``count`` independent streams under a common key prefix."""
    return [stream(seed, *keys, index) for index in range(count)]


def derive_seed(rng: np.random.Generator) -> int:
    """Draw a fresh 63-bit seed from an existing generator."""
    return int(rng.integers(0, 2**63 - 1))


# Stream namespaces. Referee draws use (round, side) with side 0 for Bob and 1 for Alice;
# everything else is tagged so that it never shares a key with a referee draw.
BRICKWORK = 0xB81C
CLIFFORD = 0xC11F
SPOOF = 0x5F00
SDPI = 0x5D91
DENSITY = 0xD215
