"""Seeded, splittable random streams.

Every random draw in the package comes from a Philox counter-based
generator. A stream is identified by a root seed plus a tuple of integer
keys; the keys are fed to ``SeedSequence`` as its spawn key, so

    stream(seed, *keys) == Generator(Philox(SeedSequence(seed, spawn_key=keys)))

Distinct key tuples give statistically independent streams, and the same
tuple always reproduces the same stream on any platform.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

SEED_LIMIT = 2**64

# Fixed purpose keys, so operator components never share a stream.
ROWS = 1
SIGNS = 2
OUTER_SIGNS = 3
MIXING = 4
DENSE = 5
POINTS = 6
FRAME = 7
PAIRS = 8
GAUSS = 9
CHILD = 10


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ParameterError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for ``seed`` and the purpose ``keys``."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(seq))


def child_seed(seed: int, index: int) -> int:
    """Derive the 64-bit seed of the ``index``-th child run of ``seed``."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=(CHILD, int(index)))
    return int(seq.generate_state(1, dtype=np.uint64)[0])
