"""Seeded random streams.

Every sampler takes an explicit ``numpy.random.Generator``.  Streams for
parallel chains and benchmark replicates are spawned from one
``SeedSequence`` so they never overlap.
"""
from typing import List

import numpy as np

Rng = np.random.Generator


def make_rng(seed: int, stream: int = 0) -> Rng:
    """Generator for (seed, stream); identical arguments give identical streams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def spawn_seeds(seed: int, n: int) -> List[int]:
    """n independent 64-bit seeds derived from one master seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]
