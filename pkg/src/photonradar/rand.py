"""Deterministic random generators.

Every stochastic operation takes an explicit seed and builds its own
counter-based Philox generator, so results never depend on call order and
scenario sweeps can run in parallel.
"""

from __future__ import annotations

import numpy as np

# Stream labels used by the pipeline to derive independent sub-generators
# from one scenario seed.
STREAM_PAIRS = 0
STREAM_REFERENCE_DETECTOR = 1
STREAM_CHANNEL = 2
STREAM_RECEIVE_DETECTOR = 3


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), int(stream)))))
