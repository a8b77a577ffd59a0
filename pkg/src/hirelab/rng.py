"""Reproducible random streams.

Trials are partitioned into fixed-size blocks; block ``b`` of a run with master
seed ``s`` always draws from the Philox counter-based stream keyed by
``SeedSequence(s, spawn_key=(b,))``.  Each trial occupies a fixed lane within
its block and consumes variates at positions that depend only on the trial
history, so results are bit-identical regardless of how blocks are distributed
over workers.
"""

from __future__ import annotations

import numpy as np

BLOCK_TRIALS = 1 << 16

DEFAULT_SEED = 20240806


def block_rng(master_seed: int, block_index: int) -> np.random.Generator:
    """Counter-based generator for one block of trials."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(block_index,))
    return np.random.Generator(np.random.Philox(seed=ss))


def trial_rng(master_seed: int, stream: int = 0) -> np.random.Generator:
    """Standalone stream for scalar (non-block) use, e.g. single-step sampling."""
    return block_rng(master_seed, stream)


def block_plan(trials: int) -> list[tuple[int, int]]:
    """Split ``trials`` into (block_index, lane_count) pairs of at most BLOCK_TRIALS."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    plan = []
    b = 0
    left = trials
    while left > 0:
        lanes = min(BLOCK_TRIALS, left)
        plan.append((b, lanes))
        left -= lanes
        b += 1
    return plan
