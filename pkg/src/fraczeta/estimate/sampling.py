"""Seed-partitioned Monte Carlo sampling.

A run of ``n`` samples is split into fixed shards of ``SHARD`` points.  Shard ``k`` draws
from its own Philox stream keyed by ``(seed, k)``, so results depend on the seed and
``n`` only, never on how many worker threads evaluate the shards.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from ..errors import DomainError
from ..spaces.base import Region

SHARD = 65_536
SEED_MASK = (1 << 64) - 1


def shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=(shard,))))


def shard_sizes(n: int) -> list[int]:
    if n <= 0:
        raise DomainError("sample count must be positive")
    full, rest = divmod(int(n), SHARD)
    return [SHARD] * full + ([rest] if rest else [])


def map_samples(region: Region, n: int, seed: int, fn: Callable, threads: int = 1) -> list:
    """Apply ``fn`` to each shard's sample batch; results come back in shard order."""
    sizes = shard_sizes(n)

    def run(k: int):
        return fn(region.sample(shard_rng(seed, k), sizes[k]))

    if threads <= 1 or len(sizes) == 1:
        return [run(k) for k in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, range(len(sizes))))


def sample_distances(set_a, region: Region, n: int, seed: int, threads: int = 1) -> np.ndarray:
    """``d(x, A)`` for ``n`` points drawn uniformly from ``region``, in shard order."""
    parts = map_samples(region, n, seed, lambda batch: np.asarray(set_a.distance(batch), float), threads)
    return np.concatenate(parts)
