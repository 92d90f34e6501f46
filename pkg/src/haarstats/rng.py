"""Reproducible random-number streams.

Every stochastic operation in this package takes an :class:`RngSpec`, a
(master seed, stream index) pair.  Identical pairs reproduce identical
draws; distinct stream indices give statistically independent substreams,
so Monte Carlo trials can run in any order (or in parallel) without
changing pooled results.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngSpec:
    """Seed specification for one deterministic random stream."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValueError(f"stream_index must be nonnegative, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        """Fresh PCG64 generator for this (seed, stream) pair."""
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))

    def substream(self, index: int) -> "RngSpec":
        """Derive the per-trial substream with the given index."""
        return RngSpec(self.master_seed, index)
