"""Deterministic, splittable random streams.

Every Monte Carlo consumer takes an ``RNGStream`` rather than a bare seed,
and fans out to disjoint children with ``child``.  Results then depend on
the seed and on the chunking, never on thread scheduling.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_SEED = 20231
SEED_ENV = "CONFMEASURE_SEED"


def resolve_seed(seed: int | None = None) -> int:
    """Explicit seed, else $CONFMEASURE_SEED, else the built-in default."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return DEFAULT_SEED


@dataclass(frozen=True)
class RNGStream:
    seed: int
    key: tuple[int, ...] = ()

    def child(self, *index: int) -> "RNGStream":
        return RNGStream(self.seed, self.key + tuple(int(i) for i in index))

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self.key))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RNGStream):
        return rng.generator()
    return np.random.default_rng(rng)


def as_stream(rng) -> RNGStream:
    if isinstance(rng, RNGStream):
        return rng
    if isinstance(rng, (int, np.integer)) or rng is None:
        return RNGStream(resolve_seed(rng))
    raise TypeError("expected an RNGStream or an integer seed")
