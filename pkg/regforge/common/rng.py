"""
Seeded, counter-based random streams.
Every generator draws from a Philox stream keyed by (seed, *stream labels), so outputs depend only on parameters.
"""
import zlib
from fractions import Fraction
from typing import Union

import numpy as np

StreamKey = Union[int, str]


def _key(part: StreamKey) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return int(part)


def make_rng(seed: int, *stream: StreamKey) -> np.random.Generator:
    """A Philox generator for the given seed and stream labels."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(_key(s) for s in stream)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def bernoulli_mask(rng: np.random.Generator, probability: Fraction, count: int) -> np.ndarray:
    """Exact Bernoulli(p) draws for rational p: integer draw below the numerator."""
    probability = Fraction(probability)
    if probability <= 0:
        return np.zeros(count, dtype=bool)
    if probability >= 1:
        return np.ones(count, dtype=bool)
    return rng.integers(0, probability.denominator, size=count) < probability.numerator
