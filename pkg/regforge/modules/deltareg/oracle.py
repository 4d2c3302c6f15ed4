"""
Unpruned subset oracle for pair regularity.
Every admissible subset pair of every graph in a batch is scored at once with a numpy einsum.
"""
from fractions import Fraction
from typing import Sequence

import numpy as np

from regforge.common.rational import RationalLike, parse_rational
from regforge.modules.deltareg.pair import HALF, DeltaLike, as_threshold

CHUNK = 4096


def subset_indicators(n: int, min_size: int) -> np.ndarray:
    """0/1 rows for every subset of range(n) with at least min_size elements."""
    masks = np.arange(1 << n, dtype=np.int64)
    rows = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    return rows[rows.sum(axis=1) >= min_size]


def all_bipartite_adjacencies(a: int, b: int) -> np.ndarray:
    """Every a x b 0/1 matrix, indexed by the bits of its row-major flattening."""
    cells = a * b
    codes = np.arange(1 << cells, dtype=np.int64)
    return ((codes[:, None] >> np.arange(cells)) & 1).reshape(-1, a, b).astype(np.int64)


def masks_from_adjacency(adjacency: np.ndarray) -> Sequence[int]:
    """Per row, the bitmask of its columns."""
    weights = 1 << np.arange(adjacency.shape[1], dtype=np.int64)
    return [int(x) for x in (np.asarray(adjacency, dtype=np.int64) @ weights)]


def batch_oracle(adjacencies: np.ndarray, delta: DeltaLike, factor: RationalLike = HALF) -> np.ndarray:
    """Regularity verdict per graph of a (g, a, b) batch, by checking all admissible subset pairs."""
    threshold = as_threshold(delta)
    factor = parse_rational(factor)
    adjacencies = np.asarray(adjacencies, dtype=np.int64)
    _, a, b = adjacencies.shape
    rows = subset_indicators(a, threshold.min_size(a))
    cols = subset_indicators(b, threshold.min_size(b))
    verdicts = np.ones(len(adjacencies), dtype=bool)
    if len(rows) == 0 or len(cols) == 0:
        return verdicts
    sizes = np.outer(rows.sum(axis=1), cols.sum(axis=1))
    for start in range(0, len(adjacencies), CHUNK):
        chunk = adjacencies[start:start + CHUNK]
        counts = np.einsum("sa,gab,tb->gst", rows, chunk, cols)
        edges = chunk.sum(axis=(1, 2))
        lhs = counts * (a * b * factor.denominator)
        rhs = factor.numerator * edges[:, None, None] * sizes[None, :, :]
        verdicts[start:start + CHUNK] = np.all(lhs >= rhs, axis=(1, 2))
    return verdicts


def oracle_pair_regular(adjacency: np.ndarray, delta: DeltaLike, factor: RationalLike = Fraction(1, 2)) -> bool:
    return bool(batch_oracle(np.asarray(adjacency)[None, :, :], delta, factor)[0])
