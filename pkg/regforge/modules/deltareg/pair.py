"""
Exact <delta>-regularity of bipartite pairs.
A pair is <delta>-regular when every A' of A and B' of B with |A'| >= delta|A| and |B'| >= delta|B|
have density at least factor * d(A, B), with factor 1/2 unless stated otherwise.

Only subsets of the minimal admissible sizes are visited: for a fixed A' the sparsest B' of size s
is the s lowest-degree vertices, and adding vertices to either side cannot push an average below
its s smallest terms. The smaller side is enumerated in revolving-door order so the degree vector
changes by one row per step.
"""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from regforge.common.errors import CapExceededError, InputError
from regforge.common.rational import (RationalLike, ceil_fraction, ceil_sqrt_times, floor_sqrt_times,
                                      format_rational, parse_rational)
from regforge.common.reports import RegularityReport, Witness, thaw
from regforge.config import get_settings
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RationalThreshold:
    """Plain rational delta"""
    delta: Fraction

    def min_size(self, n: int) -> int:
        return ceil_fraction(self.delta * n)

    def budget(self, e: int) -> int:
        value = self.delta * e
        return value.numerator // value.denominator

    def __str__(self) -> str:
        return format_rational(self.delta)


@dataclass(frozen=True)
class SqrtThreshold:
    """The threshold coef * sqrt(delta), kept exact"""
    coef: Fraction
    delta: Fraction

    def min_size(self, n: int) -> int:
        return ceil_sqrt_times(self.coef, self.delta, n)

    def budget(self, e: int) -> int:
        return floor_sqrt_times(self.coef, self.delta, e)

    def __str__(self) -> str:
        return f"{format_rational(self.coef)}*sqrt({format_rational(self.delta)})"


Threshold = Union[RationalThreshold, SqrtThreshold]
DeltaLike = Union[RationalLike, RationalThreshold, SqrtThreshold]


def as_threshold(delta: DeltaLike) -> Threshold:
    """Normalize a rational or threshold object; delta must be positive."""
    if isinstance(delta, (RationalThreshold, SqrtThreshold)):
        threshold = delta
        positive = threshold.delta > 0 and (not isinstance(threshold, SqrtThreshold) or threshold.coef > 0)
    else:
        threshold = RationalThreshold(parse_rational(delta))
        positive = threshold.delta > 0
    if not positive:
        raise InputError(f"delta must be positive, got {threshold}")
    return threshold


def min_subset_size(delta: DeltaLike, n: int) -> int:
    """Smallest admissible subset size, ceil(delta * n)."""
    return as_threshold(delta).min_size(n)


def edit_budget(delta: DeltaLike, e: int) -> int:
    """Edits allowed on a graph with e edges, floor(delta * e)."""
    return as_threshold(delta).budget(e)


@lru_cache(maxsize=None)
def revolving_door(n: int, k: int) -> Tuple[Tuple[int, ...], ...]:
    """All k-subsets of range(n); consecutive subsets differ by one exchange."""
    if k < 0 or k > n:
        return ()
    if k == 0:
        return ((),)
    if k == n:
        return (tuple(range(n)),)
    head = revolving_door(n - 1, k)
    tail = tuple(c + (n - 1,) for c in reversed(revolving_door(n - 1, k - 1)))
    return head + tail


def adjacency_matrix(graph: BipartiteGraph) -> np.ndarray:
    """0/1 matrix with rows indexed by the left side."""
    matrix = np.zeros((len(graph.left), len(graph.right)), dtype=np.int64)
    for u, v in graph.edges:
        matrix[graph.left_index[u], graph.right_index[v]] = 1
    return matrix


def pair_violation(adjacency: np.ndarray, min_rows: int, min_cols: int,
                   factor: Fraction = HALF) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
    """First (rows, cols, edge count) whose density falls below factor * d, or None."""
    adjacency = np.asarray(adjacency, dtype=np.int64)
    a, b = adjacency.shape
    e = int(adjacency.sum())
    if e == 0 or min_rows > a or min_cols > b:
        return None
    transposed = a > b
    matrix = adjacency.T if transposed else adjacency
    n_small, n_large = matrix.shape
    s_small, s_large = (min_cols, min_rows) if transposed else (min_rows, min_cols)
    # sum * a * b * den < num * e * s_small * s_large
    bound = factor.numerator * e * s_small * s_large
    scale = a * b * factor.denominator
    degrees = np.zeros(n_large, dtype=np.int64)
    current: set = set()
    for combo in revolving_door(n_small, s_small):
        chosen = set(combo)
        for x in current - chosen:
            degrees -= matrix[x]
        for x in chosen - current:
            degrees += matrix[x]
        current = chosen
        if s_large < n_large:
            smallest = np.partition(degrees, s_large - 1)[:s_large]
        else:
            smallest = degrees
        total = int(smallest.sum())
        if total * scale < bound:
            others = tuple(sorted(int(j) for j in np.argsort(degrees, kind="stable")[:s_large]))
            if transposed:
                return others, tuple(combo), total
            return tuple(combo), others, total
    return None


def is_pair_delta_regular(graph: Union[BipartiteGraph, KGraph], delta: DeltaLike, factor: RationalLike = HALF,
                          pair_cap: Optional[int] = None) -> RegularityReport:
    """Decide <delta>-regularity of a bipartite pair exactly, with a witness pair on failure."""
    started = time.perf_counter()
    if isinstance(graph, KGraph):
        graph = graph.as_bipartite()
    threshold = as_threshold(delta)
    factor = parse_rational(factor)
    a, b = len(graph.left), len(graph.right)
    cap = get_settings().pair_cap if pair_cap is None else pair_cap
    if a + b > cap:
        raise CapExceededError(f"Sides too large for exact checking: |A|+|B| = {a + b} > {cap}")
    min_rows, min_cols = threshold.min_size(a), threshold.min_size(b)
    stats = {"left": a, "right": b, "min_left": min_rows, "min_right": min_cols, "edges": graph.e}
    notes = []
    if min_rows > a or min_cols > b:
        notes.append("no admissible subset pair; vacuously regular")
    found = pair_violation(adjacency_matrix(graph), min_rows, min_cols, factor)
    elapsed = int((time.perf_counter() - started) * 1000)
    if found is None:
        return RegularityReport(verdict=True, elapsed_ms=elapsed, notes=notes, stats=stats)
    rows, cols, total = found
    witness = Witness(
        left=[thaw(graph.left[i]) for i in rows],
        right=[thaw(graph.right[j]) for j in cols],
        density=format_rational(Fraction(total, len(rows) * len(cols))),
        threshold=format_rational(factor * graph.density()),
    )
    logger.debug("Pair violation at %s x %s", witness.left, witness.right)
    return RegularityReport(verdict=False, witness=witness, elapsed_ms=elapsed, stats=stats)


def satisfies_base_condition(graph: Union[BipartiteGraph, KGraph], delta: RationalLike,
                             pair_cap: Optional[int] = None) -> RegularityReport:
    """The strengthened pair condition d(S, T) >= (1 - delta) d(A, B) over admissible S, T."""
    delta = parse_rational(delta)
    return is_pair_delta_regular(graph, delta, factor=1 - delta, pair_cap=pair_cap)
