"""
(epsilon, d)-regularity of a k-graph inside a polyad, epsilon-regular partitions and f-equitable partitions.

Sub-polyads S of P only matter through K(S), so the enumeration runs over the edges of P that lie in
some clique of P. A sub-polyad is a boolean row over those edges, every clique is the index array of its
r sub-edges, and K(S) holds the cliques whose sub-edges are all kept by S. Counts for all 2^m rows are
computed in numpy chunks and compared exactly afterwards.
"""
import itertools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from regforge.common.errors import CapExceededError, InputError
from regforge.common.rational import RationalLike, format_rational, parse_rational
from regforge.common.reports import RegularityReport, Witness, thaw
from regforge.common.rng import make_rng
from regforge.config import get_settings
from regforge.modules.hypergraph.core import Edge, KGraph, Polyad, cliques
from regforge.modules.partitions.hierarchy import KPartitionHierarchy, parts_by_class, validate_k_partition
from regforge.modules.partitions.sets import is_equitable

logger = logging.getLogger(__name__)

CHUNK = 4096
DEFAULT_SAMPLES = 2048


@dataclass(frozen=True)
class DensityFunction:
    """f(x) = coef * (x / 2) ** exponent"""
    coef: Fraction
    exponent: int

    def __call__(self, x: RationalLike) -> Fraction:
        return self.coef * (parse_rational(x) / 2) ** self.exponent

    def scaled(self, factor: Fraction) -> "DensityFunction":
        return DensityFunction(self.coef * factor, self.exponent)

    @classmethod
    def for_reduction(cls, k: int, delta: RationalLike) -> "DensityFunction":
        """delta^4 (x/2)^(2^(k+3))"""
        return cls(parse_rational(delta) ** 4, 2 ** (k + 3))

    def __str__(self) -> str:
        return f"{format_rational(self.coef)}*(x/2)^{self.exponent}"


def F_dcl(k: int, gamma: RationalLike, x: RationalLike) -> Fraction:  # pylint: disable=invalid-name
    """The dense counting function (gamma^3 / 12) (x/2)^(2^(k+1))."""
    if k < 3:
        raise InputError("The dense counting function is defined for k >= 3")
    return DensityFunction(parse_rational(gamma) ** 3 / 12, 2 ** (k + 1))(x)


@dataclass
class _Profile:
    """Clique and H-clique counts of sub-polyads; rows of members mark the useful edges each one keeps"""
    useful: List[Edge]
    total: int
    hits: int
    counts: np.ndarray
    h_counts: np.ndarray
    members: np.ndarray
    sampled: bool


def _useful_edges(polyad: Polyad, clique_set: Sequence[Edge]) -> List[Edge]:
    edges = set()
    for clique in clique_set:
        for i in range(polyad.r):
            edges.add(polyad.drop_class(clique, i))
    return sorted(edges)


def _all_subsets(m: int) -> np.ndarray:
    """Row j keeps useful edge b exactly when bit b of j is set."""
    return (np.arange(1 << m, dtype=np.int64)[:, None] >> np.arange(m, dtype=np.int64)) & 1 == 1


def _profile(graph: KGraph, polyad: Polyad, mode: str, samples: int, seed: int) -> _Profile:
    if polyad.layout.class_of != graph.layout.class_of or polyad.r != graph.k:
        raise InputError("Polyad and k-graph must share their layout")
    clique_set = sorted(cliques(polyad).edges)
    if not graph.edges <= frozenset(clique_set):
        raise InputError("Underlie violation: H is not contained in K(P)")
    useful = _useful_edges(polyad, clique_set)
    m = len(useful)
    cap = get_settings().polyad_edge_cap
    sampled = m > cap
    if sampled and mode != "sampled":
        raise CapExceededError(f"Instance too large: {m} polyad edges in cliques > {cap}")
    index = {e: i for i, e in enumerate(useful)}
    clique_edges = np.array([[index[polyad.drop_class(c, i)] for i in range(polyad.r)] for c in clique_set],
                            dtype=np.int64).reshape(len(clique_set), polyad.r)
    in_graph = np.array([c in graph.edges for c in clique_set], dtype=np.int64)
    if sampled:
        rng = make_rng(seed, "subpolyad")
        members = np.concatenate([np.ones((1, m), dtype=bool), rng.integers(0, 2, size=(samples, m)) == 1])
        logger.warning("Sampling %d of 2^%d sub-polyads; result is heuristic", samples, m)
    else:
        members = _all_subsets(m)
    counts = np.zeros(len(members), dtype=np.int64)
    h_counts = np.zeros(len(members), dtype=np.int64)
    if len(clique_set):
        for start in range(0, len(members), CHUNK):
            contained = members[start:start + CHUNK][:, clique_edges].all(axis=2)
            counts[start:start + CHUNK] = contained.sum(axis=1)
            h_counts[start:start + CHUNK] = contained.astype(np.int64) @ in_graph
    return _Profile(useful, len(clique_set), int(in_graph.sum()), counts, h_counts, members, sampled)


def _qualifying(profile: _Profile, epsilon: Fraction) -> np.ndarray:
    """Indices of sub-polyads with |K(S)| >= epsilon |K(P)|."""
    need = epsilon * profile.total
    floor_need = need.numerator // need.denominator
    minimum = floor_need if floor_need == need else floor_need + 1
    return np.nonzero(profile.counts >= max(minimum, 0))[0]


def _density(count: int, hits: int) -> Fraction:
    return Fraction(hits, count) if count else Fraction(0)


def eps_regularity_span(graph: KGraph, polyad: Polyad, epsilon: RationalLike, mode: str = "exact",
                        samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Optional[Tuple[Fraction, Fraction]]:
    """Smallest and largest d_H(S) over sub-polyads with |K(S)| >= epsilon |K(P)|; None if none qualifies."""
    profile = _profile(graph, polyad, mode, samples, seed)
    chosen = _qualifying(profile, parse_rational(epsilon))
    pairs = {(int(profile.counts[j]), int(profile.h_counts[j])) for j in chosen}
    densities = [_density(c, h) for c, h in pairs]
    if not densities:
        return None
    return min(densities), max(densities)


def density_floor(graph: KGraph, polyad: Polyad, fraction: RationalLike,
                  mode: str = "exact") -> Tuple[Optional[Fraction], Fraction]:
    """(min d_H(S) over S with |K(S)| >= fraction |K(P)|, d_H(P))."""
    profile = _profile(graph, polyad, mode, DEFAULT_SAMPLES, 0)
    chosen = _qualifying(profile, parse_rational(fraction))
    pairs = {(int(profile.counts[j]), int(profile.h_counts[j])) for j in chosen}
    lowest = min((_density(c, h) for c, h in pairs), default=None)
    return lowest, _density(profile.total, profile.hits)


def is_eps_regular_in_polyad(graph: KGraph, polyad: Polyad, epsilon: RationalLike, d: Optional[RationalLike],
                             mode: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> RegularityReport:
    """H is (epsilon, d)-regular in P: d_H(S) = d +- epsilon whenever |K(S)| >= epsilon |K(P)|.
    With d None the check is for some d, i.e. the qualifying densities span at most 2 epsilon."""
    started = time.perf_counter()
    epsilon = parse_rational(epsilon)
    profile = _profile(graph, polyad, mode, samples, seed)
    chosen = _qualifying(profile, epsilon)
    first_seen: Dict[Tuple[int, int], int] = {}
    for j in chosen:
        first_seen.setdefault((int(profile.counts[j]), int(profile.h_counts[j])), int(j))
    mode_label = "heuristic" if profile.sampled else "exact"
    stats = {"cliques": profile.total, "useful_edges": len(profile.useful), "qualifying": int(len(chosen))}
    if not first_seen:
        return RegularityReport(verdict=True, mode=mode_label, stats=stats, notes=["no sub-polyad qualifies"],
                                elapsed_ms=int((time.perf_counter() - started) * 1000))
    if d is None:
        densities = {pair: _density(*pair) for pair in first_seen}
        low, high = min(densities.values()), max(densities.values())
        stats.update(low=format_rational(low), high=format_rational(high))
        verdict = high - low <= 2 * epsilon
        witness = None
        if not verdict:
            pair = max(densities, key=lambda p: (densities[p], -first_seen[p]))
            witness = _witness(profile, first_seen[pair], densities[pair], f"{format_rational(low)} + 2*eps")
        return RegularityReport(verdict=verdict, mode=mode_label, witness=witness, stats=stats,
                                elapsed_ms=int((time.perf_counter() - started) * 1000))
    d = parse_rational(d)
    for pair, j in sorted(first_seen.items(), key=lambda item: item[1]):
        density = _density(*pair)
        if abs(density - d) > epsilon:
            witness = _witness(profile, j, density, f"{format_rational(d)} +- {format_rational(epsilon)}")
            return RegularityReport(verdict=False, mode=mode_label, witness=witness, stats=stats,
                                    elapsed_ms=int((time.perf_counter() - started) * 1000))
    return RegularityReport(verdict=True, mode=mode_label, stats=stats,
                            elapsed_ms=int((time.perf_counter() - started) * 1000))


def _witness(profile: _Profile, j: int, density: Fraction, threshold: str) -> Witness:
    members = [thaw(e) for e, kept in zip(profile.useful, profile.members[j]) if kept]
    return Witness(members=members, density=format_rational(density), threshold=threshold,
                   location=f"sub-polyad with {int(profile.counts[j])} cliques")


def polyad_density(graph: KGraph, polyad: Polyad) -> Fraction:
    """d_H(P) for H restricted to K(P)."""
    clique_set = cliques(polyad).edges
    return _density(len(clique_set), len(graph.edges & clique_set))


def transversal_polyads(graph: KGraph, partition: KPartitionHierarchy):
    """k-polyads of a (k-1)-partition with one vertex part per class, with H cut down to their clique sets."""
    k = graph.k
    grouped = parts_by_class(partition, graph.layout)
    for span_order in _transversals(grouped):
        for ids in partition.polyads_over(span_order):
            polyad = partition.polyad_from_ids(span_order, ids)
            clique_set = cliques(polyad).edges
            if not clique_set:
                continue
            local = KGraph(polyad.layout, k, graph.edges & clique_set)
            yield span_order, ids, polyad, local


def _transversals(grouped: Sequence[Sequence[int]]):
    if not grouped:
        yield ()
        return
    for rest in _transversals(grouped[1:]):
        for z in grouped[0]:
            yield tuple(sorted((z,) + rest))


def is_eps_regular_partition(graph: KGraph, partition: KPartitionHierarchy, epsilon: RationalLike,
                             mode: str = "exact") -> RegularityReport:
    """Cliques of the k-polyads in which H is not epsilon-regular total at most epsilon n^k."""
    started = time.perf_counter()
    epsilon = parse_rational(epsilon)
    k = graph.k
    if graph.layout.num_classes != k:
        raise InputError("Expected a k-graph on exactly k classes")
    if partition.rank != k - 1:
        raise InputError(f"Expected a rank-{k - 1} partition, got rank {partition.rank}")
    validity = validate_k_partition(partition)
    if not validity.verdict:
        raise InputError(f"Precondition unmet: invalid k-partition ({validity.witness.location})")
    mass = 0
    polyads = 0
    witness = None
    for span_order, ids, polyad, local in transversal_polyads(graph, partition):
        polyads += 1
        if not is_eps_regular_in_polyad(local, polyad, epsilon, None, mode).verdict:
            size = len(cliques(polyad).edges)
            mass += size
            if witness is None:
                witness = Witness(location=f"polyad over parts {list(span_order)}", members=list(ids))
    n = len(graph.layout.vertices)
    allowed = epsilon * n ** k
    verdict = mass <= allowed
    stats = {"polyads": polyads, "irregular_mass": mass, "allowed": format_rational(allowed)}
    return RegularityReport(verdict=verdict, witness=None if verdict else witness, stats=stats,
                            elapsed_ms=int((time.perf_counter() - started) * 1000))


def _clique_polyads(partition: KPartitionHierarchy, s: int):
    """Every s-polyad of the partition with a non-empty clique set, as (span order, ids)."""
    for span_order in itertools.combinations(range(len(partition.vertex_parts)), s):
        for ids in partition.polyads_over(span_order):
            if cliques(partition.polyad_from_ids(span_order, ids)).edges:
                yield span_order, ids


def arity_of(partition: KPartitionHierarchy) -> Optional[Tuple[int, ...]]:
    """(a_1, ..., a_r) when every clique set is split into the same number of cells, else None."""
    arity = [len(partition.vertex_parts)]
    for s in range(2, partition.rank + 1):
        counts = {len(partition.cells_with_polyad(s, ids)) for _, ids in _clique_polyads(partition, s)}
        if len(counts) != 1:
            return None
        arity.append(counts.pop())
    return tuple(arity)


def is_f_equitable(partition: KPartitionHierarchy, arity: Sequence[int], f: DensityFunction,
                   mode: str = "exact") -> RegularityReport:
    """P^(1) is equitable and every level-i cell is (f(d_0), 1/a_i)-regular in its polyad."""
    started = time.perf_counter()
    arity = tuple(arity)
    if len(arity) != partition.rank:
        raise InputError(f"Arity mismatch: {len(arity)} entries for a rank-{partition.rank} partition")
    if arity[0] != len(partition.vertex_parts):
        raise InputError(f"Arity mismatch: {len(partition.vertex_parts)} vertex parts, expected {arity[0]}")
    for s in range(2, partition.rank + 1):
        for span_order, ids in _clique_polyads(partition, s):
            found = len(partition.cells_with_polyad(s, ids))
            if found != arity[s - 1]:
                raise InputError(f"Arity mismatch: polyad {list(ids)} over parts {list(span_order)} "
                                 f"has {found} cells, expected {arity[s - 1]}")
    if not is_equitable(partition.vertex_partition()):
        return RegularityReport(verdict=False, witness=Witness(location="vertex partition is not equitable"))
    if partition.rank == 1:
        return RegularityReport(verdict=True)
    d0 = min(Fraction(1, a) for a in arity[1:])
    epsilon = f(d0)
    for s in range(2, partition.rank + 1):
        for cell_id in range(len(partition.cells(s))):
            report = is_eps_regular_in_polyad(partition.cell_graph(s, cell_id),
                                              partition.underlying_polyad(s, cell_id),
                                              epsilon, Fraction(1, arity[s - 1]), mode)
            if not report.verdict:
                report.witness.location = f"level {s} cell {cell_id}: {report.witness.location}"
                report.elapsed_ms = int((time.perf_counter() - started) * 1000)
                return report
    return RegularityReport(verdict=True, stats={"epsilon": format_rational(epsilon)},
                            elapsed_ms=int((time.perf_counter() - started) * 1000))
