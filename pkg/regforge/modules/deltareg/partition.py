"""
<delta>-regular vertex partitions of bipartite graphs, <delta>-good k-partitions, and
<delta>-regular partitions of k-graphs through their auxiliary graphs.
"""
import itertools
import logging
import time
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from regforge.common.errors import CapExceededError, InputError
from regforge.common.rational import RationalLike, parse_rational
from regforge.common.reports import EditCertificate, RegularityReport, Witness
from regforge.config import get_settings
from regforge.modules.deltareg.pair import (HALF, DeltaLike, adjacency_matrix, as_threshold, is_pair_delta_regular,
                                            pair_violation)
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph, VertexLayout, aux_graph, aux_graph_restricted
from regforge.modules.partitions.hierarchy import KPartitionHierarchy, parts_by_class, validate_k_partition
from regforge.modules.partitions.sets import SetPartition

logger = logging.getLogger(__name__)

MODES = ("perfect", "certificate", "search")


def _sides(graph: BipartiteGraph, partition: SetPartition) -> Tuple[List[int], List[int]]:
    left, right = set(graph.left), set(graph.right)
    if left & right:
        raise InputError("Bipartite sides share vertices")
    if partition.universe != left | right:
        raise InputError("Partition universe differs from the graph's vertex set")
    left_parts, right_parts = [], []
    for index, part in enumerate(partition.parts):
        if part <= left:
            left_parts.append(index)
        elif part <= right:
            right_parts.append(index)
        else:
            raise InputError(f"Part {index} straddles both sides of the graph")
    return left_parts, right_parts


def _apply_certificate(graph: BipartiteGraph, certificate: EditCertificate, budget: int) -> BipartiteGraph:
    added, removed = certificate.added_edges(), certificate.removed_edges()
    if len(added) + len(removed) > budget:
        raise InputError(f"Certificate uses {len(added) + len(removed)} edits, budget is {budget}")
    if added & graph.edges:
        raise InputError("Certificate adds an existing edge")
    if not removed <= graph.edges:
        raise InputError("Certificate removes a missing edge")
    for u, v in added:
        if u not in graph.left_index or v not in graph.right_index:
            raise InputError(f"Certificate edge {(u, v)} is not between the two sides")
    return graph.with_edits(added, removed)


def _min_flips(adjacency: np.ndarray, threshold, factor: Fraction, limit: int) -> Optional[int]:
    """Fewest cell flips making a pair regular, if at most limit."""
    a, b = adjacency.shape
    min_rows, min_cols = threshold.min_size(a), threshold.min_size(b)
    cells = [(i, j) for i in range(a) for j in range(b)]
    for flips in range(0, min(limit, len(cells)) + 1):
        for chosen in itertools.combinations(cells, flips):
            edited = adjacency.copy()
            for i, j in chosen:
                edited[i, j] ^= 1
            if pair_violation(edited, min_rows, min_cols, factor) is None:
                return flips
    return None


def is_vertex_partition_delta_regular(graph: BipartiteGraph, partition: SetPartition, delta: DeltaLike,
                                      mode: str = "perfect", certificate: Optional[EditCertificate] = None,
                                      factor: RationalLike = HALF) -> RegularityReport:
    """Every (left part, right part) pair is <delta>-regular, after at most floor(delta e) edits in the given mode."""
    started = time.perf_counter()
    if mode not in MODES:
        raise InputError(f"Unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    threshold = as_threshold(delta)
    factor = parse_rational(factor)
    left_parts, right_parts = _sides(graph, partition)
    budget = threshold.budget(graph.e)
    stats: Dict[str, object] = {"pairs": len(left_parts) * len(right_parts), "budget": budget}
    edits = 0
    if mode == "certificate":
        graph = _apply_certificate(graph, certificate or EditCertificate(), budget)
        edits = (certificate or EditCertificate()).size
    pairs = [(i, j) for i in left_parts for j in right_parts]
    if mode == "search":
        settings = get_settings()
        if graph.e > settings.edit_edge_cap:
            raise CapExceededError(f"Instance too large for edit search: e(G) = {graph.e} > {settings.edit_edge_cap}")
        for i, j in pairs:
            cells = len(partition.parts[i]) * len(partition.parts[j])
            if cells > settings.edit_cell_cap:
                raise CapExceededError(f"Instance too large for edit search: pair ({i}, {j}) has {cells} cells")
        for i, j in pairs:
            pair = graph.induced(partition.parts[i], partition.parts[j])
            flips = _min_flips(adjacency_matrix(pair), threshold, factor, budget - edits)
            if flips is None:
                elapsed = int((time.perf_counter() - started) * 1000)
                witness = Witness(location=f"pair ({i}, {j}) needs more than the remaining {budget - edits} edits")
                return RegularityReport(verdict=False, mode="search", witness=witness, edits=edits,
                                        elapsed_ms=elapsed, stats=stats)
            edits += flips
        elapsed = int((time.perf_counter() - started) * 1000)
        return RegularityReport(verdict=True, mode="search", edits=edits, elapsed_ms=elapsed, stats=stats)
    report_mode = "certificate" if mode == "certificate" else "exact"
    for i, j in pairs:
        pair = graph.induced(partition.parts[i], partition.parts[j])
        report = is_pair_delta_regular(pair, threshold, factor)
        if not report.verdict:
            report.witness.location = f"pair ({i}, {j})"
            elapsed = int((time.perf_counter() - started) * 1000)
            return RegularityReport(verdict=False, mode=report_mode, witness=report.witness, edits=edits,
                                    elapsed_ms=elapsed, stats=stats)
    elapsed = int((time.perf_counter() - started) * 1000)
    return RegularityReport(verdict=True, mode=report_mode, edits=edits, elapsed_ms=elapsed, stats=stats)


def _require_valid(partition: KPartitionHierarchy):
    validity = validate_k_partition(partition)
    if not validity.verdict:
        raise InputError(f"Precondition unmet: invalid k-partition ({validity.witness.location})")


def is_good_partition(partition: KPartitionHierarchy, delta: DeltaLike,
                      factor: RationalLike = HALF) -> RegularityReport:
    """Every cell's auxiliary graphs against its polyad are <delta>-regular."""
    started = time.perf_counter()
    _require_valid(partition)
    checked = 0
    if partition.rank == 1:
        return RegularityReport(verdict=True, notes=["1-partitions are trivially good"])
    for s in range(2, partition.rank + 1):
        for cell_id in range(len(partition.cells(s))):
            graph = partition.cell_graph(s, cell_id)
            polyad = partition.underlying_polyad(s, cell_id)
            for i in range(s):
                report = is_pair_delta_regular(aux_graph_restricted(graph, polyad, i), delta, factor)
                checked += 1
                if not report.verdict:
                    report.witness.location = f"level {s} cell {cell_id} side {i}"
                    return RegularityReport(verdict=False, witness=report.witness, stats={"checked": checked},
                                            elapsed_ms=int((time.perf_counter() - started) * 1000))
    return RegularityReport(verdict=True, stats={"checked": checked},
                            elapsed_ms=int((time.perf_counter() - started) * 1000))


def product_cells(layout: VertexLayout, partition: KPartitionHierarchy, i: int) -> Tuple[FrozenSet, ...]:
    """E_i(P): the cells of the top level lying in the product of the classes other than i, as composite sets."""
    grouped = parts_by_class(partition, layout)
    k = layout.num_classes
    if k == 2:
        return tuple(frozenset((v,) for v in partition.vertex_parts[z]) for z in grouped[1 - i])
    others = frozenset(j for j in range(k) if j != i)
    class_of_part = {z: c for c, ids in enumerate(grouped) for z in ids}
    cells = []
    for cell_id, cell in enumerate(partition.cells(k - 1)):
        span_classes = [class_of_part[z] for z in partition.span(k - 1, cell_id)]
        if len(set(span_classes)) == k - 1 and frozenset(span_classes) == others:
            cells.append(frozenset(layout.to_composite(e) for e in cell.edges))
    return tuple(cells)


def product_side_partition(graph: KGraph, partition: KPartitionHierarchy, i: int) -> SetPartition:
    """E_i(P) together with V_i(P), partitioning both sides of G_H^i."""
    grouped = parts_by_class(partition, graph.layout)
    vertex_side = tuple(partition.vertex_parts[z] for z in grouped[i])
    return SetPartition(product_cells(graph.layout, partition, i) + vertex_side)


def is_kgraph_delta_regular_partition(graph: KGraph, partition: KPartitionHierarchy, delta: DeltaLike,
                                      mode: str = "perfect",
                                      certificates: Optional[Sequence[Optional[EditCertificate]]] = None,
                                      factor: RationalLike = HALF) -> RegularityReport:
    """For every class i, E_i(P) with V_i(P) is a <delta>-regular partition of the auxiliary graph G_H^i."""
    started = time.perf_counter()
    k = graph.k
    if k < 2 or graph.layout.num_classes != k:
        raise InputError("Expected a k-graph on exactly k >= 2 classes")
    if partition.rank != k - 1:
        raise InputError(f"Expected a rank-{k - 1} partition, got rank {partition.rank}")
    parts_by_class(partition, graph.layout)
    good = is_good_partition(partition, delta, factor)
    if not good.verdict:
        good.notes.append("partition is not <delta>-good")
        return good
    if certificates is not None and len(certificates) != k:
        raise InputError(f"Expected {k} certificates, one per class")
    edits = 0
    for i in range(k):
        certificate = certificates[i] if certificates is not None else None
        report = is_vertex_partition_delta_regular(aux_graph(graph, i), product_side_partition(graph, partition, i),
                                                   delta, mode, certificate, factor)
        edits += report.edits
        if not report.verdict:
            report.witness.location = f"class {i}: {report.witness.location}"
            report.edits = edits
            report.elapsed_ms = int((time.perf_counter() - started) * 1000)
            return report
    return RegularityReport(verdict=True, mode="exact" if mode == "perfect" else mode, edits=edits,
                            elapsed_ms=int((time.perf_counter() - started) * 1000))


def union_regularity_check(parts: Sequence[BipartiteGraph], delta: DeltaLike) -> bool:
    """If every part is <delta>-regular then so is their union; returns the implication on this instance."""
    if not parts:
        raise InputError("Need at least one part")
    left, right = set(parts[0].left), set(parts[0].right)
    seen: set = set()
    for index, part in enumerate(parts):
        if set(part.left) != left or set(part.right) != right:
            raise InputError(f"Part {index} lives on different sides")
        if seen & part.edges:
            raise InputError(f"Parts are not edge-disjoint (part {index})")
        seen |= part.edges
    if not all(is_pair_delta_regular(p, delta).verdict for p in parts):
        return True
    union = BipartiteGraph(parts[0].left, parts[0].right, frozenset(seen))
    holds = is_pair_delta_regular(union, delta).verdict
    if not holds:
        logger.error("✗ Union of %d regular parts is not regular", len(parts))
    return holds
