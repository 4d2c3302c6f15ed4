"""
Implication checks for the partition claims.
Each check evaluates the hypotheses on a concrete instance and reports "vacuous" when one fails;
otherwise it evaluates the conclusion and reports "holds" or "violated".
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from regforge.common.errors import InputError
from regforge.common.rational import RationalLike, format_rational, parse_rational
from regforge.common.reports import ClaimReport, EditCertificate, thaw
from regforge.modules.deltareg.partition import (is_good_partition, is_kgraph_delta_regular_partition,
                                                 product_cells)
from regforge.modules.hypergraph.core import Edge, KGraph, VertexLayout, induced
from regforge.modules.partitions.hierarchy import KPartitionHierarchy, parts_by_class, restrict_hierarchy
from regforge.modules.partitions.sets import SetPartition, approx_refines, best_union_approx

logger = logging.getLogger(__name__)


def _aux_edge(layout: VertexLayout, edge: Edge, i: int):
    ordered = layout.to_composite(edge)
    return [list(ordered[:i] + ordered[i + 1:]), ordered[i]]


def _certificates(layout: VertexLayout, k: int, added: Sequence[Edge],
                  removed: Sequence[Edge]) -> List[EditCertificate]:
    """The same edge edits seen through each auxiliary graph."""
    return [
        EditCertificate(added=[_aux_edge(layout, e, i) for e in sorted(added)],
                        removed=[_aux_edge(layout, e, i) for e in sorted(removed)])
        for i in range(k)
    ]


def uniform_refinement_check(partition: KPartitionHierarchy, layout: VertexLayout, coarse: SetPartition,
                             delta: Fraction) -> ClaimReport:
    """A good (k-1)-partition whose E_k part delta-refines a partition of V_1 x ... x V_{k-1} restricts to a
    <3 delta>-regular partition of some member of it."""
    delta = Fraction(delta)
    k = layout.num_classes
    if k < 3:
        raise InputError("The uniform refinement check needs at least three classes")
    if partition.rank != k - 1:
        raise InputError(f"Expected a rank-{k - 1} partition, got rank {partition.rank}")
    parts_by_class(partition, layout)
    claim = "uniform-refinement"
    if not is_good_partition(partition, delta).verdict:
        return ClaimReport(claim=claim, status="vacuous", notes=["partition is not <delta>-good"])
    lower = SetPartition(product_cells(layout, partition, k - 1))
    if coarse.universe != lower.universe:
        raise InputError("The coarse partition must cover V_1 x ... x V_{k-1}")
    if not approx_refines(lower, coarse, delta).verdict:
        return ClaimReport(claim=claim, status="vacuous", notes=["E_k(P) does not delta-refine the coarse partition"])
    chosen = best_union_approx(coarse, lower, delta)
    if not chosen.bound_holds:
        logger.error("✗ No part of the coarse partition is 3 delta-close to a union of cells")
        return ClaimReport(claim=claim, status="violated",
                           details={"part": chosen.index, "difference": chosen.difference})
    sub_layout = layout.sub(range(k - 1))
    target = KGraph(sub_layout, k - 1, frozenset(tuple(sorted(c)) for c in chosen.part))
    union = frozenset(tuple(sorted(c)) for c in chosen.union)
    restricted = restrict_hierarchy(partition, sub_layout.vertices).truncate(k - 2)
    certificates = _certificates(sub_layout, k - 1, sorted(union - target.edges), sorted(target.edges - union))
    report = is_kgraph_delta_regular_partition(target, restricted, 3 * delta, "certificate", certificates)
    details = {
        "part": chosen.index,
        "difference": chosen.difference,
        "bound_holds": chosen.bound_holds,
        "delta": format_rational(3 * delta),
    }
    status = "holds" if report.verdict else "violated"
    if not report.verdict:
        logger.error("✗ Uniform refinement conclusion fails for part %d", chosen.index)
    return ClaimReport(claim=claim, status=status, details=details, report=report)


def _restrict_certificate(certificate: EditCertificate, keep: frozenset) -> EditCertificate:
    def inside(edge) -> bool:
        left, right = edge
        return right in keep and all(v in keep for v in left)

    return EditCertificate(added=[thaw(e) for e in sorted(certificate.added_edges()) if inside(e)],
                           removed=[thaw(e) for e in sorted(certificate.removed_edges()) if inside(e)])


def restriction_check(graph: KGraph, partition: KPartitionHierarchy, delta: RationalLike,
                      subclasses: Sequence[Sequence[int]],
                      certificates: Optional[Sequence[EditCertificate]] = None) -> ClaimReport:
    """A <delta>-regular partition of H whose vertex parts respect every V'_i restricts to a
    <delta/beta>-regular partition of H' = H[V'_1, ..., V'_k], where beta = e(H')/e(H)."""
    claim = "restriction"
    delta = parse_rational(delta)
    k = graph.k
    certificates = list(certificates) if certificates is not None else [EditCertificate() for _ in range(k)]
    target = induced(graph, subclasses)
    keep = frozenset(target.layout.class_of)
    for index, part in enumerate(partition.vertex_parts):
        if part & keep and not part <= keep:
            return ClaimReport(claim=claim, status="vacuous", notes=[f"vertex part {index} is cut by V'"])
    hypothesis = is_kgraph_delta_regular_partition(graph, partition, delta, "certificate", certificates)
    if not hypothesis.verdict:
        return ClaimReport(claim=claim, status="vacuous", notes=["P is not a <delta>-regular partition of H"],
                           report=hypothesis)
    if graph.e == 0 or target.e == 0:
        return ClaimReport(claim=claim, status="vacuous", notes=["H' has no edges"])
    beta = Fraction(target.e, graph.e)
    restricted = restrict_hierarchy(partition, keep)
    report = is_kgraph_delta_regular_partition(target, restricted, delta / beta, "certificate",
                                               [_restrict_certificate(c, keep) for c in certificates])
    status = "holds" if report.verdict else "violated"
    if not report.verdict:
        logger.error("✗ Restriction conclusion fails at beta=%s", format_rational(beta))
    return ClaimReport(claim=claim, status=status, report=report,
                       details={"beta": format_rational(beta), "delta": format_rational(delta / beta)})
