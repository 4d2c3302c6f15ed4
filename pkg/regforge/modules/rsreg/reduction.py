"""
The k-reduction implication: an f-equitable partition under which every large sub-polyad keeps two thirds
of the polyad density yields a perfectly <2 sqrt(delta)>-regular partition of G_H^k.
"""
import logging
from fractions import Fraction
from typing import Optional

from regforge.common.errors import InputError
from regforge.common.rational import RationalLike, format_rational, parse_rational
from regforge.common.reports import ClaimReport
from regforge.modules.deltareg.pair import SqrtThreshold
from regforge.modules.deltareg.partition import is_vertex_partition_delta_regular, product_side_partition
from regforge.modules.hypergraph.core import KGraph, aux_graph
from regforge.modules.partitions.hierarchy import KPartitionHierarchy, parts_by_class
from regforge.modules.rsreg.polyad import (DensityFunction, arity_of, density_floor, is_f_equitable,
                                           transversal_polyads)

logger = logging.getLogger(__name__)

N0_CAVEAT = "the claim assumes |V(H)| >= n_0(delta, |P|); micro-scale outcomes are advisory"


def k_reduction_check(graph: KGraph, partition: KPartitionHierarchy, delta: RationalLike,
                      f: Optional[DensityFunction] = None) -> ClaimReport:
    """Evaluate the hypotheses, then the perfect <2 sqrt(delta)>-regularity of E_k(P) with V_k(P) on G_H^k."""
    claim = "k-reduction"
    delta = parse_rational(delta)
    k = graph.k
    if k < 2 or graph.layout.num_classes != k:
        raise InputError("Expected a k-graph on exactly k >= 2 classes")
    if partition.rank != k - 1:
        raise InputError(f"Expected a rank-{k - 1} partition, got rank {partition.rank}")
    parts_by_class(partition, graph.layout)
    f = f or DensityFunction.for_reduction(k, delta)
    arity = arity_of(partition)
    if arity is None:
        return ClaimReport(claim=claim, status="vacuous", notes=["clique sets are not split uniformly"])
    equitable = is_f_equitable(partition, arity, f)
    if not equitable.verdict:
        return ClaimReport(claim=claim, status="vacuous", report=equitable,
                           notes=[f"partition is not f-equitable for f = {f}"])
    polyads = 0
    for span_order, _, polyad, local in transversal_polyads(graph, partition):
        polyads += 1
        lowest, overall = density_floor(local, polyad, delta)
        if lowest is not None and lowest < Fraction(2, 3) * overall:
            return ClaimReport(claim=claim, status="vacuous",
                               notes=[f"sub-polyad density {format_rational(lowest)} below 2/3 of "
                                      f"{format_rational(overall)} over parts {list(span_order)}"])
    threshold = SqrtThreshold(Fraction(2), delta)
    report = is_vertex_partition_delta_regular(aux_graph(graph, k - 1),
                                               product_side_partition(graph, partition, k - 1),
                                               threshold, mode="perfect")
    details = {"arity": list(arity), "polyads": polyads, "threshold": str(threshold)}
    if report.verdict:
        return ClaimReport(claim=claim, status="holds", report=report, details=details, notes=[N0_CAVEAT])
    logger.warning("Hypotheses hold but G_H^k is not perfectly <%s>-regular; %s", threshold, N0_CAVEAT)
    return ClaimReport(claim=claim, status="violated", report=report, details=details, notes=[N0_CAVEAT])
