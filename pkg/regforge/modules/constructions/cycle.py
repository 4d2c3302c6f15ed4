"""
Tight-cycle pasting and the correspondence between bipartite graphs on (V^1 x ... x V^{k-1}, V^k) and k-graphs.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Mapping

from regforge.common.errors import InputError
from regforge.common.rational import RationalLike, parse_rational
from regforge.common.rng import make_rng
from regforge.modules.hypergraph.core import (BipartiteGraph, Edge, KGraph, VertexLayout, canonical_edge,
                                              complete_kgraph)

logger = logging.getLogger(__name__)


def tight_cycle(k: int) -> KGraph:
    """The tight 2k-cycle: edges {j, j+1, ..., j+k-1} mod 2k, k-partite on classes {i, i+k}."""
    if k < 2:
        raise InputError(f"The tight cycle needs k >= 2, got {k}")
    layout = VertexLayout.from_sets([(i, i + k) for i in range(k)], [f"B{i}" for i in range(k)])
    return KGraph.build(layout, k, [[(j + t) % (2 * k) for t in range(k)] for j in range(2 * k)])


def cycle_ground_layout(k: int, n: int) -> VertexLayout:
    """2k disjoint ground sets V^0..V^{2k-1} of size n, one per cycle vertex."""
    return VertexLayout.contiguous([(f"U{x}", n) for x in range(2 * k)])


def cycle_edge_layout(ground: VertexLayout, cycle_edge: Edge) -> VertexLayout:
    """Layout of the ground sets of one cycle edge, ordered by cycle class."""
    k = len(cycle_edge)
    return ground.sub(sorted(cycle_edge, key=lambda x: x % k))


def paste_cycle(k: int, ground: VertexLayout, per_edge: Mapping[Edge, KGraph]) -> KGraph:
    """Edge-disjoint union of the H_e, one k-partite k-graph per edge e of the tight 2k-cycle.

    H_e must live on the ground sets of its cycle edge; missing cycle edges contribute nothing.
    The result is k-partite on the classes V^i + V^{i+k}.
    """
    if ground.num_classes != 2 * k:
        raise InputError(f"Expected {2 * k} ground sets, got {ground.num_classes}")
    cycle = tight_cycle(k)
    merged = ground.merged([[i, i + k] for i in range(k)], [f"W{i}" for i in range(k)])
    stray = set(per_edge) - cycle.edges
    if stray:
        raise InputError(f"class-mismatch: {min(stray)} is not an edge of the tight {2 * k}-cycle")
    edges = set()
    total = 0
    for cycle_edge in cycle.sorted_edges():
        graph = per_edge.get(cycle_edge)
        if graph is None:
            continue
        expected = {ground.vertex_set(x) for x in cycle_edge}
        if graph.k != k or {frozenset(c.vertices) for c in graph.layout.classes} != expected:
            raise InputError(f"class-mismatch: H_{cycle_edge} is not k-partite on its ground sets")
        edges.update(graph.edges)
        total += graph.e
        if len(edges) != total:
            raise InputError(f"overlap-detected: H_{cycle_edge} shares edges with an earlier H_e")
    return KGraph(merged, k, frozenset(canonical_edge(merged, e, k) for e in edges))


def random_cycle_instance(k: int, n: int, s: int, seed: int) -> KGraph:
    """Pasted instance whose every H_e keeps a uniformly random floor(n^k / 2^s) of its cells."""
    if n < 1 or s < 0:
        raise InputError("Need n >= 1 and s >= 0")
    ground = cycle_ground_layout(k, n)
    per_edge: Dict[Edge, KGraph] = {}
    keep = n ** k // 2 ** s
    for cycle_edge in tight_cycle(k).sorted_edges():
        layout = cycle_edge_layout(ground, cycle_edge)
        cells = complete_kgraph(layout).sorted_edges()
        rng = make_rng(seed, "cycle", k, n, s, *cycle_edge)
        chosen = rng.choice(len(cells), size=keep, replace=False)
        per_edge[cycle_edge] = KGraph(layout, k, frozenset(cells[j] for j in chosen))
    if keep * 2 ** s != n ** k:
        logger.warning("n^k = %d is not divisible by 2^%d; each H_e keeps %d cells", n ** k, s, keep)
    return paste_cycle(k, ground, per_edge)


def hypergraph_from_bipartite(graph: BipartiteGraph, layout: VertexLayout) -> KGraph:
    """H_G = {(v_1, ..., v_k) : ((v_1, ..., v_{k-1}), v_k) in G}, inverse of aux_graph(., k-1)."""
    k = layout.num_classes
    if k < 2:
        raise InputError("H_G needs at least two classes")
    last = layout.vertex_set(k - 1)
    edges: List[Edge] = []
    for left, right in graph.edges:
        if not isinstance(left, tuple) or len(left) != k - 1:
            raise InputError(f"malformed composite vertex {left!r}: expected a {k - 1}-tuple")
        for j, v in enumerate(left):
            if layout.class_of.get(v) != j:
                raise InputError(f"malformed composite vertex {left!r}: {v} is not in class {layout.labels[j]}")
        if right not in last:
            raise InputError(f"Right vertex {right!r} is not in class {layout.labels[k - 1]}")
        edges.append(tuple(sorted(left + (right,))))
    return KGraph(layout, k, frozenset(edges))


def expected_pasted_density(k: int, edge_density: RationalLike) -> Fraction:
    """(2k / 2^k) d_e, the density of the pasted graph when every H_e has density d_e."""
    return Fraction(2 * k, 2 ** k) * parse_rational(edge_density)
