"""
The triangle-free tripartite counterexample: a random tripartite graph with one edge removed from every
triangle, its blow-ups, and the exact bilinear-form check that blowing up keeps the strengthened regularity.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from regforge.common.errors import InputError
from regforge.common.rational import RationalLike, format_rational, parse_rational
from regforge.common.reports import RegularityReport, Witness
from regforge.common.rng import bernoulli_mask, make_rng
from regforge.modules.hypergraph.core import Edge, KGraph, VertexLayout

logger = logging.getLogger(__name__)

CLASS_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class CounterexampleResult:
    """G_0 with the bookkeeping of the triangle removal"""
    graph: KGraph
    triangles_before: int
    removed: Dict[Tuple[int, int], List[Edge]] = field(default_factory=dict)
    window_ok: bool = True

    @property
    def removal_counts(self) -> Dict[str, int]:
        return {f"{a}-{b}": len(self.removed.get((a, b), [])) for a, b in CLASS_PAIRS}


@dataclass(frozen=True)
class BlowUpMap:
    """Each base vertex v becomes the block of m new vertices blocks[v]"""
    base: KGraph
    m: int
    blocks: Dict[int, Tuple[int, ...]]

    def block_of(self) -> Dict[int, int]:
        return {w: v for v, block in self.blocks.items() for w in block}


def parameter_window(delta: Fraction, q: Fraction) -> Tuple[Fraction, Fraction]:
    """64 / (delta^2 q) <= k <= delta^3 / (4 q^2)"""
    return 64 / (delta ** 2 * q), delta ** 3 / (4 * q ** 2)


def tripartite_layout(k: int) -> VertexLayout:
    return VertexLayout.contiguous([("V1", k), ("V2", k), ("V3", k)])


def _adjacency(graph: KGraph) -> Dict[int, int]:
    adjacency = {v: 0 for v in graph.layout.vertices}
    for u, v in graph.edges:
        adjacency[u] |= 1 << v
        adjacency[v] |= 1 << u
    return adjacency


def count_triangles(graph: KGraph) -> int:
    """Number of triangles of a 2-graph, by bitset intersection over edges."""
    if graph.k != 2:
        raise InputError("Triangles are counted in 2-graphs")
    adjacency = _adjacency(graph)
    return sum(bin(adjacency[u] & adjacency[v]).count("1") for u, v in graph.edges) // 3


def triangles(graph: KGraph) -> List[Edge]:
    """All triangles as sorted triples, in lexicographic order."""
    if graph.k != 2:
        raise InputError("Triangles are listed in 2-graphs")
    adjacency = _adjacency(graph)
    found = []
    for u, v in graph.sorted_edges():
        common = adjacency[u] & adjacency[v] & ~((1 << (v + 1)) - 1)
        while common:
            low = common & -common
            found.append((u, v, low.bit_length() - 1))
            common ^= low
    return sorted(found)


def counterexample_gen(delta: RationalLike, q: RationalLike, k: int, seed: int,
                       enforce_window: bool = False) -> CounterexampleResult:
    """Keep each cross pair with probability q, then break every triangle in canonical order,
    taking the removed edge from the class pairs round-robin and skipping triangles already broken."""
    delta, q = parse_rational(delta), parse_rational(q)
    if not 0 < q <= 1:
        raise InputError(f"q must lie in (0, 1], got {format_rational(q)}")
    if k < 1:
        raise InputError(f"Class size must be positive, got {k}")
    low, high = parameter_window(delta, q)
    window_ok = low <= k <= high
    if not window_ok:
        message = (f"k={k} is outside the window [{format_rational(low)}, {format_rational(high)}] "
                   f"for delta={format_rational(delta)}, q={format_rational(q)}")
        if enforce_window:
            raise InputError(f"precondition-unmet: {message}")
        logger.warning("Toy mode: %s", message)
    layout = tripartite_layout(k)
    rng = make_rng(seed, "counterexample", k)
    edges = set()
    for a, b in CLASS_PAIRS:
        candidates = list(itertools.product(layout.classes[a].vertices, layout.classes[b].vertices))
        kept = bernoulli_mask(rng, q, len(candidates))
        edges.update(pair for pair, keep in zip(candidates, kept) if keep)
    before = KGraph(layout, 2, frozenset(edges))
    found = triangles(before)
    removed: Dict[Tuple[int, int], List[Edge]] = {pair: [] for pair in CLASS_PAIRS}
    turn = 0
    for triangle in found:
        sides = [(triangle[a], triangle[b]) for a, b in CLASS_PAIRS]
        if not all(side in edges for side in sides):
            continue
        choice = turn % len(CLASS_PAIRS)
        edges.discard(sides[choice])
        removed[CLASS_PAIRS[choice]].append(sides[choice])
        turn += 1
    graph = KGraph(layout, 2, frozenset(edges))
    logger.info("✓ Counterexample k=%d: %d edges kept, %d triangles broken", k, graph.e, len(found))
    return CounterexampleResult(graph, len(found), removed, window_ok)


def blow_up(graph: KGraph, m: int) -> Tuple[KGraph, BlowUpMap]:
    """Replace each vertex by m new vertices and each edge by a complete bipartite block."""
    if m < 1:
        raise InputError(f"Blow-up multiplicity must be positive, got {m}")
    if graph.k != 2:
        raise InputError("Only 2-graphs are blown up")
    layout = VertexLayout.contiguous([(c.label, len(c.vertices) * m) for c in graph.layout.classes])
    blocks: Dict[int, Tuple[int, ...]] = {}
    for base_class, new_class in zip(graph.layout.classes, layout.classes):
        for position, v in enumerate(base_class.vertices):
            start = new_class.vertices[0] + position * m
            blocks[v] = tuple(range(start, start + m))
    edges = frozenset(tuple(sorted((x, y))) for u, v in graph.edges for x in blocks[u] for y in blocks[v])
    return KGraph(layout, 2, edges), BlowUpMap(graph, m, blocks)


def _peel(x: List[Fraction], norm: int) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    residual = list(x)
    weight = Fraction(1)
    terms: List[Tuple[Fraction, Tuple[int, ...]]] = []
    while weight > 0:
        order = sorted(range(len(residual)), key=lambda i: (-residual[i], i))
        chosen = set(order[:norm])
        rest = [residual[i] for i in range(len(residual)) if i not in chosen]
        step = min([residual[i] for i in chosen] + [weight - max(rest, default=Fraction(0))])
        step = min(step, weight)
        terms.append((step, tuple(1 if i in chosen else 0 for i in range(len(residual)))))
        for i in chosen:
            residual[i] -= step
        weight -= step
    return terms


def convex_decompose(x: Sequence[RationalLike]) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    """x as a convex combination of binary vectors.

    With an integral norm every vector has norm |x|_1; otherwise norms are floor or ceil of |x|_1 with mean |x|_1.
    """
    values = [parse_rational(v) for v in x]
    for index, value in enumerate(values):
        if not 0 <= value <= 1:
            raise InputError(f"component-out-of-range: x[{index}] = {format_rational(value)}")
    norm = sum(values, Fraction(0))
    if norm.denominator == 1:
        terms = _peel(values, int(norm))
    else:
        lifted = _peel(values + [floor(norm) + 1 - norm], floor(norm) + 1)
        terms = [(w, y[:-1]) for w, y in lifted]
    merged: Dict[Tuple[int, ...], Fraction] = {}
    for weight, vector in terms:
        if weight > 0:
            merged[vector] = merged.get(vector, Fraction(0)) + weight
    return sorted(((w, y) for y, w in merged.items()), key=lambda t: t[1], reverse=True)


def _biadjacency(graph: KGraph, a: int, b: int) -> np.ndarray:
    layout = graph.layout
    rows = {v: i for i, v in enumerate(layout.classes[a].vertices)}
    cols = {v: j for j, v in enumerate(layout.classes[b].vertices)}
    matrix = np.zeros((len(rows), len(cols)), dtype=object)
    for u, v in graph.edges:
        if u in rows and v in cols:
            matrix[rows[u], cols[v]] = 1
        elif v in rows and u in cols:
            matrix[rows[v], cols[u]] = 1
    return matrix


def _block_fractions(blow: BlowUpMap, subset: Iterable[int], vertices: Sequence[int]) -> np.ndarray:
    chosen = frozenset(subset)
    return np.array([Fraction(len(chosen.intersection(blow.blocks[v])), blow.m) for v in vertices], dtype=object)


def verify_blowup_regularity(base: KGraph, m: int, left: Iterable[int], right: Iterable[int], delta: RationalLike,
                             pair: Tuple[int, int] = (0, 1)) -> RegularityReport:
    """e(S, T) >= (1 - delta) d(V_a, V_b) |S| |T| in the m-fold blow-up, through e(S, T) = m^2 s^T A t.

    s and t are split into binary vectors; each term is the base pair (S_i, T_j), which the base graph
    must satisfy at density factor 1 - delta.
    """
    delta = parse_rational(delta)
    a, b = pair
    blown, blow = blow_up(base, m)
    left, right = frozenset(left), frozenset(right)
    k_a, k_b = base.layout.sizes[a], base.layout.sizes[b]
    if not left <= blown.layout.vertex_set(a) or not right <= blown.layout.vertex_set(b):
        raise InputError("S and T must lie in the blown-up classes of the chosen pair")
    if len(left) < delta * m * k_a or len(right) < delta * m * k_b:
        raise InputError(f"size-preconditions: |S|={len(left)}, |T|={len(right)} below delta*m*k")
    matrix = _biadjacency(base, a, b)
    s = _block_fractions(blow, left, base.layout.classes[a].vertices)
    t = _block_fractions(blow, right, base.layout.classes[b].vertices)
    identity = m * m * (s @ matrix @ t)
    direct = sum(1 for u, v in blown.edges if (u in left and v in right) or (v in left and u in right))
    if identity != direct:
        raise ArithmeticError(f"Bilinear identity broken: {identity} != {direct}")
    d = Fraction(int(matrix.sum()), k_a * k_b)
    factor = 1 - delta
    bound = factor * d * len(left) * len(right)
    left_terms, right_terms = convex_decompose(list(s)), convex_decompose(list(t))
    base_ok = True
    recombined = Fraction(0)
    for w, y in left_terms:
        for u, z in right_terms:
            y_arr, z_arr = np.array(y, dtype=object), np.array(z, dtype=object)
            edges = y_arr @ matrix @ z_arr
            recombined += w * u * edges
            if edges < factor * d * sum(y) * sum(z):
                base_ok = False
    notes = [] if base_ok else ["some base pair (S_i, T_j) misses the (1 - delta) density bound"]
    if m * m * recombined != direct:
        raise ArithmeticError("Convex decomposition does not reconstruct e(S, T)")
    verdict = direct >= bound
    witness = None if verdict else Witness(left=sorted(left), right=sorted(right), density=format_rational(
        Fraction(direct, len(left) * len(right))), threshold=format_rational(factor * d), location=f"pair {pair}")
    return RegularityReport(verdict=verdict, mode="exact", witness=witness, notes=notes,
                            stats={"edges": direct, "bound": format_rational(bound),
                                   "terms": [len(left_terms), len(right_terms)], "base_pairs_ok": base_ok})
