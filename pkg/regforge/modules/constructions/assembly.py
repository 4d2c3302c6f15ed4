"""
Inductive assembly of the lower-bound partitions H_1 > ... > H_s of K(V^1, ..., V^k).
k = 2 calls the core provider directly; k >= 3 recurses on k - 1, picks F_(j) and V_(j) through index maps,
runs the provider on (V^1 x ... x V^{k-1}, V^k) and converts each bipartite part into a k-graph.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from regforge.common.errors import InputError
from regforge.common.rng import make_rng
from regforge.modules.constructions.cycle import hypergraph_from_bipartite
from regforge.modules.constructions.provider import CorePartitionProvider, stub_core_provider
from regforge.modules.growth.functions import check_index_maps
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph, VertexLayout, complete_kgraph
from regforge.modules.partitions.sets import SetPartition, refines

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToyIndexMaps:
    """Desk-scale stand-ins for j -> A_k*(j) (F-index) and j -> A_k(j) (V-index)"""
    f_index: Callable[[int], int] = lambda j: j
    v_index: Callable[[int], int] = lambda j: j

    def table(self, s: int) -> List[Tuple[int, int, int]]:
        rows = [(j, int(self.f_index(j)), int(self.v_index(j))) for j in range(1, s + 1)]
        for (_, f0, v0), (j, f1, v1) in zip(rows, rows[1:]):
            if f1 < f0 or v1 < v0:
                raise InputError(f"Toy index maps must be monotone; step {j} goes back")
        if rows and (rows[0][1] < 1 or rows[0][2] < 1):
            raise InputError("Toy indices start at 1")
        return rows


@dataclass(frozen=True)
class AssemblyResult:
    """levels[j - 1] is H_j, a tuple of 2^j k-graphs partitioning K(V^1, ..., V^k)"""
    layout: VertexLayout
    levels: Tuple[Tuple[KGraph, ...], ...]
    index_maps: Tuple[Tuple[int, int, int], ...] = ()
    toy: bool = True
    notes: List[str] = field(default_factory=list)


def toy_refinement_chain(vertices: Sequence[int], m: int, seed: int) -> List[SetPartition]:
    """V_1 > ... > V_m where V_i halves every part of V_{i-1} as evenly as possible (2^i parts)."""
    if len(vertices) < 2 ** m:
        raise InputError(f"Cannot refine {len(vertices)} vertices {m} times by halving")
    rng = make_rng(seed, "chain", len(vertices), m)
    chain: List[SetPartition] = []
    current = [list(vertices)]
    for _ in range(m):
        halves = []
        for part in current:
            order = [part[j] for j in rng.permutation(len(part))]
            half = (len(order) + 1) // 2
            halves.extend([sorted(order[:half]), sorted(order[half:])])
        current = halves
        chain.append(SetPartition.of(current))
    return chain


def _level_maps(k: int, s: int, chain_length: int, maps: Optional[ToyIndexMaps]) -> List[Tuple[int, int, int]]:
    if maps is None:
        return check_index_maps(k, s, chain_length)
    table = maps.table(s)
    if table[-1][2] > chain_length:
        raise InputError(f"index-out-of-range: V-index {table[-1][2]} exceeds chain length {chain_length}")
    return table


def _split_pairs(levels: Sequence[Sequence[frozenset]], left: Sequence, right: Sequence,
                 layout: VertexLayout) -> Tuple[Tuple[KGraph, ...], ...]:
    result = []
    for level in levels:
        parts = []
        for part in level:
            if layout.num_classes == 2:
                parts.append(KGraph(layout, 2, frozenset(tuple(sorted(p)) for p in part)))
            else:
                parts.append(hypergraph_from_bipartite(BipartiteGraph(tuple(left), tuple(right), part), layout))
        result.append(tuple(parts))
    return tuple(result)


def _assemble(layout: VertexLayout, s: int, provider: CorePartitionProvider, maps: Optional[ToyIndexMaps],
              vertex_chains: Sequence[Sequence[SetPartition]]) -> AssemblyResult:
    k = layout.num_classes
    table = _level_maps(k, s, len(vertex_chains[0]), maps)
    right = layout.classes[k - 1].vertices
    right_chain = [vertex_chains[k - 1][v - 1] for _, _, v in table]
    if k == 2:
        left = layout.classes[0].vertices
        left_chain = [vertex_chains[0][v - 1] for _, _, v in table]
        levels = provider.partitions(left, right, s, left_chain, right_chain)
        return AssemblyResult(layout, _split_pairs(levels, left, right, layout), tuple(table), maps is not None)
    lower = layout.sub(range(k - 1))
    depth = max(f for _, f, _ in table)
    inner = _assemble(lower, depth, provider, maps, vertex_chains[:k - 1])
    left = tuple(itertools.product(*(c.vertices for c in lower.classes)))
    left_chain = [SetPartition.of([[lower.to_composite(e) for e in part.edges] for part in inner.levels[f - 1]])
                  for _, f, _ in table]
    levels = provider.partitions(left, right, s, left_chain, right_chain)
    return AssemblyResult(layout, _split_pairs(levels, left, right, layout), tuple(table), maps is not None)


def validate_assembly(result: AssemblyResult) -> None:
    """Raise InputError unless every H_j is an equipartition of K(V) into 2^j parts refining H_{j-1}."""
    complete = complete_kgraph(result.layout).edges
    previous = SetPartition.of([complete])
    for j, level in enumerate(result.levels, start=1):
        if len(level) != 2 ** j:
            raise InputError(f"|H_{j}| = {len(level)}, expected {2 ** j}")
        partition = SetPartition.of([part.edges for part in level])
        if partition.universe != complete:
            raise InputError(f"H_{j} does not partition the complete k-partite k-graph")
        if any(part.e * 2 ** j != len(complete) for part in level):
            raise InputError(f"H_{j} is not equitable with density 2^-{j}")
        if not refines(partition, previous):
            raise InputError(f"H_{j} does not refine H_{j - 1}")
        previous = partition


def assemble_inductive(k: int, s: int, n: int, provider: Optional[CorePartitionProvider] = None,
                       maps: Optional[ToyIndexMaps] = None, seed: int = 0) -> AssemblyResult:
    """Assemble H_1 > ... > H_s on k classes of size n.

    Without toy maps the index maps come from the growth hierarchy, which overflow any desk-scale chain
    and raise index-out-of-range.
    """
    if k < 2 or s < 1 or n < 1:
        raise InputError("Need k >= 2, s >= 1 and n >= 1")
    provider = provider or stub_core_provider(seed)
    layout = VertexLayout.contiguous([(f"V{h + 1}", n) for h in range(k)])
    chain_length = n.bit_length() - 1
    chains = [toy_refinement_chain(c.vertices, chain_length, seed + h) for h, c in enumerate(layout.classes)]
    result = _assemble(layout, s, provider, maps, chains)
    validate_assembly(result)
    if not provider.hardness_certified:
        result.notes.append(f"{provider.name} provider: structure certified, hardness not certified")
    logger.info("✓ Assembled %d levels of %d-graph partitions on %d x %d vertices", s, k, k, n)
    return result
