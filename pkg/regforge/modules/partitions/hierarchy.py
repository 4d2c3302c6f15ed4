"""
Hierarchical k-partitions: a vertex partition plus, for every level s, a partition of the
complete multipartite s-graph over the vertex parts into cells, each cell lying in the clique set
of the unique polyad of lower cells recorded with it.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from regforge.common.errors import InputError
from regforge.common.reports import RegularityReport, Witness
from regforge.common.rng import make_rng
from regforge.modules.hypergraph.core import Edge, KGraph, Polyad, VertexLayout, cliques
from regforge.modules.partitions.sets import SetPartition, random_partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    """Edges of one cell and the ids of the lower-level cells forming its polyad"""
    edges: FrozenSet[Edge]
    polyad: FrozenSet[int]


@dataclass(frozen=True)
class KPartitionHierarchy:
    """vertex_parts is P^(1); levels[s - 2] holds the cells of P^(s)"""
    vertex_parts: Tuple[FrozenSet[int], ...]
    levels: Tuple[Tuple[Cell, ...], ...] = ()

    @property
    def rank(self) -> int:
        return 1 + len(self.levels)

    def cells(self, s: int) -> Tuple[Cell, ...]:
        if not 2 <= s <= self.rank:
            raise InputError(f"Level {s} is not in a rank-{self.rank} partition")
        return self.levels[s - 2]

    def vertex_partition(self) -> SetPartition:
        return SetPartition(self.vertex_parts)

    @cached_property
    def part_of(self) -> Dict[int, int]:
        return {v: i for i, part in enumerate(self.vertex_parts) for v in part}

    @cached_property
    def _spans(self) -> Tuple[Tuple[FrozenSet[int], ...], ...]:
        spans: List[Tuple[FrozenSet[int], ...]] = []
        previous: Optional[Tuple[FrozenSet[int], ...]] = None
        for cells in self.levels:
            if previous is None:
                current = tuple(frozenset(c.polyad) for c in cells)
            else:
                current = tuple(
                    frozenset().union(*(previous[i] for i in c.polyad if 0 <= i < len(previous)))
                    for c in cells
                )
            spans.append(current)
            previous = current
        return tuple(spans)

    def span(self, s: int, cell_id: int) -> FrozenSet[int]:
        """Vertex part ids spanned by a cell (a vertex part spans itself)."""
        if s == 1:
            self._check_id(1, cell_id)
            return frozenset([cell_id])
        self._check_id(s, cell_id)
        return self._spans[s - 2][cell_id]

    @cached_property
    def _by_span(self) -> Tuple[Dict[FrozenSet[int], Tuple[int, ...]], ...]:
        index = []
        for spans in self._spans:
            table: Dict[FrozenSet[int], List[int]] = {}
            for cell_id, span in enumerate(spans):
                table.setdefault(span, []).append(cell_id)
            index.append({k: tuple(v) for k, v in table.items()})
        return tuple(index)

    @cached_property
    def _by_polyad(self) -> Tuple[Dict[FrozenSet[int], Tuple[int, ...]], ...]:
        index = []
        for cells in self.levels:
            table: Dict[FrozenSet[int], List[int]] = {}
            for cell_id, cell in enumerate(cells):
                table.setdefault(cell.polyad, []).append(cell_id)
            index.append({k: tuple(v) for k, v in table.items()})
        return tuple(index)

    def cells_on(self, s: int, span: FrozenSet[int]) -> Tuple[int, ...]:
        """Ids of the level-s cells spanning exactly the given vertex parts."""
        if s == 1:
            return tuple(span) if len(span) == 1 else ()
        return self._by_span[s - 2].get(frozenset(span), ())

    def cells_with_polyad(self, s: int, polyad_ids: Iterable[int]) -> Tuple[int, ...]:
        return self._by_polyad[s - 2].get(frozenset(polyad_ids), ())

    def _check_id(self, s: int, cell_id: int):
        count = len(self.vertex_parts) if s == 1 else len(self.cells(s))
        if not 0 <= cell_id < count:
            raise InputError(f"Cell {cell_id} is not in level {s} of the partition")

    def span_layout(self, span_order: Sequence[int]) -> VertexLayout:
        return VertexLayout.from_sets([self.vertex_parts[z] for z in span_order], [f"Z{z}" for z in span_order])

    def cell_graph(self, s: int, cell_id: int) -> KGraph:
        """A cell as an s-graph on the vertex parts it spans."""
        span_order = sorted(self.span(s, cell_id))
        layout = self.span_layout(span_order)
        if s == 1:
            return KGraph(layout, 1, frozenset((v,) for v in self.vertex_parts[cell_id]))
        return KGraph(layout, s, self.cells(s)[cell_id].edges)

    def polyad_from_ids(self, span_order: Sequence[int], ids: Sequence[int]) -> Polyad:
        """Polyad over the given vertex parts; ids[j] is the cell omitting span_order[j]."""
        r = len(span_order)
        layout = self.span_layout(span_order)
        if r == 2:
            parts = tuple(frozenset((v,) for v in self.vertex_parts[i]) for i in ids)
        else:
            lower = self.cells(r - 1)
            parts = tuple(lower[i].edges for i in ids)
        return Polyad(layout, parts)

    def polyad_ids(self, s: int, cell_id: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(span order, ids) of the polyad underlying a cell."""
        cell = self.cells(s)[cell_id]
        span_order = tuple(sorted(self.span(s, cell_id)))
        ids = []
        for z in span_order:
            wanted = frozenset(span_order) - {z}
            match = [i for i in cell.polyad if self.span(s - 1, i) == wanted]
            if len(match) != 1:
                raise InputError(f"Level {s} cell {cell_id} has no unique polyad part omitting Z{z}")
            ids.append(match[0])
        return span_order, tuple(ids)

    def underlying_polyad(self, s: int, cell_id: int) -> Polyad:
        """The polyad U(F) of a level-s cell."""
        span_order, ids = self.polyad_ids(s, cell_id)
        return self.polyad_from_ids(span_order, ids)

    def polyads_over(self, span_order: Sequence[int]) -> Iterator[Tuple[int, ...]]:
        """All polyads of the partition on the given vertex parts, as id tuples."""
        s = len(span_order) - 1
        choices = [self.cells_on(s, frozenset(span_order) - {z}) for z in span_order]
        return itertools.product(*choices)

    def truncate(self, rank: int) -> "KPartitionHierarchy":
        if not 1 <= rank <= self.rank:
            raise InputError(f"Cannot truncate a rank-{self.rank} partition to rank {rank}")
        return KPartitionHierarchy(self.vertex_parts, self.levels[: rank - 1])


def _elementary_symmetric(sizes: Sequence[int], s: int) -> int:
    table = [1] + [0] * s
    for size in sizes:
        for j in range(s, 0, -1):
            table[j] += table[j - 1] * size
    return table[s]


def _invalid(location: str, members: Optional[list] = None) -> RegularityReport:
    return RegularityReport(verdict=False, witness=Witness(location=location, members=members or []))


def validate_k_partition(partition: KPartitionHierarchy) -> RegularityReport:
    """Check that every level partitions Cross_s(P^(1)) into cells inside the clique set of their polyad."""
    seen: set = set()
    for index, part in enumerate(partition.vertex_parts):
        if not part:
            return _invalid(f"vertex part {index} is empty")
        if seen & part:
            return _invalid(f"vertex part {index} overlaps an earlier part", sorted(seen & part))
        seen |= part
    part_of = partition.part_of
    sizes = [len(p) for p in partition.vertex_parts]
    for s in range(2, partition.rank + 1):
        lower_count = len(partition.vertex_parts) if s == 2 else len(partition.cells(s - 1))
        owner: Dict[Edge, int] = {}
        for cell_id, cell in enumerate(partition.cells(s)):
            where = f"level {s} cell {cell_id}"
            if not cell.edges:
                return _invalid(f"{where} is empty")
            if len(cell.polyad) != s or any(not 0 <= i < lower_count for i in cell.polyad):
                return _invalid(f"{where} does not name {s} lower cells", sorted(cell.polyad))
            span = partition.span(s, cell_id)
            if len(span) != s:
                return _invalid(f"{where} polyad spans {len(span)} vertex parts", sorted(span))
            if s > 2:
                lower_spans = {partition.span(s - 1, i) for i in cell.polyad}
                if len(lower_spans) != s or any(len(x) != s - 1 for x in lower_spans):
                    return _invalid(f"{where} polyad cells do not form a polyad", sorted(cell.polyad))
                span_order, ids = partition.polyad_ids(s, cell_id)
                lower_edges = [partition.cells(s - 1)[i].edges for i in ids]
            for edge in sorted(cell.edges):
                if len(edge) != s or any(v not in part_of for v in edge):
                    return _invalid(f"{where} edge is not an s-set of partitioned vertices", [list(edge)])
                if {part_of[v] for v in edge} != span:
                    return _invalid(f"{where} edge lies outside K(polyad)", [list(edge)])
                if s > 2:
                    for z, lower in zip(span_order, lower_edges):
                        sub = tuple(v for v in edge if part_of[v] != z)
                        if sub not in lower:
                            return _invalid(f"{where} edge lies outside K(polyad)", [list(edge)])
                if edge in owner:
                    return _invalid(f"{where} shares an edge with cell {owner[edge]}", [list(edge)])
                owner[edge] = cell_id
        expected = _elementary_symmetric(sizes, s)
        if len(owner) != expected:
            return RegularityReport(
                verdict=False,
                witness=Witness(location=f"level {s} covers {len(owner)} of {expected} cross edges"),
            )
    return RegularityReport(verdict=True, stats={"rank": partition.rank, "vertex_parts": len(sizes)})


def parts_by_class(partition: KPartitionHierarchy, layout: VertexLayout) -> List[List[int]]:
    """Vertex part ids per layout class; the vertex partition must refine the layout."""
    if set(partition.part_of) != set(layout.class_of):
        raise InputError("The vertex partition does not cover the layout's vertices")
    grouped: List[List[int]] = [[] for _ in range(layout.num_classes)]
    for index, part in enumerate(partition.vertex_parts):
        classes = {layout.class_of[v] for v in part}
        if len(classes) != 1:
            raise InputError(f"Vertex part {index} straddles layout classes")
        grouped[classes.pop()].append(index)
    return grouped


def restrict_hierarchy(partition: KPartitionHierarchy, vertices: Iterable[int]) -> KPartitionHierarchy:
    """Keep the vertex parts inside the given vertex set and every cell spanning only kept parts."""
    keep = frozenset(vertices)
    part_map: Dict[int, int] = {}
    kept_parts = []
    for index, part in enumerate(partition.vertex_parts):
        if part <= keep:
            part_map[index] = len(kept_parts)
            kept_parts.append(part)
        elif part & keep:
            raise InputError(f"Vertex part {index} is cut by the restriction")
    levels = []
    id_map = part_map
    for s in range(2, partition.rank + 1):
        new_map: Dict[int, int] = {}
        cells = []
        for cell_id, cell in enumerate(partition.cells(s)):
            if all(i in id_map for i in cell.polyad):
                new_map[cell_id] = len(cells)
                cells.append(Cell(cell.edges, frozenset(id_map[i] for i in cell.polyad)))
        levels.append(tuple(cells))
        id_map = new_map
    return KPartitionHierarchy(tuple(kept_parts), tuple(levels))


def _decompose(partition: KPartitionHierarchy, level: int, cell_id: int,
               part_id: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    if level == 1:
        span_order = tuple(sorted((cell_id, part_id)))
        ids = tuple(z for z in reversed(span_order))
        return [(span_order, ids)]
    span = partition.span(level, cell_id)
    span_order = tuple(sorted(span | {part_id}))
    below_order, below_ids = partition.polyad_ids(level, cell_id)
    choices: Dict[int, List[int]] = {}
    for z, lower_id in zip(below_order, below_ids):
        pieces: List[int] = []
        for sub_order, sub_ids in _decompose(partition, level - 1, lower_id, part_id):
            pieces.extend(partition.cells_with_polyad(level, sub_ids))
        choices[z] = sorted(pieces)
    result = []
    for combo in itertools.product(*(choices[z] for z in below_order)):
        picked = dict(zip(below_order, combo))
        ids = tuple(cell_id if z == part_id else picked[z] for z in span_order)
        result.append((span_order, ids))
    return result


def decompose_compose(partition: KPartitionHierarchy, level: int, cell_id: int, part_id: int) -> List[Polyad]:
    """Polyads (P_1, ..., P_s, F) of the partition whose clique sets partition F o V."""
    if level < 1 or level > partition.rank:
        raise InputError(f"Level {level} is not in a rank-{partition.rank} partition")
    try:
        span = partition.span(level, cell_id)
        partition.span(1, part_id)
    except InputError as e:
        raise InputError(f"Cell not in partition: {e}") from e
    if part_id in span:
        raise InputError(f"Vertex part {part_id} is spanned by the cell")
    polyads = []
    for span_order, ids in sorted(_decompose(partition, level, cell_id, part_id)):
        polyad = partition.polyad_from_ids(span_order, ids)
        if cliques(polyad).edges:
            polyads.append(polyad)
    return polyads


def _build(layout: VertexLayout, vertex_parts: Sequence[FrozenSet[int]], rank: int, split) -> KPartitionHierarchy:
    partition = KPartitionHierarchy(tuple(vertex_parts))
    for s in range(2, rank + 1):
        cells: List[Cell] = []
        for span_order in itertools.combinations(range(len(vertex_parts)), s):
            for ids in partition.polyads_over(span_order):
                clique_edges = sorted(cliques(partition.polyad_from_ids(span_order, ids)).edges)
                if not clique_edges:
                    continue
                polyad_ids = frozenset(ids)
                cells.extend(Cell(frozenset(piece), polyad_ids) for piece in split(s, clique_edges) if piece)
        partition = KPartitionHierarchy(partition.vertex_parts, partition.levels + (tuple(cells),))
    return partition


def trivial_hierarchy(layout: VertexLayout, rank: int) -> KPartitionHierarchy:
    """One vertex part per class and one cell per non-empty clique set."""
    parts = [frozenset(c.vertices) for c in layout.classes]
    return _build(layout, parts, rank, lambda s, edges: [edges])


def random_hierarchy(layout: VertexLayout, rank: int, parts_per_class: int, cells_per_polyad: int,
                     seed: int) -> KPartitionHierarchy:
    """Top-down random valid partition: equitable vertex parts per class, then random splits of every clique set."""
    rng = make_rng(seed, "hierarchy")
    parts: List[FrozenSet[int]] = []
    for vertex_class in layout.classes:
        count = min(parts_per_class, len(vertex_class.vertices))
        parts.extend(random_partition(vertex_class.vertices, count, rng).parts)

    def split(s: int, edges: List[Edge]) -> List[List[Edge]]:
        pieces = min(cells_per_polyad, len(edges))
        chunks = random_partition(range(len(edges)), pieces, rng).parts
        return [[edges[i] for i in sorted(chunk)] for chunk in chunks]

    return _build(layout, parts, rank, split)
