"""
Exact k-partite hypergraphs, bipartite graphs and polyads.
Vertex ids are integers grouped into classes; edges are stored as numerically sorted tuples.
Composite vertices (elements of a product of classes) are tuples ordered by class index.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from regforge.common.errors import InputError

logger = logging.getLogger(__name__)

Edge = Tuple[int, ...]


@dataclass(frozen=True)
class VertexClass:
    """A labelled vertex class"""
    label: str
    vertices: Tuple[int, ...]


@dataclass(frozen=True)
class VertexLayout:
    """Ordered disjoint vertex classes"""
    classes: Tuple[VertexClass, ...]

    def __post_init__(self):
        seen = set()
        for vertex_class in self.classes:
            if list(vertex_class.vertices) != sorted(set(vertex_class.vertices)):
                raise InputError(f"Class {vertex_class.label!r} must list distinct vertices in increasing order")
            overlap = seen.intersection(vertex_class.vertices)
            if overlap:
                raise InputError(f"Vertex {min(overlap)} appears in more than one class")
            seen.update(vertex_class.vertices)

    @classmethod
    def contiguous(cls, sizes: Sequence[Tuple[str, int]]) -> "VertexLayout":
        """Layout with dense ids 0..n-1 grouped by class, in the given order."""
        classes = []
        start = 0
        for label, size in sizes:
            if size < 1:
                raise InputError(f"Class {label!r} must have at least one vertex")
            classes.append(VertexClass(label, tuple(range(start, start + size))))
            start += size
        return cls(tuple(classes))

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], labels: Optional[Sequence[str]] = None) -> "VertexLayout":
        """Layout from explicit vertex sets."""
        labels = list(labels) if labels is not None else [f"V{i + 1}" for i in range(len(sets))]
        if len(labels) != len(sets):
            raise InputError("One label is needed per class")
        return cls(tuple(VertexClass(label, tuple(sorted(set(vs)))) for label, vs in zip(labels, sets)))

    @cached_property
    def class_of(self) -> Dict[int, int]:
        """Map vertex id to class index"""
        return {v: i for i, vertex_class in enumerate(self.classes) for v in vertex_class.vertices}

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(c.vertices) for c in self.classes)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(c.label for c in self.classes)

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.class_of))

    def class_index(self, vertex: int) -> int:
        """Class index of a vertex, raising InputError for unknown ids."""
        try:
            return self.class_of[vertex]
        except KeyError as e:
            raise InputError(f"Vertex {vertex} is not in the layout") from e

    def vertex_set(self, index: int) -> FrozenSet[int]:
        return frozenset(self.classes[index].vertices)

    def sub(self, indices: Sequence[int]) -> "VertexLayout":
        """Layout keeping only the given classes, in the given order."""
        return VertexLayout(tuple(self.classes[i] for i in indices))

    def with_subsets(self, subsets: Sequence[Iterable[int]]) -> "VertexLayout":
        """Layout whose classes are subsets of this layout's classes (empty subsets allowed)."""
        if len(subsets) != self.num_classes:
            raise InputError(f"Expected {self.num_classes} subsets, got {len(subsets)}")
        classes = []
        for index, subset in enumerate(subsets):
            chosen = frozenset(subset)
            stray = chosen - self.vertex_set(index)
            if stray:
                raise InputError(f"Vertex {min(stray)} is outside class {self.classes[index].label!r}")
            classes.append(VertexClass(self.classes[index].label, tuple(sorted(chosen))))
        return VertexLayout(tuple(classes))

    def merged(self, groups: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> "VertexLayout":
        """Layout whose classes are unions of groups of this layout's classes."""
        sets = [[v for i in group for v in self.classes[i].vertices] for group in groups]
        return VertexLayout.from_sets(sets, labels)

    def to_composite(self, vertices: Iterable[int]) -> Tuple[int, ...]:
        """Order vertices by class index."""
        return tuple(sorted(vertices, key=self.class_index))


def canonical_edge(layout: VertexLayout, vertices: Iterable[int], k: int) -> Edge:
    """Validate a k-set against the layout and return it sorted."""
    edge = tuple(sorted(vertices))
    if len(edge) != k or len(set(edge)) != k:
        raise InputError(f"Edge {edge} does not have {k} distinct vertices")
    classes = [layout.class_index(v) for v in edge]
    if len(set(classes)) != k:
        raise InputError(f"Edge {edge} has two vertices in the same class")
    return edge


@dataclass(frozen=True)
class KGraph:
    """A k-uniform hypergraph meeting each class of its layout at most once per edge"""
    layout: VertexLayout
    k: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.k < 1:
            raise InputError("Uniformity must be at least 1")
        if self.k > self.layout.num_classes:
            raise InputError(f"A {self.k}-graph needs at least {self.k} classes")
        for edge in self.edges:
            if canonical_edge(self.layout, edge, self.k) != edge:
                raise InputError(f"Edge {edge} is not sorted")

    @classmethod
    def build(cls, layout: VertexLayout, k: int, edges: Iterable[Iterable[int]]) -> "KGraph":
        """Build from unsorted edge iterables, rejecting duplicates."""
        canonical = [canonical_edge(layout, e, k) for e in edges]
        unique = frozenset(canonical)
        if len(unique) != len(canonical):
            raise InputError("Duplicate edges")
        return cls(layout, k, unique)

    @property
    def e(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def density(self) -> Fraction:
        return density(self)

    def as_bipartite(self) -> "BipartiteGraph":
        """View a 2-graph on two classes as a bipartite graph (class 0 on the left)."""
        if self.k != 2 or self.layout.num_classes != 2:
            raise InputError("Only a 2-graph on two classes has a bipartite view")
        left_class = self.layout.vertex_set(0)
        pairs = frozenset((u, v) if u in left_class else (v, u) for u, v in self.edges)
        return BipartiteGraph(self.layout.classes[0].vertices, self.layout.classes[1].vertices, pairs)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph between ordered sides with bitset adjacency"""
    left: Tuple[Hashable, ...]
    right: Tuple[Hashable, ...]
    edges: FrozenSet[Tuple[Hashable, Hashable]] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise InputError("Bipartite sides must not repeat vertices")
        left_index, right_index = self.left_index, self.right_index
        for u, v in self.edges:
            if u not in left_index or v not in right_index:
                raise InputError(f"Edge {(u, v)} is not between the two sides")

    @cached_property
    def left_index(self) -> Dict[Hashable, int]:
        return {u: i for i, u in enumerate(self.left)}

    @cached_property
    def right_index(self) -> Dict[Hashable, int]:
        return {v: i for i, v in enumerate(self.right)}

    @cached_property
    def left_masks(self) -> Tuple[int, ...]:
        """Per left vertex, the bitmask of its neighbours by right index"""
        masks = [0] * len(self.left)
        for u, v in self.edges:
            masks[self.left_index[u]] |= 1 << self.right_index[v]
        return tuple(masks)

    @cached_property
    def right_masks(self) -> Tuple[int, ...]:
        masks = [0] * len(self.right)
        for u, v in self.edges:
            masks[self.right_index[v]] |= 1 << self.left_index[u]
        return tuple(masks)

    @classmethod
    def from_masks(cls, left: Sequence[Hashable], right: Sequence[Hashable],
                   masks: Sequence[int]) -> "BipartiteGraph":
        edges = frozenset((left[i], right[j]) for i, mask in enumerate(masks) for j in _bits(mask))
        return cls(tuple(left), tuple(right), edges)

    @property
    def e(self) -> int:
        return len(self.edges)

    def density(self) -> Fraction:
        cells = len(self.left) * len(self.right)
        return Fraction(self.e, cells) if cells else Fraction(0)

    def edges_between(self, left_subset: Iterable[Hashable], right_subset: Iterable[Hashable]) -> int:
        """e(A', B') for vertex subsets of the two sides."""
        right_mask = 0
        for v in right_subset:
            right_mask |= 1 << self.right_index[v]
        return sum(bin(self.left_masks[self.left_index[u]] & right_mask).count("1") for u in left_subset)

    def induced(self, left_subset: Iterable[Hashable], right_subset: Iterable[Hashable]) -> "BipartiteGraph":
        """Induced subgraph, keeping this graph's vertex order."""
        keep_left = set(left_subset)
        keep_right = set(right_subset)
        if not keep_left <= set(self.left_index) or not keep_right <= set(self.right_index):
            raise InputError("Induced sides must be subsets of the graph's sides")
        left = tuple(u for u in self.left if u in keep_left)
        right = tuple(v for v in self.right if v in keep_right)
        edges = frozenset((u, v) for u, v in self.edges if u in keep_left and v in keep_right)
        return BipartiteGraph(left, right, edges)

    def with_edits(self, added: Iterable[Tuple[Hashable, Hashable]],
                   removed: Iterable[Tuple[Hashable, Hashable]]) -> "BipartiteGraph":
        edges = (set(self.edges) - set(removed)) | set(added)
        return BipartiteGraph(self.left, self.right, frozenset(edges))

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.right, self.left, frozenset((v, u) for u, v in self.edges))


@dataclass(frozen=True)
class Polyad:
    """An r-partite (r-1)-graph given as its r parts; part i omits class i"""
    layout: VertexLayout
    parts: Tuple[FrozenSet[Edge], ...]

    def __post_init__(self):
        r = self.layout.num_classes
        if r < 2 or len(self.parts) != r:
            raise InputError(f"A polyad on {r} classes needs {r} parts")
        for i, part in enumerate(self.parts):
            for edge in part:
                canonical_edge(self.layout, edge, r - 1)
                if any(self.layout.class_of[v] == i for v in edge):
                    raise InputError(f"Part {i} edge {edge} touches the omitted class")

    @property
    def r(self) -> int:
        return self.layout.num_classes

    @classmethod
    def from_union(cls, layout: VertexLayout, edges: Iterable[Iterable[int]]) -> "Polyad":
        """Split an r-partite (r-1)-graph into its parts by omitted class."""
        r = layout.num_classes
        parts: List[set] = [set() for _ in range(r)]
        for raw in edges:
            edge = canonical_edge(layout, raw, r - 1)
            missing = set(range(r)) - {layout.class_of[v] for v in edge}
            parts[missing.pop()].add(edge)
        return cls(layout, tuple(frozenset(p) for p in parts))

    @classmethod
    def complete(cls, layout: VertexLayout) -> "Polyad":
        """The polyad whose parts are the complete (r-1)-partite graphs."""
        r = layout.num_classes
        parts = []
        for i in range(r):
            others = [layout.classes[j].vertices for j in range(r) if j != i]
            parts.append(frozenset(tuple(sorted(t)) for t in itertools.product(*others)))
        return cls(layout, tuple(parts))

    @classmethod
    def from_vertex_sets(cls, layout: VertexLayout) -> "Polyad":
        """The 2-polyad (V_1, V_2) of a two-class layout."""
        if layout.num_classes != 2:
            raise InputError("A 2-polyad needs exactly two classes")
        return cls.complete(layout)

    def union(self) -> FrozenSet[Edge]:
        return frozenset().union(*self.parts)

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.parts)

    def drop_class(self, edge: Edge, index: int) -> Edge:
        """The sub-edge of an r-set omitting its class-index vertex."""
        return tuple(v for v in edge if self.layout.class_of[v] != index)


def density(graph: KGraph) -> Fraction:
    """e(H) / prod |V_i| for a k-graph on exactly k classes."""
    if graph.layout.num_classes != graph.k:
        raise InputError("Density is defined for a k-graph on exactly k classes")
    cells = prod(graph.layout.sizes)
    return Fraction(graph.e, cells) if cells else Fraction(0)


def cross(layout: VertexLayout, s: int) -> KGraph:
    """Complete multipartite s-graph over the layout's classes."""
    edges = set()
    for combo in itertools.combinations(range(layout.num_classes), s):
        for choice in itertools.product(*(layout.classes[i].vertices for i in combo)):
            edges.add(tuple(sorted(choice)))
    return KGraph(layout, s, frozenset(edges))


def complete_kgraph(layout: VertexLayout) -> KGraph:
    """The complete k-partite k-graph on a k-class layout."""
    return cross(layout, layout.num_classes)


def cliques(polyad: Polyad) -> KGraph:
    """K(P): all r-sets whose every (r-1)-subset lies in the matching part."""
    r = polyad.r
    last = polyad.layout.classes[r - 1].vertices
    found = set()
    for edge in polyad.parts[r - 1]:
        for v in last:
            candidate = tuple(sorted(edge + (v,)))
            if all(polyad.drop_class(candidate, i) in polyad.parts[i] for i in range(r - 1)):
                found.add(candidate)
    return KGraph(polyad.layout, r, frozenset(found))


def cliques_containing(polyad: Polyad, edge: Sequence[int]) -> FrozenSet[Edge]:
    """K(P, e) for an edge e of the last part."""
    r = polyad.r
    edge = tuple(sorted(edge))
    if edge not in polyad.parts[r - 1]:
        raise InputError(f"Edge {edge} is not in part {r - 1} of the polyad")
    found = set()
    for v in polyad.layout.classes[r - 1].vertices:
        candidate = tuple(sorted(edge + (v,)))
        if all(polyad.drop_class(candidate, i) in polyad.parts[i] for i in range(r - 1)):
            found.add(candidate)
    return frozenset(found)


def induced(graph: KGraph, subclasses: Sequence[Iterable[int]]) -> KGraph:
    """H[V'_1, ..., V'_l]: edges entirely inside the chosen subclasses."""
    layout = graph.layout.with_subsets(subclasses)
    keep = set(layout.class_of)
    return KGraph(layout, graph.k, frozenset(e for e in graph.edges if keep.issuperset(e)))


def aux_graph(graph: KGraph, i: int) -> BipartiteGraph:
    """G_H^i on (prod_{j != i} V_j, V_i); the left side is the full product in lexicographic order."""
    layout = graph.layout
    if graph.k < 2 or layout.num_classes != graph.k:
        raise InputError("Auxiliary graphs need a k-graph on exactly k >= 2 classes")
    if not 0 <= i < graph.k:
        raise InputError(f"Class index {i} out of range")
    others = [layout.classes[j].vertices for j in range(graph.k) if j != i]
    left = tuple(itertools.product(*others))
    edges = set()
    for edge in graph.edges:
        ordered = layout.to_composite(edge)
        edges.add((ordered[:i] + ordered[i + 1:], ordered[i]))
    return BipartiteGraph(left, layout.classes[i].vertices, frozenset(edges))


def aux_graph_restricted(graph: KGraph, polyad: Polyad, i: int) -> BipartiteGraph:
    """G_{H,P}^i = G_H^i[F_i, V_i] for H underlied by P."""
    if polyad.layout.class_of != graph.layout.class_of or polyad.r != graph.k:
        raise InputError("Polyad and k-graph must share their layout")
    clique_set = cliques(polyad).edges
    stray = graph.edges - clique_set
    if stray:
        raise InputError(f"Edge {min(stray)} is not a clique of the polyad")
    layout = graph.layout
    left = tuple(sorted(layout.to_composite(e) for e in polyad.parts[i]))
    edges = set()
    for edge in graph.edges:
        ordered = layout.to_composite(edge)
        edges.add((ordered[:i] + ordered[i + 1:], ordered[i]))
    return BipartiteGraph(left, layout.classes[i].vertices, frozenset(edges))


def compose(graph: KGraph, vertices: Iterable[int], label: str = "V") -> KGraph:
    """F o V: extend every edge of F by every vertex of V."""
    extra = tuple(sorted(set(vertices)))
    if set(extra) & set(graph.layout.class_of):
        raise InputError("The composed class must be disjoint from the graph's classes")
    layout = VertexLayout(graph.layout.classes + (VertexClass(label, extra),))
    edges = frozenset(tuple(sorted(e + (v,))) for e in graph.edges for v in extra)
    return KGraph(layout, graph.k + 1, edges)


def relative_density(graph: KGraph, polyad: Polyad) -> Fraction:
    """d_H(S) = |H cap K(S)| / |K(S)|, and 0 when K(S) is empty."""
    clique_set = cliques(polyad).edges
    if not clique_set:
        return Fraction(0)
    return Fraction(len(graph.edges & clique_set), len(clique_set))
