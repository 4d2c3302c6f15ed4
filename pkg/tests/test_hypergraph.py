import itertools
from fractions import Fraction

import pytest

from regforge.common.errors import InputError
from regforge.common.rng import bernoulli_mask, make_rng
from regforge.modules.constructions.cycle import hypergraph_from_bipartite
from regforge.modules.hypergraph.core import (BipartiteGraph, KGraph, Polyad, VertexLayout, aux_graph,
                                              aux_graph_restricted, canonical_edge, cliques, cliques_containing,
                                              complete_kgraph, compose, cross, density, induced, relative_density)
from regforge.modules.hypergraph.oracle import (brute_cliques, brute_cliques_containing, brute_induced,
                                                brute_relative_density)


def random_kgraph(layout, k, seed, p="1/2"):
    cells = cross(layout, k).sorted_edges()
    kept = bernoulli_mask(make_rng(seed, "test", k), Fraction(p), len(cells))
    return KGraph(layout, k, frozenset(e for e, keep in zip(cells, kept) if keep))


def random_polyad(layout, seed):
    r = layout.num_classes
    return Polyad.from_union(layout, random_kgraph(layout, r - 1, seed).edges)


def test_layout_rejects_shared_vertices():
    with pytest.raises(InputError, match="more than one class"):
        VertexLayout.from_sets([[0, 1], [1, 2]])


def test_canonical_edge_rejects_same_class(layout_2x2):
    assert canonical_edge(layout_2x2, [3, 0], 2) == (0, 3)
    with pytest.raises(InputError, match="same class"):
        canonical_edge(layout_2x2, [0, 1], 2)


def test_build_rejects_duplicates(layout_2x2):
    with pytest.raises(InputError, match="Duplicate"):
        KGraph.build(layout_2x2, 2, [(0, 2), (2, 0)])


def test_complete_kgraph_density(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    assert graph.e == 8
    assert density(graph) == 1


@pytest.mark.parametrize("seed", range(12))
def test_cliques_match_brute_force(layout_3x2, seed):
    polyad = random_polyad(layout_3x2, seed)
    assert cliques(polyad).edges == brute_cliques(polyad)
    for edge in sorted(polyad.parts[2]):
        assert cliques_containing(polyad, edge) == brute_cliques_containing(polyad, edge)


@pytest.mark.parametrize("seed", range(6))
def test_relative_density_matches_brute_force(seed):
    layout = VertexLayout.contiguous([("A", 2), ("B", 3), ("C", 2)])
    polyad = random_polyad(layout, seed)
    graph = KGraph(layout, 3, frozenset(e for e in cliques(polyad).edges if sum(e) % 2 == 0))
    assert relative_density(graph, polyad) == brute_relative_density(graph, polyad)


def test_relative_density_of_empty_clique_set(layout_3x2):
    empty = Polyad(layout_3x2, (frozenset(), frozenset(), frozenset()))
    assert relative_density(KGraph(layout_3x2, 3), empty) == 0


def test_induced_matches_brute_force(layout_3x2):
    graph = random_kgraph(layout_3x2, 3, 4)
    subclasses = [[0], [2, 3], [5]]
    assert induced(graph, subclasses).edges == brute_induced(graph, subclasses)


@pytest.mark.parametrize("seed", range(64))
def test_aux_graph_round_trip(layout_3x2, seed):
    graph = random_kgraph(layout_3x2, 3, seed)
    auxiliary = aux_graph(graph, 2)
    assert len(auxiliary.left) == 4
    assert auxiliary.e == graph.e
    assert hypergraph_from_bipartite(auxiliary, layout_3x2).edges == graph.edges


def test_aux_graph_middle_class_drops_that_vertex(layout_3x2):
    graph = KGraph.build(layout_3x2, 3, [(0, 2, 4)])
    assert aux_graph(graph, 1).edges == frozenset({((0, 4), 2)})


def test_aux_graph_restricted_rejects_stray_edges(layout_3x2):
    polyad = Polyad.from_union(layout_3x2, [(0, 2), (0, 4), (2, 4)])
    graph = KGraph.build(layout_3x2, 3, [(1, 3, 5)])
    with pytest.raises(InputError, match="not a clique"):
        aux_graph_restricted(graph, polyad, 2)
    ok = KGraph.build(layout_3x2, 3, [(0, 2, 4)])
    restricted = aux_graph_restricted(ok, polyad, 2)
    assert restricted.left == ((0, 2),)
    assert restricted.edges == frozenset({((0, 2), 4)})


def test_compose_extends_every_edge(layout_2x2):
    graph = KGraph.build(layout_2x2, 2, [(0, 2), (1, 3)])
    composed = compose(graph, [10, 11])
    assert composed.k == 3
    assert composed.e == 4
    assert (0, 2, 11) in composed.edges


def test_bipartite_edges_between_and_transpose():
    graph = BipartiteGraph(("a", "b"), (1, 2, 3), frozenset({("a", 1), ("a", 2), ("b", 3)}))
    assert graph.edges_between(["a"], [1, 2, 3]) == 2
    assert graph.edges_between(["a", "b"], [3]) == 1
    assert graph.transpose().edges_between([3], ["b"]) == 1
    assert graph.density() == Fraction(1, 2)


def test_polyad_rejects_edges_touching_omitted_class(layout_3x2):
    with pytest.raises(InputError, match="omitted class"):
        Polyad(layout_3x2, (frozenset({(0, 2)}), frozenset(), frozenset()))


def test_cross_counts_all_transversals(layout_3x2):
    assert cross(layout_3x2, 2).e == sum(a * b for a, b in itertools.combinations(layout_3x2.sizes, 2))
