from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from regforge.common.errors import CapExceededError, InputError
from regforge.common.reports import EditCertificate
from regforge.common.rng import make_rng
from regforge.modules.deltareg.oracle import (all_bipartite_adjacencies, batch_oracle, masks_from_adjacency,
                                              oracle_pair_regular)
from regforge.modules.deltareg.pair import (RationalThreshold, SqrtThreshold, edit_budget, is_pair_delta_regular,
                                            min_subset_size, revolving_door, satisfies_base_condition)
from regforge.modules.deltareg.partition import (is_good_partition, is_kgraph_delta_regular_partition,
                                                 is_vertex_partition_delta_regular, union_regularity_check)
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph, VertexLayout, complete_kgraph
from regforge.modules.partitions.hierarchy import random_hierarchy, trivial_hierarchy
from regforge.modules.partitions.sets import SetPartition


def from_adjacency(adjacency):
    a, b = adjacency.shape
    return BipartiteGraph.from_masks(range(a), range(a, a + b), masks_from_adjacency(adjacency))


def test_thresholds_round_exactly():
    assert min_subset_size("1/4", 6) == 2
    assert min_subset_size("1/2", 4) == 2
    assert edit_budget("1/3", 7) == 2
    assert RationalThreshold(Fraction(1, 3)).budget(7) == 2
    assert SqrtThreshold(Fraction(2), Fraction(1, 4)).min_size(5) == 5
    assert SqrtThreshold(Fraction(2), Fraction(1, 16)).budget(10) == 5


def test_non_positive_delta_is_rejected():
    with pytest.raises(InputError, match="positive"):
        is_pair_delta_regular(BipartiteGraph((0,), (1,)), "0")


def test_floats_are_rejected():
    with pytest.raises(InputError):
        is_pair_delta_regular(BipartiteGraph((0,), (1,)), 0.5)


def test_revolving_door_lists_every_subset_once():
    subsets = revolving_door(6, 3)
    assert len(subsets) == 20
    assert len(set(subsets)) == 20
    for previous, current in zip(subsets, subsets[1:]):
        assert len(set(previous) ^ set(current)) == 2


def test_complete_pair_is_regular(complete_bipartite):
    report = is_pair_delta_regular(complete_bipartite, "1/4")
    assert report.verdict
    assert report.witness is None


def test_block_pair_fails_with_witness(block_graph):
    report = is_pair_delta_regular(block_graph, "1/2")
    assert not report.verdict
    witness = report.witness
    assert len(witness.left) == 2 and len(witness.right) == 2
    assert block_graph.as_bipartite().edges_between(witness.left, witness.right) == 0
    assert witness.density == "0"
    assert witness.threshold == "1/4"


def test_empty_pair_is_vacuously_regular():
    assert is_pair_delta_regular(BipartiteGraph((0, 1), (2, 3)), "1/2").verdict


def test_pair_cap(block_graph):
    with pytest.raises(CapExceededError):
        is_pair_delta_regular(block_graph, "1/2", pair_cap=4)


def test_pair_cap_from_environment(monkeypatch, block_graph):
    monkeypatch.setenv("REGFORGE_CAP_BITS", "6")
    with pytest.raises(CapExceededError):
        is_pair_delta_regular(block_graph, "1/2")


def test_base_condition_is_stricter(fixable_pair):
    edited = fixable_pair.with_edits([(0, 3), (0, 4), (1, 3)], [])
    assert is_pair_delta_regular(edited, "2/3").verdict
    assert not satisfies_base_condition(edited, "1/10").verdict


@settings(max_examples=200, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=st.integers(0, 1)),
       st.sampled_from(["1/4", "1/3", "1/2", "2/3", "1"]))
def test_pair_checker_agrees_with_oracle(adjacency, delta):
    assert is_pair_delta_regular(from_adjacency(adjacency), delta).verdict == oracle_pair_regular(adjacency, delta)


@settings(max_examples=50, deadline=None)
@given(arrays(np.int64, (4, 3), elements=st.integers(0, 1)))
def test_oracle_agrees_with_strengthened_factor(adjacency):
    graph = from_adjacency(adjacency)
    expected = oracle_pair_regular(adjacency, "1/3", Fraction(2, 3))
    assert satisfies_base_condition(graph, "1/3").verdict == expected


@pytest.mark.slow
@pytest.mark.parametrize("delta", ["1/4", "1/2"])
def test_all_4x4_graphs_agree_with_oracle(delta):
    adjacencies = all_bipartite_adjacencies(4, 4)
    expected = batch_oracle(adjacencies, delta)
    for adjacency, verdict in zip(adjacencies, expected):
        assert is_pair_delta_regular(from_adjacency(adjacency), delta).verdict == bool(verdict)


@pytest.mark.slow
def test_random_6x6_graphs_agree_with_oracle():
    rng = make_rng(2024, "test")
    adjacencies = rng.integers(0, 2, size=(10_000, 6, 6), dtype=np.int64)
    for delta in ("1/4", "1/2"):
        expected = batch_oracle(adjacencies, delta)
        for adjacency, verdict in zip(adjacencies, expected):
            assert is_pair_delta_regular(from_adjacency(adjacency), delta).verdict == bool(verdict)


def trivial_vertex_partition(graph):
    return SetPartition.of([graph.left, graph.right])


def test_perfect_mode_fails_on_fixable_pair(fixable_pair):
    report = is_vertex_partition_delta_regular(fixable_pair, trivial_vertex_partition(fixable_pair), "2/3")
    assert not report.verdict
    assert report.witness.location == "pair (0, 1)"


def test_certificate_mode_applies_edits(fixable_pair):
    certificate = EditCertificate(added=[[0, 3], [0, 4], [1, 3]])
    report = is_vertex_partition_delta_regular(fixable_pair, trivial_vertex_partition(fixable_pair), "2/3",
                                               mode="certificate", certificate=certificate)
    assert report.verdict
    assert report.edits == 3
    assert report.mode == "certificate"


def test_certificate_over_budget_is_rejected(fixable_pair):
    certificate = EditCertificate(added=[[0, 3], [0, 4], [1, 3], [1, 4]])
    with pytest.raises(InputError, match="budget"):
        is_vertex_partition_delta_regular(fixable_pair, trivial_vertex_partition(fixable_pair), "2/3",
                                          mode="certificate", certificate=certificate)


def test_certificate_removing_missing_edge_is_rejected(fixable_pair):
    certificate = EditCertificate(removed=[[0, 3]])
    with pytest.raises(InputError, match="missing edge"):
        is_vertex_partition_delta_regular(fixable_pair, trivial_vertex_partition(fixable_pair), "2/3",
                                          mode="certificate", certificate=certificate)


def test_search_mode_finds_edits_within_budget(fixable_pair):
    report = is_vertex_partition_delta_regular(fixable_pair, trivial_vertex_partition(fixable_pair), "2/3",
                                               mode="search")
    assert report.verdict
    assert 1 <= report.edits <= edit_budget("2/3", fixable_pair.e)


def test_unknown_mode():
    graph = BipartiteGraph((0,), (1,))
    with pytest.raises(InputError, match="Unknown mode"):
        is_vertex_partition_delta_regular(graph, SetPartition.of([[0], [1]]), "1/2", mode="guess")


def test_partition_straddling_sides_is_rejected(fixable_pair):
    with pytest.raises(InputError, match="straddles"):
        is_vertex_partition_delta_regular(fixable_pair, SetPartition.of([[0, 3], [1, 2, 4, 5]]), "1/2")


def test_complete_hypergraph_partition_is_regular(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    partition = trivial_hierarchy(layout_3x2, 2)
    assert is_good_partition(partition, "1/4").verdict
    assert is_kgraph_delta_regular_partition(graph, partition, "1/4").verdict


def test_kgraph_check_needs_rank_k_minus_one(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    with pytest.raises(InputError, match="rank-2"):
        is_kgraph_delta_regular_partition(graph, trivial_hierarchy(layout_3x2, 1), "1/4")


def test_k2_reduces_to_bipartite_partition(block_graph):
    partition = trivial_hierarchy(block_graph.layout, 1)
    kgraph_report = is_kgraph_delta_regular_partition(block_graph, partition, "1/2")
    pair_report = is_vertex_partition_delta_regular(block_graph.as_bipartite(), partition.vertex_partition(), "1/2")
    assert kgraph_report.verdict == pair_report.verdict is False


def test_union_of_regular_parts(complete_bipartite):
    left = [(u, v) for u, v in complete_bipartite.as_bipartite().edges if u == 0]
    right = [(u, v) for u, v in complete_bipartite.as_bipartite().edges if u == 1]
    parts = [BipartiteGraph((0, 1), (2, 3), frozenset(left)), BipartiteGraph((0, 1), (2, 3), frozenset(right))]
    assert union_regularity_check(parts, "1")


def test_union_rejects_overlapping_parts(complete_bipartite):
    graph = complete_bipartite.as_bipartite()
    with pytest.raises(InputError, match="edge-disjoint"):
        union_regularity_check([graph, graph], "1/2")


@pytest.mark.slow
def test_k2_reduction_on_random_instances():
    layout = VertexLayout.contiguous([("V1", 3), ("V2", 3)])
    pairs = [(u, v) for u in range(3) for v in range(3, 6)]
    for seed in range(1000):
        kept = make_rng(seed, "test").integers(0, 2, size=len(pairs))
        graph = KGraph.build(layout, 2, [pair for pair, keep in zip(pairs, kept) if keep])
        partition = random_hierarchy(layout, 1, 1 + seed % 3, 1, seed)
        delta = ("1/3", "1/2")[seed % 2]
        kgraph_report = is_kgraph_delta_regular_partition(graph, partition, delta)
        pair_report = is_vertex_partition_delta_regular(graph.as_bipartite(), partition.vertex_partition(), delta)
        assert kgraph_report.verdict == pair_report.verdict, seed


DELTAS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)]


@given(arrays(np.int64, (4, 4), elements=st.integers(0, 1)),
       st.sampled_from(DELTAS), st.sampled_from(DELTAS))
def test_pair_regularity_is_monotone_in_delta(adjacency, first, second):
    low, high = sorted((first, second))
    graph = from_adjacency(adjacency)
    if is_pair_delta_regular(graph, low).verdict:
        assert is_pair_delta_regular(graph, high).verdict


@settings(deadline=None)
@given(arrays(np.int64, (3, 3), elements=st.integers(0, 1)), st.sampled_from(["1/3", "1/2", "2/3"]))
def test_modes_weaken_from_perfect_to_search(adjacency, delta):
    graph = from_adjacency(adjacency)
    partition = trivial_vertex_partition(graph)
    perfect = is_vertex_partition_delta_regular(graph, partition, delta).verdict
    certified = is_vertex_partition_delta_regular(graph, partition, delta, mode="certificate",
                                                  certificate=EditCertificate()).verdict
    searched = is_vertex_partition_delta_regular(graph, partition, delta, mode="search").verdict
    assert perfect == certified
    assert searched or not certified


def test_union_of_random_parts_stays_regular():
    left, right = (0, 1, 2, 3), (4, 5, 6, 7)
    cells = [(u, v) for u in left for v in right]
    for seed in range(200):
        rng = make_rng(seed, "test")
        kept = [cell for cell, keep in zip(cells, rng.integers(0, 2, size=len(cells))) if keep]
        count = 2 + seed % 2
        labels = rng.integers(0, count, size=len(kept))
        parts = [BipartiteGraph(left, right, frozenset(e for e, label in zip(kept, labels) if label == j))
                 for j in range(count)]
        assert union_regularity_check(parts, ("1/4", "1/2")[seed % 2]), seed
