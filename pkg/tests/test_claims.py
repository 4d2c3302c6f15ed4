from fractions import Fraction

import pytest

from regforge.common.errors import InputError
from regforge.modules.deltareg.claims import restriction_check, uniform_refinement_check
from regforge.modules.deltareg.partition import product_cells
from regforge.common.rng import bernoulli_mask, make_rng
from regforge.modules.hypergraph.core import KGraph, VertexLayout, complete_kgraph, cross, induced
from regforge.modules.partitions.hierarchy import random_hierarchy, trivial_hierarchy
from regforge.modules.partitions.sets import SetPartition


def test_restriction_to_everything_holds(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    report = restriction_check(graph, trivial_hierarchy(layout_3x2, 2), "1/2", [[0, 1], [2, 3], [4, 5]])
    assert report.status == "holds"
    assert report.details["beta"] == "1"


def test_restriction_cutting_a_vertex_part_is_vacuous(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    report = restriction_check(graph, trivial_hierarchy(layout_3x2, 2), "1/2", [[0], [2], [4]])
    assert report.status == "vacuous"
    assert "cut" in report.notes[0]


def test_restriction_to_one_edge(layout_3x2):
    graph = complete_kgraph(layout_3x2)
    partition = random_hierarchy(layout_3x2, 2, parts_per_class=2, cells_per_polyad=1, seed=0)
    report = restriction_check(graph, partition, "1/16", [[0], [2], [4]])
    assert report.status == "holds"
    assert report.details == {"beta": "1/8", "delta": "1/2"}


def test_uniform_refinement_on_trivial_partition(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    coarse = SetPartition(product_cells(layout_3x2, partition, 2))
    report = uniform_refinement_check(partition, layout_3x2, coarse, Fraction(1, 4))
    assert report.status == "holds"
    assert report.details["delta"] == "3/4"


def test_uniform_refinement_needs_three_classes(layout_2x2):
    partition = trivial_hierarchy(layout_2x2, 1)
    with pytest.raises(InputError, match="three classes"):
        uniform_refinement_check(partition, layout_2x2, SetPartition.of([[0, 1]]), Fraction(1, 4))


@pytest.fixture
def layout_3x4():
    return VertexLayout.contiguous([("V1", 4), ("V2", 4), ("V3", 4)])


def test_uniform_refinement_repairs_a_nearly_full_part(layout_3x4):
    partition = trivial_hierarchy(layout_3x4, 2)
    pairs = [(u, v) for u in range(4) for v in range(4, 8)]
    coarse = SetPartition((frozenset(pairs[:-1]), frozenset(pairs[-1:])))
    report = uniform_refinement_check(partition, layout_3x4, coarse, Fraction(1, 8))
    assert report.status == "holds"
    assert report.details == {"part": 0, "difference": 1, "bound_holds": True, "delta": "3/8"}
    # the missing pair is added back once per auxiliary graph
    assert report.report.edits == 2


def test_uniform_refinement_vacuous_when_cells_straddle(layout_3x4):
    partition = trivial_hierarchy(layout_3x4, 2)
    top = [(u, v) for u in (0, 1) for v in range(4, 8)]
    bottom = [(u, v) for u in (2, 3) for v in range(4, 8)]
    coarse = SetPartition((frozenset(top), frozenset(bottom)))
    report = uniform_refinement_check(partition, layout_3x4, coarse, Fraction(1, 8))
    assert report.status == "vacuous"
    assert "refine" in report.notes[0]


@pytest.mark.parametrize("seed", range(8))
def test_restriction_of_random_graph_to_singleton_parts(layout_3x2, seed):
    triples = cross(layout_3x2, 3).sorted_edges()
    kept = bernoulli_mask(make_rng(seed, "test"), Fraction(2, 3), len(triples))
    graph = KGraph(layout_3x2, 3, frozenset(e for e, keep in zip(triples, kept) if keep))
    partition = random_hierarchy(layout_3x2, 2, parts_per_class=2, cells_per_polyad=1, seed=seed)
    subclasses = [[0, 1], [2, 3], [4]]
    target = induced(graph, subclasses)
    report = restriction_check(graph, partition, "1/4", subclasses)
    if target.e == 0:
        assert report.status == "vacuous"
        return
    assert report.status == "holds"
    beta = Fraction(target.e, graph.e)
    assert report.details == {"beta": str(beta), "delta": str(Fraction(1, 4) / beta)}


def test_restriction_of_irregular_graph_is_vacuous(layout_3x2):
    graph = KGraph.build(layout_3x2, 3, [(0, v, w) for v in (2, 3) for w in (4, 5)])
    report = restriction_check(graph, trivial_hierarchy(layout_3x2, 2), "1/2", [[0, 1], [2, 3], [4, 5]])
    assert report.status == "vacuous"
    assert "not a <delta>-regular partition" in report.notes[0]
