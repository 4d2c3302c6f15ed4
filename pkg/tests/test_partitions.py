from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regforge.common.errors import InputError
from regforge.common.rng import make_rng
from regforge.modules.hypergraph.core import VertexLayout, cliques, compose
from regforge.modules.partitions.hierarchy import (Cell, KPartitionHierarchy, decompose_compose, parts_by_class,
                                                   random_hierarchy, restrict_hierarchy, trivial_hierarchy,
                                                   validate_k_partition)
from regforge.modules.partitions.sets import (SetPartition, approx_refines, best_union_approx, is_equitable,
                                              random_partition, refinement_size_bound, refines)


def test_set_partition_rejects_overlap():
    with pytest.raises(InputError, match="overlaps"):
        SetPartition.of([[1, 2], [2, 3]])


def test_refines():
    coarse = SetPartition.of([[1, 2, 3, 4]])
    fine = SetPartition.of([[1, 2], [3, 4]])
    assert refines(fine, coarse)
    assert not refines(coarse, fine)


def test_refines_needs_same_universe():
    with pytest.raises(InputError, match="different universes"):
        refines(SetPartition.of([[1]]), SetPartition.of([[2]]))


def test_approx_refines_counts_bad_mass():
    p = SetPartition.of([[0, 1, 2, 3], [4, 5, 6, 7]])
    q = SetPartition.of([[0, 1, 2, 4], [3, 5, 6, 7]])
    assert approx_refines(q, p, Fraction(1, 4)).verdict
    strict = approx_refines(q, p, Fraction(0))
    assert not strict.verdict
    assert strict.bad_mass == 8
    assert strict.assignment == [None, None]


def test_half_refinement_has_at_least_half_the_parts():
    p = SetPartition.of([[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]])
    q = SetPartition.of([[0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11]])
    assert approx_refines(q, p, Fraction(1, 2)).verdict
    assert refinement_size_bound(q, p)


def test_refinement_size_bound_needs_equitable_p():
    p = SetPartition.of([[0], [1, 2, 3]])
    with pytest.raises(InputError, match="not equitable"):
        refinement_size_bound(p, p)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_union_approximation_bound(seed):
    rng = make_rng(seed, "test")
    p = random_partition(range(16), 2, rng)
    parts = [sorted(part) for part in p.parts]
    # split every part of P, then move one element across to make Q an approximate refinement
    q_parts = [part[:4] for part in parts] + [part[4:] for part in parts]
    moved = q_parts[0].pop()
    q_parts[1].append(moved)
    q = SetPartition.of(q_parts)
    delta = Fraction(1, 4)
    if approx_refines(q, p, delta).verdict:
        assert best_union_approx(p, q, delta).bound_holds


def test_random_partition_is_equitable():
    partition = random_partition(range(10), 3, make_rng(1, "test"))
    assert is_equitable(partition)
    assert partition.universe == frozenset(range(10))


def test_random_partition_rejects_too_many_parts():
    with pytest.raises(InputError):
        random_partition(range(3), 4, make_rng(0, "test"))


@pytest.mark.parametrize("seed", range(5))
def test_random_hierarchy_is_valid(seed):
    layout = VertexLayout.contiguous([("V1", 4), ("V2", 4), ("V3", 4)])
    partition = random_hierarchy(layout, 2, 2, 2, seed)
    assert validate_k_partition(partition).verdict
    assert [len(g) for g in parts_by_class(partition, layout)] == [2, 2, 2]


def test_trivial_hierarchy_has_one_cell_per_pair(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    assert validate_k_partition(partition).verdict
    assert len(partition.cells(2)) == 3


def test_validate_reports_uncovered_edges(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    first = partition.cells(2)[0]
    shrunk = Cell(frozenset(sorted(first.edges)[1:]), first.polyad)
    broken = KPartitionHierarchy(partition.vertex_parts, ((shrunk,) + partition.cells(2)[1:],))
    report = validate_k_partition(broken)
    assert not report.verdict
    assert "covers" in report.witness.location


def test_validate_reports_shared_edges(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    first = partition.cells(2)[0]
    broken = KPartitionHierarchy(partition.vertex_parts, (partition.cells(2) + (first,),))
    assert not validate_k_partition(broken).verdict


def test_parts_by_class_rejects_straddling_parts(layout_2x2):
    partition = KPartitionHierarchy((frozenset({0, 2}), frozenset({1, 3})))
    with pytest.raises(InputError, match="straddles"):
        parts_by_class(partition, layout_2x2)


@pytest.mark.parametrize("seed", range(16))
def test_decompose_compose_partitions_f_compose_v(seed):
    layout = VertexLayout.contiguous([("V1", 2), ("V2", 2), ("V3", 2)])
    partition = random_hierarchy(layout, 2, 1, 2, seed)
    for cell_id in range(len(partition.cells(2))):
        span = partition.span(2, cell_id)
        (part_id,) = set(range(3)) - span
        polyads = decompose_compose(partition, 2, cell_id, part_id)
        pieces = [cliques(polyad).edges for polyad in polyads]
        union = frozenset().union(*pieces)
        assert sum(len(piece) for piece in pieces) == len(union)
        expected = compose(partition.cell_graph(2, cell_id), partition.vertex_parts[part_id]).edges
        assert union == expected


@pytest.mark.parametrize("seed", range(6))
def test_decompose_compose_on_four_classes(seed):
    layout = VertexLayout.contiguous([("V1", 2), ("V2", 2), ("V3", 2), ("V4", 2)])
    partition = random_hierarchy(layout, 3, 1, 2, seed)
    assert validate_k_partition(partition).verdict
    for level in (2, 3):
        for cell_id in range(len(partition.cells(level))):
            for part_id in sorted(set(range(4)) - partition.span(level, cell_id)):
                polyads = decompose_compose(partition, level, cell_id, part_id)
                pieces = [cliques(polyad).edges for polyad in polyads]
                union = frozenset().union(*pieces)
                assert sum(len(piece) for piece in pieces) == len(union)
                expected = compose(partition.cell_graph(level, cell_id), partition.vertex_parts[part_id]).edges
                assert union == expected


def test_decompose_compose_rejects_spanned_part(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    (part_id, *_) = sorted(partition.span(2, 0))
    with pytest.raises(InputError, match="spanned"):
        decompose_compose(partition, 2, 0, part_id)


def test_restrict_hierarchy_keeps_inner_cells(layout_3x2):
    partition = trivial_hierarchy(layout_3x2, 2)
    restricted = restrict_hierarchy(partition, [0, 1, 2, 3])
    assert len(restricted.vertex_parts) == 2
    assert len(restricted.cells(2)) == 1
    assert validate_k_partition(restricted).verdict
    with pytest.raises(InputError, match="cut"):
        restrict_hierarchy(partition, [0, 2, 3])


def random_partition_pair(seed):
    """An equitable P of 24 elements and a Q obtained by splitting P's parts and moving a few elements."""
    rng = make_rng(seed, "test")
    p = random_partition(range(24), int(rng.choice([2, 3, 4, 6, 8])), rng)
    q_parts = []
    for part in p.parts:
        pieces = int(rng.integers(1, len(part) + 1))
        q_parts.extend(sorted(piece) for piece in random_partition(sorted(part), pieces, rng, equitable=False).parts)
    for _ in range(int(rng.integers(0, 4))):
        sources = [j for j, part in enumerate(q_parts) if len(part) > 1]
        if not sources or len(q_parts) < 2:
            break
        source = int(rng.choice(sources))
        target = int(rng.choice([j for j in range(len(q_parts)) if j != source]))
        q_parts[target].append(q_parts[source].pop())
    return p, SetPartition.of(q_parts)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_half_refinement_size_bound_on_random_pairs(seed):
    p, q = random_partition_pair(seed)
    if approx_refines(q, p, Fraction(1, 2)).verdict:
        assert refinement_size_bound(q, p)
    else:
        with pytest.raises(InputError, match="Precondition"):
            refinement_size_bound(q, p)


def test_half_refinement_size_bound_fails_with_one_large_stray_part():
    # two good parts of size 6 and one unassigned part holding exactly half the elements
    p = SetPartition.of([[3 * j, 3 * j + 1, 3 * j + 2] for j in range(8)])
    q = SetPartition.of([list(range(6)), list(range(6, 12)), list(range(12, 24))])
    report = approx_refines(q, p, Fraction(1, 2))
    assert report.verdict
    assert report.bad_mass == 12
    assert not refinement_size_bound(q, p)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_zero_approximation_is_exact_refinement(seed):
    rng = make_rng(seed, "test")
    p = random_partition(range(12), int(rng.integers(1, 5)), rng)
    q = random_partition(range(12), int(rng.integers(1, 13)), rng, equitable=bool(seed % 2))
    assert approx_refines(q, p, Fraction(0)).verdict == refines(q, p)
    assert approx_refines(p, p, Fraction(0)).verdict


BETAS = [Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)]


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6), st.sampled_from(BETAS), st.sampled_from(BETAS))
def test_approx_refines_is_monotone_in_beta(seed, first, second):
    low, high = sorted((first, second))
    rng = make_rng(seed, "test")
    p = random_partition(range(12), int(rng.integers(1, 5)), rng)
    q = random_partition(range(12), int(rng.integers(1, 13)), rng, equitable=False)
    if approx_refines(q, p, low).verdict:
        assert approx_refines(q, p, high).verdict
