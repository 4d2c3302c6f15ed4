"""
Shared fixtures: small layouts and graphs used across the test modules.
"""
import pytest

from regforge.config import get_settings
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph, VertexLayout, complete_kgraph


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the environment need a clean cache."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def layout_2x2():
    return VertexLayout.contiguous([("V1", 2), ("V2", 2)])


@pytest.fixture
def layout_3x2():
    return VertexLayout.contiguous([("V1", 2), ("V2", 2), ("V3", 2)])


@pytest.fixture
def complete_bipartite(layout_2x2):
    return complete_kgraph(layout_2x2)


@pytest.fixture
def block_graph():
    """Two disjoint K_{2,2} blocks on 4 + 4 vertices: dense overall, empty between blocks."""
    layout = VertexLayout.contiguous([("V1", 4), ("V2", 4)])
    edges = [(0, 4), (0, 5), (1, 4), (1, 5), (2, 6), (2, 7), (3, 6), (3, 7)]
    return KGraph.build(layout, 2, edges)


@pytest.fixture
def fixable_pair():
    """3 x 3 pair missing the (0, 1) x (3, 4) block; three added edges make it <2/3>-regular."""
    edges = frozenset({(0, 5), (1, 5), (2, 3), (2, 4), (2, 5)})
    return BipartiteGraph((0, 1, 2), (3, 4, 5), edges)
