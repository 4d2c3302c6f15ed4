"""
Brute-force oracles for the hypergraph core.
Everything here filters the full product of the classes and is meant for desk-scale cross-checks only.
"""
import itertools
from fractions import Fraction
from typing import FrozenSet, Iterable, Sequence

from regforge.modules.hypergraph.core import Edge, KGraph, Polyad


def brute_cliques(polyad: Polyad) -> FrozenSet[Edge]:
    """Filter every transversal of the layout against all parts."""
    r = polyad.r
    found = set()
    for choice in itertools.product(*(c.vertices for c in polyad.layout.classes)):
        candidate = tuple(sorted(choice))
        if all(tuple(sorted(choice[:i] + choice[i + 1:])) in polyad.parts[i] for i in range(r)):
            found.add(candidate)
    return frozenset(found)


def brute_cliques_containing(polyad: Polyad, edge: Sequence[int]) -> FrozenSet[Edge]:
    edge_set = set(edge)
    return frozenset(c for c in brute_cliques(polyad) if edge_set <= set(c))


def brute_induced(graph: KGraph, subclasses: Sequence[Iterable[int]]) -> FrozenSet[Edge]:
    keep = set().union(*(set(s) for s in subclasses)) if subclasses else set()
    return frozenset(e for e in graph.edges if all(v in keep for v in e))


def brute_relative_density(graph: KGraph, polyad: Polyad) -> Fraction:
    clique_set = brute_cliques(polyad)
    if not clique_set:
        return Fraction(0)
    return Fraction(sum(1 for c in clique_set if c in graph.edges), len(clique_set))
