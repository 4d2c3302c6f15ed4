"""
k-complexes: nested k-partite hypergraphs whose level r edges are cliques of level r-1.
Includes the dense counting comparison, slicing, regularity of complexes and a seeded generator.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np

from regforge.common.errors import CapExceededError, InputError
from regforge.common.rational import RationalLike, format_rational, parse_rational
from regforge.common.reports import CountingReport, RegularityReport
from regforge.common.rng import bernoulli_mask, make_rng
from regforge.modules.hypergraph.core import (Edge, KGraph, Polyad, VertexLayout, canonical_edge, cliques,
                                              cliques_containing)
from regforge.modules.rsreg.polyad import is_eps_regular_in_polyad

logger = logging.getLogger(__name__)

COUNT_WORK_CAP = 10 ** 7


@dataclass(frozen=True)
class Complex:
    """levels[r - 2] holds P^(r) for 2 <= r <= k - 1"""
    layout: VertexLayout
    levels: Tuple[FrozenSet[Edge], ...] = ()

    def __post_init__(self):
        k = self.layout.num_classes
        if k < 2:
            raise InputError("A complex needs at least two classes")
        if len(self.levels) != k - 2:
            raise InputError(f"A {k}-complex has levels 2..{k - 1}, got {len(self.levels)} levels")
        for r, edges in enumerate(self.levels, start=2):
            below = self.levels[r - 3] if r > 2 else None
            for edge in edges:
                if canonical_edge(self.layout, edge, r) != edge:
                    raise InputError(f"Level {r} edge {edge} is not sorted")
                if below is not None:
                    for sub in itertools.combinations(edge, r - 1):
                        if sub not in below:
                            raise InputError(f"Level {r} edge {edge} is not a clique of level {r - 1}")

    @property
    def k(self) -> int:
        return self.layout.num_classes

    def level(self, r: int) -> FrozenSet[Edge]:
        return self.levels[r - 2]

    def restricted(self, r: int, classes: Sequence[int]) -> Tuple[KGraph, Polyad]:
        """P^(r)[V_i1, ..., V_ir] and the polyad P^(r-1)[V_i1, ..., V_ir] it should be regular in."""
        sub_layout = self.layout.sub(classes)
        keep = set(sub_layout.class_of)
        top = KGraph(sub_layout, r, frozenset(e for e in self.level(r) if keep.issuperset(e)))
        if r == 2:
            return top, Polyad.complete(sub_layout)
        lower = [e for e in self.level(r - 1) if keep.issuperset(e)]
        return top, Polyad.from_union(sub_layout, lower)

    def top_polyad(self) -> Polyad:
        """P^(k-1) as a k-polyad; K(P) of the complex is its clique set."""
        if self.k == 2:
            return Polyad.complete(self.layout)
        return Polyad.from_union(self.layout, self.level(self.k - 1))


def complete_complex(layout: VertexLayout) -> Complex:
    k = layout.num_classes
    levels = []
    for r in range(2, k):
        edges = set()
        for combo in itertools.combinations(range(k), r):
            edges.update(tuple(sorted(t)) for t in itertools.product(*(layout.classes[i].vertices for i in combo)))
        levels.append(frozenset(edges))
    return Complex(layout, tuple(levels))


def random_complex(k: int, sizes, densities: Sequence[RationalLike], seed: int) -> Complex:
    """Each cross pair kept with probability d_2, then each r-clique of the level below with probability d_r."""
    sizes = [sizes] * k if isinstance(sizes, int) else list(sizes)
    densities = [parse_rational(d) for d in densities]
    if len(sizes) != k or len(densities) != k - 2:
        raise InputError(f"A {k}-complex needs {k} class sizes and {k - 2} densities")
    layout = VertexLayout.contiguous([(f"V{i + 1}", n) for i, n in enumerate(sizes)])
    rng = make_rng(seed, "complex", k)
    levels: List[FrozenSet[Edge]] = []
    for r, density in enumerate(densities, start=2):
        candidates = []
        for combo in itertools.combinations(range(k), r):
            sub = layout.sub(combo)
            if r == 2:
                candidates.extend(sorted(tuple(sorted(t)) for t in
                                         itertools.product(*(c.vertices for c in sub.classes))))
            else:
                keep = set(sub.class_of)
                lower = [e for e in levels[-1] if keep.issuperset(e)]
                candidates.extend(sorted(cliques(Polyad.from_union(sub, lower)).edges))
        chosen = bernoulli_mask(rng, density, len(candidates))
        levels.append(frozenset(e for e, keep_it in zip(candidates, chosen) if keep_it))
    return Complex(layout, tuple(levels))


def _triangle_counts(complex_: Complex) -> Tuple[int, List[int]]:
    layout = complex_.layout
    index = [{v: j for j, v in enumerate(c.vertices)} for c in layout.classes]
    mats = {}
    for a, b in ((0, 1), (0, 2), (1, 2)):
        mats[(a, b)] = np.zeros((layout.sizes[a], layout.sizes[b]), dtype=np.int64)
    for u, v in complex_.level(2):
        cu, cv = layout.class_of[u], layout.class_of[v]
        if cu > cv:
            u, v, cu, cv = v, u, cv, cu
        mats[(cu, cv)][index[cu][u], index[cv][v]] = 1
    a12, a13, a23 = mats[(0, 1)], mats[(0, 2)], mats[(1, 2)]
    common = a13 @ a23.T
    total = int((common * a12).sum())
    rows, cols = np.nonzero(a12)
    return total, [int(common[i, j]) for i, j in zip(rows, cols)]


def _generic_counts(complex_: Complex) -> Tuple[int, List[int]]:
    polyad = complex_.top_polyad()
    last = polyad.parts[-1]
    if len(last) * complex_.layout.sizes[-1] > COUNT_WORK_CAP:
        raise CapExceededError(f"Instance too large for exact clique counting: {len(last)} top edges")
    total = len(cliques(polyad).edges)
    return total, [len(cliques_containing(polyad, e)) for e in sorted(last)]


def dense_counting_check(complex_: Complex, gamma: RationalLike, densities: Sequence[RationalLike]) -> CountingReport:
    """Exact |K(P)| against (1 +- gamma) prod d_i^C(k,i) prod n_i, plus the per-edge extension counts over P_k."""
    k = complex_.k
    if k < 3:
        raise InputError("Dense counting needs a k-complex with k >= 3")
    gamma = parse_rational(gamma)
    densities = [parse_rational(d) for d in densities]
    if len(densities) != k - 2:
        raise InputError(f"Expected {k - 2} densities d_2..d_{k - 1}")
    if k == 3:
        total, extensions = _triangle_counts(complex_)
    else:
        total, extensions = _generic_counts(complex_)
    sizes = complex_.layout.sizes
    centre = prod((d ** comb(k, i) for i, d in enumerate(densities, start=2)), start=Fraction(1)) * prod(sizes)
    low, high = (1 - gamma) * centre, (1 + gamma) * centre
    per_edge = prod((d ** comb(k - 1, i - 1) for i, d in enumerate(densities, start=2)),
                    start=Fraction(1)) * sizes[-1]
    exceptional = sum(1 for x in extensions if abs(x - per_edge) > gamma * per_edge)
    allowed = gamma * len(extensions)
    in_band = low <= total <= high
    if not in_band:
        logger.warning("Clique count %d outside [%s, %s]; below n_0 this is advisory",
                       total, format_rational(low), format_rational(high))
    return CountingReport(count=total, band_low=format_rational(low), band_high=format_rational(high),
                          in_band=in_band, top_edges=len(extensions), exceptional_edges=exceptional,
                          exceptional_allowed=format_rational(allowed), extensions_ok=exceptional <= allowed,
                          notes=["n_0 is not instantiated; counts are checked at desk scale"])


def slice_complex(complex_: Complex, subset, delta: RationalLike) -> Complex:
    """P[V_1, ..., V_{k-1}, V'_k] for |V'_k| >= delta |V_k|."""
    delta = parse_rational(delta)
    chosen = frozenset(subset)
    last = complex_.layout.vertex_set(complex_.k - 1)
    if not chosen <= last:
        raise InputError("The slice must be a subset of the last class")
    if len(chosen) < delta * len(last):
        raise InputError(f"Subset too small: {len(chosen)} < {format_rational(delta)} * {len(last)}")
    subsets = [c.vertices for c in complex_.layout.classes[:-1]] + [chosen]
    layout = complex_.layout.with_subsets(subsets)
    keep = set(layout.class_of)
    return Complex(layout, tuple(frozenset(e for e in edges if keep.issuperset(e)) for edges in complex_.levels))


def is_complex_regular(complex_: Complex, epsilon: RationalLike, densities: Sequence[RationalLike],
                       mode: str = "exact") -> RegularityReport:
    """Every P^(r)[V_i1..V_ir] is (epsilon, d_r)-regular in P^(r-1)[V_i1..V_ir]."""
    k = complex_.k
    densities = [parse_rational(d) for d in densities]
    if len(densities) != k - 2:
        raise InputError(f"Expected {k - 2} densities d_2..d_{k - 1}")
    checked = 0
    for r in range(2, k):
        for combo in itertools.combinations(range(k), r):
            top, polyad = complex_.restricted(r, combo)
            report = is_eps_regular_in_polyad(top, polyad, epsilon, densities[r - 2], mode)
            checked += 1
            if not report.verdict:
                labels = [complex_.layout.labels[i] for i in combo]
                report.witness.location = f"level {r} on {labels}: {report.witness.location}"
                return report
    return RegularityReport(verdict=True, stats={"checked": checked})


def regularity_epsilon(densities: Sequence[RationalLike], f) -> Fraction:
    """epsilon = f(d_0) with d_0 the smallest density."""
    return f(min(parse_rational(d) for d in densities))
