"""
Partitions of finite sets: refinement, approximate refinement, equitability,
and the union construction used to compare an approximate refinement with a single part.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from regforge.common.errors import InputError
from regforge.common.rational import format_rational
from regforge.common.reports import ApproxRefineReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetPartition:
    """Disjoint non-empty parts; the universe is their union"""
    parts: Tuple[FrozenSet[Hashable], ...]

    def __post_init__(self):
        seen = set()
        for index, part in enumerate(self.parts):
            if not part:
                raise InputError(f"Part {index} is empty")
            if seen & part:
                raise InputError(f"Part {index} overlaps an earlier part")
            seen |= part

    @classmethod
    def of(cls, parts: Iterable[Iterable[Hashable]]) -> "SetPartition":
        return cls(tuple(frozenset(p) for p in parts))

    @classmethod
    def singletons(cls, universe: Iterable[Hashable]) -> "SetPartition":
        return cls(tuple(frozenset([x]) for x in sorted(universe)))

    @cached_property
    def universe(self) -> FrozenSet[Hashable]:
        return frozenset().union(*self.parts)

    @cached_property
    def part_of(self) -> Dict[Hashable, int]:
        return {x: i for i, part in enumerate(self.parts) for x in part}

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def restrict(self, subset: Iterable[Hashable]) -> "SetPartition":
        """Intersect every part with a subset, dropping empty results."""
        keep = frozenset(subset)
        return SetPartition(tuple(p & keep for p in self.parts if p & keep))


def _same_universe(q: SetPartition, p: SetPartition):
    if q.universe != p.universe:
        raise InputError("Partitions are over different universes")


def refines(q: SetPartition, p: SetPartition) -> bool:
    """Q refines P: every part of Q lies inside a part of P."""
    _same_universe(q, p)
    return all(len({p.part_of[x] for x in part}) == 1 for part in q.parts)


def approx_contained(part: FrozenSet[Hashable], target: FrozenSet[Hashable], beta: Fraction) -> bool:
    """S is beta-contained in T when |S minus T| <= beta |S|."""
    return len(part - target) <= beta * len(part)


def approx_refines(q: SetPartition, p: SetPartition, beta: Fraction) -> ApproxRefineReport:
    """Q approximately refines P when the parts not beta-contained in any part of P have total size <= beta n."""
    _same_universe(q, p)
    beta = Fraction(beta)
    if beta < 0:
        raise InputError("beta must be non-negative")
    assignment: List[Optional[int]] = []
    bad_mass = 0
    for part in q.parts:
        overlaps: Dict[int, int] = {}
        for x in part:
            overlaps[p.part_of[x]] = overlaps.get(p.part_of[x], 0) + 1
        hosts = sorted(i for i, inside in overlaps.items() if len(part) - inside <= beta * len(part))
        if beta < Fraction(1, 2) and len(hosts) > 1:
            raise AssertionError(f"Part assigned to {hosts} although beta < 1/2")
        if hosts:
            assignment.append(max(hosts, key=lambda i: (overlaps[i], -i)))
        else:
            assignment.append(None)
            bad_mass += len(part)
    verdict = bad_mass <= beta * len(q.universe)
    return ApproxRefineReport(verdict=verdict, beta=format_rational(beta), bad_mass=bad_mass, assignment=assignment)


def is_equitable(partition: SetPartition) -> bool:
    """Part sizes differ by at most one."""
    sizes = partition.sizes
    return not sizes or max(sizes) - min(sizes) <= 1


def refinement_size_bound(q: SetPartition, p: SetPartition) -> bool:
    """|Q| >= |P|/2 for Q a 1/2-approximate refinement of an equitable P."""
    if not is_equitable(p):
        raise InputError("Precondition unmet: P is not equitable")
    if not approx_refines(q, p, Fraction(1, 2)).verdict:
        raise InputError("Precondition unmet: Q does not 1/2-approximately refine P")
    return 2 * len(q) >= len(p)


@dataclass(frozen=True)
class UnionApprox:
    """A part of P together with the union of the parts of Q that are delta-contained in it"""
    index: int
    part: FrozenSet[Hashable]
    union: FrozenSet[Hashable]
    difference: int
    bound_holds: bool


def best_union_approx(p: SetPartition, q: SetPartition, delta: Fraction) -> UnionApprox:
    """Pick the part P of P whose union P_Q is closest relative to |P|; it meets |P sym P_Q| <= 3 delta |P|."""
    delta = Fraction(delta)
    if not approx_refines(q, p, delta).verdict:
        raise InputError("Precondition unmet: Q does not delta-approximately refine P")
    best: Optional[UnionApprox] = None
    best_ratio: Optional[Fraction] = None
    for index, part in enumerate(p.parts):
        union = frozenset().union(*(qp for qp in q.parts if approx_contained(qp, part, delta)))
        difference = len(part ^ union)
        ratio = Fraction(difference, len(part))
        if best_ratio is None or ratio < best_ratio:
            best_ratio = ratio
            best = UnionApprox(index, part, union, difference, difference <= 3 * delta * len(part))
    return best


def random_partition(universe: Sequence[Hashable], parts: int, rng: np.random.Generator,
                     equitable: bool = True) -> SetPartition:
    """Random partition into the given number of parts (equitable by default)."""
    items = list(universe)
    if parts < 1 or parts > len(items):
        raise InputError(f"Cannot split {len(items)} elements into {parts} parts")
    order = rng.permutation(len(items))
    if equitable:
        buckets = [[items[j] for j in order[i::parts]] for i in range(parts)]
    else:
        cuts = sorted(rng.choice(np.arange(1, len(items)), size=parts - 1, replace=False)) if parts > 1 else []
        bounds = [0, *cuts, len(items)]
        buckets = [[items[j] for j in order[a:b]] for a, b in zip(bounds, bounds[1:])]
    return SetPartition.of(buckets)
