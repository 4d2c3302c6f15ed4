"""
Edge-partition providers for the bipartite core of the lower-bound construction.
A provider turns two vertex sides into successively refined edge equipartitions G_1 > ... > G_s with |G_j| = 2^j.
Only the structural contract is certified; hardness of the partitions is not.
"""
import logging
from abc import abstractmethod
from typing import Hashable, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from regforge.common.errors import InputError
from regforge.common.rng import make_rng
from regforge.modules.partitions.sets import SetPartition, refines

logger = logging.getLogger(__name__)

Pair = Tuple[Hashable, Hashable]
EdgeLevel = List[frozenset]


class CorePartitionProvider(BaseModel):
    """Contract for building G_1 > ... > G_s over L x R"""
    name: str = "abstract"
    hardness_certified: bool = False

    @abstractmethod
    def build(self, left: Sequence[Hashable], right: Sequence[Hashable], s: int,
              left_chain: Optional[Sequence[SetPartition]] = None,
              right_chain: Optional[Sequence[SetPartition]] = None) -> List[EdgeLevel]:
        raise NotImplementedError

    def partitions(self, left: Sequence[Hashable], right: Sequence[Hashable], s: int,
                   left_chain: Optional[Sequence[SetPartition]] = None,
                   right_chain: Optional[Sequence[SetPartition]] = None) -> List[EdgeLevel]:
        """build() followed by the structural validation every caller relies on."""
        levels = self.build(left, right, s, left_chain, right_chain)
        validate_core_output(left, right, levels, s)
        logger.debug("✓ %s provider produced %d refined levels on %dx%d", self.name, s, len(left), len(right))
        return levels


class StubCoreProvider(CorePartitionProvider):
    """Random equitable halvings: level 1 halves L x R, every later level halves each part."""
    name: str = "stub"
    seed: int = 0

    def build(self, left: Sequence[Hashable], right: Sequence[Hashable], s: int,
              left_chain: Optional[Sequence[SetPartition]] = None,
              right_chain: Optional[Sequence[SetPartition]] = None) -> List[EdgeLevel]:
        if s < 1:
            raise InputError(f"Need at least one level, got s={s}")
        pairs = sorted((u, v) for u in left for v in right)
        if not pairs or len(pairs) % (2 ** s):
            raise InputError(f"divisibility: |L x R| = {len(pairs)} is not divisible by 2^{s}")
        rng = make_rng(self.seed, "core", len(left), len(right), s)
        levels: List[EdgeLevel] = []
        current = [pairs]
        for _ in range(s):
            halves = []
            for part in current:
                order = rng.permutation(len(part))
                half = len(part) // 2
                halves.append([part[j] for j in order[:half]])
                halves.append([part[j] for j in order[half:]])
            current = halves
            levels.append([frozenset(p) for p in current])
        return levels


def stub_core_provider(seed: int = 0) -> CorePartitionProvider:
    return StubCoreProvider(seed=seed)


def validate_core_output(left: Sequence[Hashable], right: Sequence[Hashable], levels: Sequence[EdgeLevel],
                         s: int) -> None:
    """Raise InputError unless levels are s successively refined equipartitions of L x R with 2^j parts."""
    universe = frozenset((u, v) for u in left for v in right)
    if len(levels) != s:
        raise InputError(f"Expected {s} levels, got {len(levels)}")
    previous = SetPartition.of([universe])
    for j, level in enumerate(levels, start=1):
        if len(level) != 2 ** j:
            raise InputError(f"Level {j} has {len(level)} parts, expected {2 ** j}")
        try:
            partition = SetPartition.of(level)
        except InputError as e:
            raise InputError(f"Level {j} is not a partition: {e}") from e
        if partition.universe != universe:
            raise InputError(f"Level {j} does not cover L x R")
        if any(len(part) * 2 ** j != len(universe) for part in level):
            raise InputError(f"Level {j} is not an equipartition of density 2^-{j}")
        if not refines(partition, previous):
            raise InputError(f"Level {j} does not refine level {j - 1}")
        previous = partition
