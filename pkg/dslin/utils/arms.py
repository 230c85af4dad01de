from dataclasses import dataclass
from logging import (
    getLogger,
    Logger,
)
from typing import (
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from bandits_shared.exceptions import ArmFamilyError
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    induced_edges,
)


log: Logger = getLogger(__name__)


RANK_THRESHOLD: float = 1e-8

PROBABILITY_TOLERANCE: float = 1e-12

# Queried sets must have more than two vertices
MIN_ARM_SIZE: int = 3


class RankTracker(object):
    """
    Incremental Gram-Schmidt over stacked rows. ``add`` reports whether a row
    raised the rank; residuals below the threshold (relative to the row norm)
    count as dependent.
    """

    def __init__(self, dimension: int, threshold: float = RANK_THRESHOLD):

        self.dimension: int = dimension
        self.threshold: float = threshold
        self._basis: List[np.ndarray] = []

    @property
    def rank(self) -> int:
        return len(self._basis)

    def add(self, row: np.ndarray) -> bool:

        norm: float = float(np.linalg.norm(row))

        if norm == 0.0 or self.rank == self.dimension:
            return False

        residual: np.ndarray = row.astype(np.float64)

        # Two passes keep the basis orthogonal in floating point
        for _ in range(2):
            for q in self._basis:
                residual = residual - (q @ residual) * q

        residual_norm: float = float(np.linalg.norm(residual))

        if residual_norm <= self.threshold * norm:
            return False

        self._basis.append(residual / residual_norm)

        return True


class Allocation(object):
    """Static sampling strategy p over the arms of a family."""

    def probabilities(self, n_arms: int) -> np.ndarray:
        raise NotImplementedError


class UniformAllocation(Allocation):

    def probabilities(self, n_arms: int) -> np.ndarray:
        return np.full(n_arms, 1.0 / n_arms)


@dataclass(frozen=True)
class ArmFamily:

    arms: Tuple[VertexSet, ...]

    # Ascending edge indices of E(S) for each arm
    supports: Tuple[np.ndarray, ...]

    p: np.ndarray

    # Arms whose indicators form a basis of R^m, in the order found
    basis: Tuple[int, ...]

    k: int

    def __len__(self) -> int:
        return len(self.arms)

    @property
    def support(self) -> np.ndarray:
        """Indices of arms with positive probability."""

        return np.flatnonzero(self.p > 0)


def build_arm_family(
    graph: Graph,
    arms: Sequence[VertexSet],
    k: int,
    allocation: Optional[Allocation] = None,
    p: Optional[Sequence[float]] = None,
) -> ArmFamily:
    """
    Validates a family of queryable sets: every arm has at least k vertices
    and at least one induced edge, the allocation is a probability vector and
    the edge indicators span R^m.
    """

    if k < MIN_ARM_SIZE:
        raise ArmFamilyError(f'Minimum arm size must exceed 2, got {k}')

    if not arms:
        raise ArmFamilyError('Arm family is empty')

    supports: List[np.ndarray] = []

    for i, arm in enumerate(arms):

        if len(arm) < k:
            raise ArmFamilyError(
                f'Arm {i} has {len(arm)} vertices, fewer than k={k}'
            )

        support: List[int] = induced_edges(graph, arm)

        if not support:
            raise ArmFamilyError(f'Arm {i} induces no edges')

        supports.append(np.array(support, dtype=np.int64))

    if p is None:
        probabilities: np.ndarray = (
            allocation or UniformAllocation()
        ).probabilities(len(arms))
    else:
        probabilities = np.asarray(p, dtype=np.float64)

    if (
        probabilities.shape != (len(arms),)
        or np.any(probabilities < 0)
        or abs(probabilities.sum() - 1.0) > PROBABILITY_TOLERANCE
    ):
        raise ArmFamilyError('Allocation is not a probability vector')

    tracker: RankTracker = RankTracker(graph.m)
    basis: List[int] = [
        i for i, support in enumerate(supports)
        if tracker.add(graph.indicator(support))
    ]

    if tracker.rank < graph.m:
        raise ArmFamilyError(
            f'Arm indicators have rank {tracker.rank}, need m={graph.m}'
        )

    return ArmFamily(
        arms=tuple(frozenset(arm) for arm in arms),
        supports=tuple(supports),
        p=probabilities,
        basis=tuple(basis),
        k=k,
    )


def generate_arm_family(
    graph: Graph,
    k: int,
    rng: np.random.Generator,
    allocation: Optional[Allocation] = None,
    max_attempts: Optional[int] = None,
) -> ArmFamily:
    """
    Random family of m arms whose indicators have rank m.

    Each candidate has a size drawn uniformly from [k, n] and members drawn
    uniformly without replacement; only candidates that raise the rank are
    kept.
    """

    if k < MIN_ARM_SIZE or k > graph.n:
        raise ArmFamilyError(
            f'Minimum arm size k={k} must lie in [3, n={graph.n}]'
        )

    if graph.m == 0:
        raise ArmFamilyError('Graph has no edges to learn')

    max_attempts = max_attempts or 50 * graph.m + 1000
    tracker: RankTracker = RankTracker(graph.m)
    arms: List[VertexSet] = []

    for attempt in range(max_attempts):

        size: int = int(rng.integers(k, graph.n + 1))
        arm: VertexSet = frozenset(
            int(v) for v in rng.choice(graph.n, size=size, replace=False)
        )
        support: List[int] = induced_edges(graph, arm)

        if support and tracker.add(graph.indicator(support)):
            arms.append(arm)

        if tracker.rank == graph.m:
            log.debug(
                'Arm family for %s reached rank %d after %d draws',
                graph.name,
                graph.m,
                attempt + 1
            )
            return build_arm_family(graph, arms, k, allocation=allocation)

    raise ArmFamilyError(
        f'No rank-{graph.m} arm family after {max_attempts} draws '
        f'(reached rank {tracker.rank})'
    )
