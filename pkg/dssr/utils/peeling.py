"""
DS-SR: successive-reject peeling on empirical degrees under a fixed budget.
"""
import math
from dataclasses import (
    dataclass,
    field,
)
from logging import (
    getLogger,
    Logger,
)
from typing import (
    Dict,
    FrozenSet,
    List,
    Optional,
    Set,
    Tuple,
)

import numpy as np

from bandits_shared.exceptions import BudgetExceededError
from dssr.utils.schedule import (
    BudgetSchedule,
    build_schedule,
)
from graph_core.utils.graph import (
    Graph,
    VertexSet,
)
from stochastic_oracle.utils.oracle import SamplingOracle


log: Logger = getLogger(__name__)


class PeelingState(object):
    """
    Survivors of the peeling plus the empirical degree of each survivor and
    the number of observations behind it.
    """

    def __init__(self, graph: Graph, oracle: SamplingOracle):

        self.graph: Graph = graph
        self.oracle: SamplingOracle = oracle

        self.survivors: Set[int] = set(range(graph.n))

        # Survivors before the last removal
        self.previous: FrozenSet[int] = frozenset(self.survivors)
        self.last_removed: Optional[int] = None

        self.degree_estimates: Dict[int, float] = {}
        self.sample_counts: Dict[int, int] = {v: 0 for v in range(graph.n)}

    def remove(self, v: int) -> None:

        self.previous = frozenset(self.survivors)
        self.survivors.remove(v)
        self.last_removed = v

        self.degree_estimates.pop(v, None)
        self.sample_counts.pop(v, None)

    def changed_star(self, v: int) -> bool:
        """Whether v lost an edge to the last removed vertex."""

        if self.last_removed is None:
            return False

        return self.last_removed in self.graph.neighbors_in(v, self.previous)

    def empirical_quality(self) -> float:
        """Half the summed empirical degrees over |S|."""

        total: float = math.fsum(
            self.degree_estimates[v] for v in sorted(self.survivors)
        )

        return total / 2 / len(self.survivors)


def _fresh_mean(oracle: SamplingOracle, star: List[int], times: int) -> float:
    """Mean shifted by the first draw; identical draws give that draw."""

    draws: np.ndarray = oracle.sample_edges_many(star, times)
    first: float = float(draws[0])

    return first + math.fsum(draws - first) / times


def sample_phase_vertex(
    state: PeelingState,
    schedule: BudgetSchedule,
    t: int,
    v: int,
) -> None:
    """
    Refreshes the empirical degree of survivor v in phase t.

    An empty star gives degree 0 without a query. A star that lost an edge to
    the last removed vertex is re-estimated from T'_t fresh observations. Any
    other star gets tau_t more observations merged into the carried mean.
    """

    star: List[int] = state.graph.star_edges(v, frozenset(state.survivors))

    if not star:
        state.degree_estimates[v] = 0.0
        state.sample_counts[v] = 0
        return

    if state.changed_star(v):

        times: int = schedule.cumulative_samples(t)
        state.degree_estimates[v] = _fresh_mean(state.oracle, star, times)
        state.sample_counts[v] = times

        return

    tau: int = schedule.tau(t)

    if not tau:
        return

    count: int = state.sample_counts[v]
    mean: float = _fresh_mean(state.oracle, star, tau)

    if count:
        carried: float = state.degree_estimates[v]
        mean = carried + tau * (mean - carried) / (count + tau)

    state.degree_estimates[v] = mean
    state.sample_counts[v] = count + tau


@dataclass(frozen=True)
class PhaseRecord:

    phase: int
    survivors: int
    quality: float
    cumulative_queries: int
    cumulative_single_edge_queries: int


@dataclass
class DSSRDiagnostics:

    schedule: BudgetSchedule
    phases: List[PhaseRecord] = field(default_factory=list)
    removal_order: List[int] = field(default_factory=list)
    queries: int = 0
    single_edge_queries: int = 0

    @property
    def quality_trace(self) -> List[float]:
        return [record.quality for record in self.phases]


@dataclass(frozen=True)
class DSSRResult:

    vertices: VertexSet
    diagnostics: DSSRDiagnostics


def run_dssr(graph: Graph, oracle: SamplingOracle, budget: int) -> DSSRResult:
    """
    Fixed-budget DS-SR. Each phase refreshes the empirical degree of every
    survivor, records the empirical quality of the survivor set and removes
    the survivor of least empirical degree (smallest index on ties). The
    result is the recorded set of highest empirical quality, the largest such
    set on ties. At most ``budget`` oracle queries are issued.
    """

    schedule: BudgetSchedule = build_schedule(budget, graph.n)
    state: PeelingState = PeelingState(graph, oracle)
    diagnostics: DSSRDiagnostics = DSSRDiagnostics(schedule=schedule)

    start_queries: int = oracle.total_queries
    start_single: int = oracle.single_edge_queries

    best: Tuple[float, VertexSet] = (-np.inf, frozenset())

    for t in range(1, graph.n):

        for v in sorted(state.survivors):
            sample_phase_vertex(state, schedule, t, v)

        quality: float = state.empirical_quality()
        current: VertexSet = frozenset(state.survivors)

        if quality > best[0]:
            best = (quality, current)

        diagnostics.phases.append(PhaseRecord(
            phase=t,
            survivors=len(current),
            quality=quality,
            cumulative_queries=oracle.total_queries - start_queries,
            cumulative_single_edge_queries=(
                oracle.single_edge_queries - start_single
            ),
        ))

        removed: int = min(
            state.survivors,
            key=lambda v: (state.degree_estimates[v], v)
        )
        state.remove(removed)
        diagnostics.removal_order.append(removed)

    diagnostics.queries = oracle.total_queries - start_queries
    diagnostics.single_edge_queries = oracle.single_edge_queries - start_single

    if diagnostics.queries > budget:
        raise BudgetExceededError(
            f'DS-SR issued {diagnostics.queries} queries with a budget of '
            f'{budget}'
        )

    log.debug(
        'DS-SR on %s used %d of %d queries',
        graph.name,
        diagnostics.queries,
        budget
    )

    return DSSRResult(vertices=best[1], diagnostics=diagnostics)
