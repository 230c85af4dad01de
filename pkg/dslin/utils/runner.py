from dataclasses import (
    dataclass,
    field,
)
from enum import Enum
from logging import (
    getLogger,
    Logger,
)
from typing import (
    List,
    Optional,
)

import numpy as np

from bandits_shared.exceptions import DomainError
from dslin.utils.arms import ArmFamily
from dslin.utils.design import (
    DesignState,
    DSLinParameters,
    select_arm,
)
from dslin.utils.qp_bound import (
    QP_EXACT_MAX_DIM,
    BoundMode,
    QPBound,
    qp_upper_bound,
)
from dslin.utils.stopping import check_stop
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
    induced_edges,
)
from offline_solvers.utils.exact import (
    exact_densest,
    second_best_density,
)
from offline_solvers.utils.result import DensestSubgraph
from stochastic_oracle.utils.oracle import SamplingOracle


log: Logger = getLogger(__name__)


class StopMode(str, Enum):

    CONSERVATIVE = 'conservative'
    EXACT_SECOND_BEST = 'exact-second-best'


@dataclass(frozen=True)
class TracePoint:

    iteration: int
    radius: float
    estimated_density: float

    # Only known when the true weights are handed in for evaluation
    true_density: Optional[float] = None
    estimation_error: Optional[float] = None


@dataclass
class DSLinDiagnostics:

    iterations: int = 0
    stopped: bool = False
    capped: bool = False
    bound_mode: Optional[BoundMode] = None
    trace: List[TracePoint] = field(default_factory=list)

    @property
    def radius_trace(self) -> List[float]:
        return [point.radius for point in self.trace]


@dataclass(frozen=True)
class DSLinResult:

    vertices: VertexSet
    diagnostics: DSLinDiagnostics


def _trace_point(
    graph: Graph,
    state: DesignState,
    w_hat: np.ndarray,
    incumbent: DensestSubgraph,
    radius: float,
    true_weights: Optional[WeightVector],
) -> TracePoint:

    if true_weights is None:
        return TracePoint(
            iteration=state.t,
            radius=radius,
            estimated_density=incumbent.density,
        )

    return TracePoint(
        iteration=state.t,
        radius=radius,
        estimated_density=incumbent.density,
        true_density=density(graph, true_weights, incumbent.vertices),
        estimation_error=float(np.abs(true_weights - w_hat).sum()) / graph.m,
    )


def run_dslin(
    graph: Graph,
    family: ArmFamily,
    oracle: SamplingOracle,
    params: DSLinParameters,
    max_iters: int,
    stop_mode: StopMode = StopMode.CONSERVATIVE,
    true_weights: Optional[WeightVector] = None,
    trace_every: int = 1,
    qp_exact_max_dim: int = QP_EXACT_MAX_DIM,
) -> DSLinResult:
    """
    DS-Lin for the fixed-confidence setting.

    The first m rounds query the basis arms of the family once each, updating
    both A and b. Every later round estimates w, solves the densest subgraph
    problem under the estimate and evaluates the stopping rule; if the rule
    does not fire and fewer than ``max_iters`` rounds have been played, the
    arm with the smallest T(S) / p(S) is queried.
    """

    if max_iters < graph.m:
        raise DomainError(
            f'max_iters={max_iters} is smaller than m={graph.m}'
        )

    if trace_every < 1:
        raise DomainError(f'trace_every must be positive, got {trace_every}')

    state: DesignState = DesignState(graph.m, len(family), params)
    diagnostics: DSLinDiagnostics = DSLinDiagnostics()

    for arm in family.basis:
        state.update(
            arm,
            family.supports[arm],
            oracle.sample_edges(family.supports[arm])
        )

    # Main loop starts from an exact inverse
    state.resync()

    warm_start: Optional[VertexSet] = None

    while True:

        w_hat: np.ndarray = state.estimate()
        incumbent: DensestSubgraph = exact_densest(
            graph,
            w_hat,
            canonical=False,
            warm_start=warm_start
        )
        warm_start = incumbent.vertices

        width: float = state.width(induced_edges(graph, incumbent.vertices))
        bound: QPBound = qp_upper_bound(
            state.A_inv,
            exact_max_dim=qp_exact_max_dim,
            validate=False
        )
        radius: float = state.confidence_radius()

        second: Optional[float] = None

        if stop_mode == StopMode.EXACT_SECOND_BEST:
            second = second_best_density(graph, w_hat, incumbent.vertices)

        diagnostics.bound_mode = bound.mode

        stop: bool = check_stop(
            incumbent.density,
            width,
            incumbent.size,
            radius,
            bound.value,
            params.epsilon,
            second_best=second
        )
        capped: bool = not stop and state.t >= max_iters

        if stop or capped or (state.t - graph.m) % trace_every == 0:
            diagnostics.trace.append(_trace_point(
                graph,
                state,
                w_hat,
                incumbent,
                radius,
                true_weights
            ))

        if stop:
            diagnostics.stopped = True
            break

        if capped:
            diagnostics.capped = True
            log.warning(
                'DS-Lin on %s hit the iteration cap at t=%d without stopping',
                graph.name,
                state.t
            )
            break

        arm: int = select_arm(state, family)
        state.update(
            arm,
            family.supports[arm],
            oracle.sample_edges(family.supports[arm])
        )

    diagnostics.iterations = state.t

    return DSLinResult(vertices=incumbent.vertices, diagnostics=diagnostics)
