"""
One seeded run of one algorithm. This module stays free of Django models so
that worker processes can import it without touching the database.
"""
import math
import time
from dataclasses import (
    asdict,
    dataclass,
    field,
)
from logging import (
    getLogger,
    Logger,
)
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Optional,
    Tuple,
)

import networkx as nx
import numpy as np

from bandits_shared.exceptions import DensestBanditsError
from baselines.utils.naive import run_naive
from baselines.utils.r_oracle import (
    oracle_intervals,
    run_r_oracle,
)
from dslin.utils.arms import ArmFamily
from dslin.utils.design import DSLinParameters
from dslin.utils.runner import (
    StopMode,
    run_dslin,
)
from dssr.utils.peeling import run_dssr
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
    max_degree,
)
from offline_solvers.utils.brute_force import brute_force_densest
from offline_solvers.utils.exact import exact_densest
from offline_solvers.utils.peeling import greedy_peeling
from stochastic_oracle.utils.oracle import (
    NoiseModel,
    SamplingOracle,
    make_oracle,
)


log: Logger = getLogger(__name__)


DSLIN_TRACE_FIELDS: Tuple[str, ...] = (
    'iteration',
    'radius',
    'estimated_density',
    'true_density',
    'estimation_error',
)

DSSR_TRACE_FIELDS: Tuple[str, ...] = (
    'phase',
    'survivors',
    'quality',
    'cumulative_queries',
    'cumulative_single_edge_queries',
)

# Failures recorded on the run instead of aborting the batch
RUN_ERRORS = (
    DensestBanditsError,
    ArithmeticError,
    LookupError,
    RuntimeError,
    ValueError,
    nx.NetworkXError,
    np.linalg.LinAlgError,
)


@dataclass(frozen=True)
class BatchContext:
    """Everything a worker needs, shared by all seeds of a batch."""

    algorithm: str
    graph: Graph
    weights: WeightVector
    opt: Optional[float]
    noise: NoiseModel
    params: Dict[str, Any]
    family: Optional[ArmFamily] = None


@dataclass
class TrialOutcome:

    algo: str
    graph: str
    seed: int
    budget: Optional[int] = None
    quality: Optional[float] = None
    opt: Optional[float] = None
    out_size: Optional[int] = None
    total_queries: Optional[int] = None
    single_edge_queries: Optional[int] = None
    elapsed_ms: Optional[float] = None
    histogram: Dict[int, int] = field(default_factory=dict)
    error: Optional[str] = None
    trace: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def run_ok(self) -> bool:
        return self.error is None


# (output set, oracle used or None, budget or iteration cap, trace rows)
AlgorithmOutput = Tuple[
    VertexSet,
    Optional[SamplingOracle],
    Optional[int],
    List[Dict[str, Any]],
]


def selection_generator(seed: int) -> np.random.Generator:
    """Stream independent of the oracle noise stream for the same seed."""

    return np.random.Generator(np.random.Philox(key=seed).jumped())


def _oracle(context: BatchContext, seed: int) -> SamplingOracle:
    return make_oracle(context.graph, context.weights, context.noise, seed)


def _exact(context: BatchContext, seed: int) -> AlgorithmOutput:
    return exact_densest(context.graph, context.weights).vertices, None, None, []


def _brute(context: BatchContext, seed: int) -> AlgorithmOutput:

    return (
        brute_force_densest(context.graph, context.weights).vertices,
        None,
        None,
        []
    )


def _g_oracle(context: BatchContext, seed: int) -> AlgorithmOutput:
    return greedy_peeling(context.graph, context.weights).vertices, None, None, []


def _dslin(context: BatchContext, seed: int) -> AlgorithmOutput:

    graph: Graph = context.graph
    params: Dict[str, Any] = context.params
    weight_bound: Optional[float] = params.get('weight_bound')

    hyper: DSLinParameters = DSLinParameters(
        epsilon=params['epsilon'],
        delta=params['delta'],
        lam=params['lam'],
        noise_scale=params['noise_scale'],
        weight_bound=(
            weight_bound if weight_bound is not None
            else math.sqrt(graph.m) * 100
        ),
        max_degree=max_degree(graph),
    )
    max_iters: int = graph.m + params['max_iters']
    oracle: SamplingOracle = _oracle(context, seed)

    result = run_dslin(
        graph,
        context.family,
        oracle,
        hyper,
        max_iters,
        stop_mode=StopMode(params['stop_mode']),
        true_weights=context.weights,
        trace_every=params['trace_every'],
        qp_exact_max_dim=params['qp_exact_max_dim'],
    )

    return (
        result.vertices,
        oracle,
        max_iters,
        [asdict(point) for point in result.diagnostics.trace]
    )


def _dssr(context: BatchContext, seed: int) -> AlgorithmOutput:

    oracle: SamplingOracle = _oracle(context, seed)
    budget: int = context.params['budget']
    result = run_dssr(context.graph, oracle, budget)

    return (
        result.vertices,
        oracle,
        budget,
        [asdict(record) for record in result.diagnostics.phases]
    )


def _naive(context: BatchContext, seed: int) -> AlgorithmOutput:

    oracle: SamplingOracle = _oracle(context, seed)
    budget: int = context.params['budget']
    result = run_naive(
        context.graph,
        context.family,
        oracle,
        budget,
        selection_generator(seed)
    )

    return result.vertices, oracle, budget, []


def _r_oracle(context: BatchContext, seed: int) -> AlgorithmOutput:

    oracle: SamplingOracle = _oracle(context, seed)
    lower, upper = oracle_intervals(
        context.weights,
        literal_lower=context.params['literal_lower']
    )
    result = run_r_oracle(
        context.graph,
        oracle,
        lower,
        upper,
        gamma=context.params['gamma'],
        epsilon=context.params['r_epsilon'],
    )

    return result.vertices, oracle, None, []


ALGORITHMS: Dict[str, Callable[[BatchContext, int], AlgorithmOutput]] = {
    'exact': _exact,
    'brute': _brute,
    'g_oracle': _g_oracle,
    'dslin': _dslin,
    'dssr': _dssr,
    'naive': _naive,
    'r_oracle': _r_oracle,
}


def run_trial(context: BatchContext, seed: int) -> TrialOutcome:
    """Runs one seed; known failure types are recorded on the outcome."""

    outcome: TrialOutcome = TrialOutcome(
        algo=context.algorithm,
        graph=context.graph.name,
        seed=seed,
        opt=context.opt,
    )
    started: float = time.perf_counter()

    try:
        vertices, oracle, budget, trace = ALGORITHMS[context.algorithm](
            context,
            seed
        )
    except RUN_ERRORS as e:
        log.exception(
            '%s on %s failed for seed %d',
            context.algorithm,
            context.graph.name,
            seed
        )
        outcome.error = f'{type(e).__name__} - "{e}"'
        return outcome

    outcome.elapsed_ms = (time.perf_counter() - started) * 1000
    outcome.budget = budget
    outcome.quality = density(context.graph, context.weights, vertices)
    outcome.out_size = len(vertices)
    outcome.trace = trace

    if oracle is None:
        outcome.total_queries = 0
        outcome.single_edge_queries = 0
    else:
        counters = oracle.snapshot()
        outcome.total_queries = counters.total_queries
        outcome.single_edge_queries = counters.single_edge_queries
        outcome.histogram = counters.histogram

    return outcome
