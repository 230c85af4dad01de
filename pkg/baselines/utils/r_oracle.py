"""
R-Oracle: robust densest subgraph with interval knowledge of the weights.
Every edge starts with an interval [l_e, r_e] that contains its mean and is
narrowed by single-edge sampling until the lower bounds pin down a good set.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bandits_shared.exceptions import (
    DegenerateIntervalError,
    DomainError,
)
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
    weight_vector,
)
from offline_solvers.utils.exact import exact_densest
from offline_solvers.utils.result import DensestSubgraph
from stochastic_oracle.utils.oracle import SamplingOracle


R_ORACLE_GAMMA: float = 0.9
R_ORACLE_EPSILON: float = 0.9


@dataclass(frozen=True)
class ROracleResult:

    vertices: VertexSet
    lower: np.ndarray
    upper: np.ndarray
    samples: np.ndarray

    @property
    def total_samples(self) -> int:
        return int(self.samples.sum())


def oracle_intervals(
    w: WeightVector,
    literal_lower: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Intervals [l, r] around the true weights with r = w + 1 and
    l = max(w - 1, 0). ``literal_lower`` uses min(w - 1, 0) instead.
    """

    lower: np.ndarray = (
        np.minimum(w - 1.0, 0.0) if literal_lower else np.maximum(w - 1.0, 0.0)
    )

    return lower, w + 1.0


def sample_count(
    m: int,
    width: float,
    gamma: float,
    epsilon: float,
    quality: float,
) -> int:
    """t_e = ceil(m (r_e - l_e)^2 ln(2m / gamma) / (epsilon^2 f^2))."""

    return math.ceil(
        m * width ** 2 * math.log(2 * m / gamma) / (epsilon ** 2 * quality ** 2)
    )


def _solve_lower(graph: Graph, lower: np.ndarray) -> DensestSubgraph:
    return exact_densest(graph, weight_vector(graph, np.maximum(lower, 0.0)))


def run_r_oracle(
    graph: Graph,
    oracle: SamplingOracle,
    lower: np.ndarray,
    upper: np.ndarray,
    gamma: float = R_ORACLE_GAMMA,
    epsilon: float = R_ORACLE_EPSILON,
) -> ROracleResult:

    if not 0 < gamma < 1 or epsilon <= 0:
        raise DomainError(
            f'Need gamma in (0, 1) and epsilon > 0, got {gamma}, {epsilon}'
        )

    if np.any(lower > upper):
        raise DomainError('Interval lower bounds exceed upper bounds')

    m: int = graph.m
    initial: DensestSubgraph = _solve_lower(graph, lower)
    quality: float = density(
        graph,
        np.maximum(lower, 0.0),
        initial.vertices
    )

    open_edges: np.ndarray = np.flatnonzero(lower < upper)
    samples: np.ndarray = np.zeros(m, dtype=np.int64)
    lower_out: np.ndarray = lower.astype(np.float64)
    upper_out: np.ndarray = upper.astype(np.float64)

    if open_edges.size and quality <= 0:
        raise DegenerateIntervalError(
            'Lower-bound optimum has zero density, sample counts are undefined'
        )

    half_width: float = epsilon * quality / math.sqrt(2 * m) if m else 0.0

    for e in open_edges:

        times: int = sample_count(
            m,
            float(upper[e] - lower[e]),
            gamma,
            epsilon,
            quality
        )
        mean: float = float(oracle.sample_edges_many([int(e)], times).mean())
        mean = min(max(mean, lower[e]), upper[e])

        lower_out[e] = max(lower[e], mean - half_width)
        upper_out[e] = min(upper[e], mean + half_width)
        samples[e] = times

    return ROracleResult(
        vertices=_solve_lower(graph, lower_out).vertices,
        lower=lower_out,
        upper=upper_out,
        samples=samples,
    )
