from dataclasses import dataclass

import numpy as np

from bandits_shared.exceptions import DomainError
from dslin.utils.arms import ArmFamily
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    weight_vector,
)
from offline_solvers.utils.exact import exact_densest
from stochastic_oracle.utils.oracle import SamplingOracle


@dataclass(frozen=True)
class NaiveResult:

    vertices: VertexSet

    # Running mean of the equal-split observations per edge
    averages: np.ndarray
    visits: np.ndarray


def run_naive(
    graph: Graph,
    family: ArmFamily,
    oracle: SamplingOracle,
    budget: int,
    rng: np.random.Generator,
) -> NaiveResult:
    """
    Queries ``budget`` arms drawn uniformly from the family, splits each
    observation equally over the arm's induced edges, and solves the densest
    subgraph problem on the per-edge averages (negatives clipped to 0).
    """

    if budget < 1:
        raise DomainError(f'Naive needs a positive budget, got {budget}')

    averages: np.ndarray = np.zeros(graph.m)
    visits: np.ndarray = np.zeros(graph.m, dtype=np.int64)

    for arm in rng.integers(0, len(family), size=budget):

        support: np.ndarray = family.supports[int(arm)]
        share: float = oracle.sample_edges(support) / support.size

        visits[support] += 1
        averages[support] += (share - averages[support]) / visits[support]

    estimate = weight_vector(graph, np.maximum(averages, 0.0))

    return NaiveResult(
        vertices=exact_densest(graph, estimate).vertices,
        averages=averages,
        visits=visits,
    )
