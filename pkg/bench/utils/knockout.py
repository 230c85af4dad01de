import numpy as np

from bandits_shared.exceptions import DomainError
from dssr.utils.schedule import schedule_overhead
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    induced_edges,
    unit_weights,
    weight_vector,
)
from offline_solvers.utils.exact import exact_densest


INNER_WEIGHT_RANGE = (1.0, 20.0)
OUTER_WEIGHT_RANGE = (1.0, 100.0)


def seeded_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def knockout_weights(graph: Graph, seed: int) -> WeightVector:
    """
    Weights that knock out the unweighted densest subgraph: edges inside it
    are drawn uniformly from [1, 20], every other edge from [1, 100].
    """

    densest: VertexSet = exact_densest(graph, unit_weights(graph)).vertices
    rng: np.random.Generator = seeded_generator(seed)

    w: np.ndarray = rng.uniform(*OUTER_WEIGHT_RANGE, size=graph.m)
    inner = induced_edges(graph, densest)
    w[inner] = rng.uniform(*INNER_WEIGHT_RANGE, size=len(inner))

    return weight_vector(graph, w)


def default_budget(n: int) -> int:
    """
    Smallest power of ten at or above (n + 1)(n + 2) / 2, moved up one more
    decade when it would equal that overhead exactly.
    """

    if n < 2:
        raise DomainError(f'Default budget needs n >= 2, got {n}')

    overhead: int = schedule_overhead(n)
    budget: int = 1

    while budget < overhead:
        budget *= 10

    return budget * 10 if budget == overhead else budget
