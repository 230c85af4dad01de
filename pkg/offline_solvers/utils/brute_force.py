from typing import (
    List,
    Optional,
    Tuple,
)

import numpy as np

from bandits_shared.exceptions import DomainError
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
)
from offline_solvers.utils.result import DensestSubgraph


BRUTE_FORCE_MAX_N: int = 20

# Masks are scored in chunks to bound memory at n = 20
MASK_CHUNK: int = 1 << 16

TIE_TOLERANCE: float = 1e-12


def _mask_densities(graph: Graph, w: WeightVector) -> np.ndarray:
    """Density of every vertex mask 1 .. 2^n - 1 (index 0 is the empty set)."""

    n: int = graph.n
    values: np.ndarray = np.zeros(1 << n)

    for start in range(0, 1 << n, MASK_CHUNK):

        masks: np.ndarray = np.arange(start, min(start + MASK_CHUNK, 1 << n))
        weight: np.ndarray = np.zeros(masks.size)

        for (u, v), weight_e in zip(graph.edges, w):
            both: np.ndarray = ((masks >> u) & (masks >> v) & 1).astype(bool)
            weight[both] += weight_e

        sizes: np.ndarray = sum((masks >> v) & 1 for v in range(n))

        values[masks] = np.where(
            sizes > 0,
            weight / np.maximum(sizes, 1),
            -np.inf
        )

    return values


def _members(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(v for v in range(n) if mask >> v & 1)


def _best_mask(
    values: np.ndarray,
    n: int,
    excluded_mask: Optional[int] = None,
) -> int:

    if excluded_mask is not None:
        values = values.copy()
        values[excluded_mask] = -np.inf

    top: float = float(values.max())
    candidates: np.ndarray = np.flatnonzero(
        values >= top - TIE_TOLERANCE * max(1.0, abs(top))
    )
    keyed: List[Tuple[int, Tuple[int, ...], int]] = [
        (len(_members(int(mask), n)), _members(int(mask), n), int(mask))
        for mask in candidates
    ]

    return min(keyed)[2]


def _check_size(graph: Graph) -> None:

    if graph.n > BRUTE_FORCE_MAX_N:
        raise DomainError(
            f'Brute force is limited to n <= {BRUTE_FORCE_MAX_N}, '
            f'got n={graph.n}'
        )

    if graph.n < 1:
        raise DomainError('Graph has no vertices')


def brute_force_densest(graph: Graph, w: WeightVector) -> DensestSubgraph:
    """
    Exhaustive maximiser of f_w over all nonempty subsets. Ties go to the
    smallest set, then to the lexicographically smallest member list.
    """

    _check_size(graph)

    best: int = _best_mask(_mask_densities(graph, w), graph.n)
    vertices: VertexSet = frozenset(_members(best, graph.n))

    return DensestSubgraph(
        vertices=vertices,
        density=density(graph, w, vertices),
        all_zero=not np.any(w > 0),
    )


def brute_force_second_best(
    graph: Graph,
    w: WeightVector,
    best: VertexSet,
) -> float:
    """Largest density over nonempty subsets other than ``best``; 0 if none."""

    _check_size(graph)

    if graph.n == 1:
        return 0.0

    excluded: int = sum(1 << v for v in best)
    mask: int = _best_mask(_mask_densities(graph, w), graph.n, excluded)

    return density(graph, w, frozenset(_members(mask, graph.n)))
