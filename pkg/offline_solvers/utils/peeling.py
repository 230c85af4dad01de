import heapq
import math
from dataclasses import dataclass
from typing import (
    Iterable,
    List,
    Set,
    Tuple,
)

from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
    edge_sum,
)
from offline_solvers.utils.result import DensestSubgraph


@dataclass(frozen=True)
class PeelingResult(DensestSubgraph):

    # Vertices in the order they were peeled off, n - 1 entries
    removal_order: Tuple[int, ...] = ()


def _half_degree_density(degree: List[float], alive: Iterable[int]) -> float:

    members: List[int] = sorted(alive)

    return math.fsum(degree[v] for v in members) / 2 / len(members)


def greedy_peeling(graph: Graph, w: WeightVector) -> PeelingResult:
    """
    Charikar's greedy peeling with known weights.

    Repeatedly removes a vertex of minimum weighted degree (smallest index on
    ties) and returns the densest of the nested sets S_n ⊃ ... ⊃ S_1; among
    equally dense sets the largest one wins. The result is at least half the
    optimum.

    Degrees are correctly rounded star sums over the survivors, recomputed
    after every removal; set densities are half the summed degrees over |S|.
    """

    n: int = graph.n
    alive: Set[int] = set(range(n))
    degree: List[float] = [
        edge_sum(w, graph.star_edges(v, graph.vertices)) for v in range(n)
    ]

    heap: List[Tuple[float, int]] = [(degree[v], v) for v in range(n)]
    heapq.heapify(heap)

    best_size: int = n
    best_value: float = _half_degree_density(degree, alive)
    order: List[int] = []

    for _ in range(n - 1):

        while True:
            d, v = heapq.heappop(heap)
            if v in alive and d == degree[v]:
                break  # Stale entries are skipped

        alive.remove(v)
        order.append(v)
        survivors: VertexSet = frozenset(alive)

        for u, _ in graph.adjacency[v]:
            if u in alive:
                degree[u] = edge_sum(w, graph.star_edges(u, survivors))
                heapq.heappush(heap, (degree[u], u))

        value: float = _half_degree_density(degree, alive)

        if value > best_value:
            best_value = value
            best_size = len(alive)

    removed: VertexSet = frozenset(order[:n - best_size])
    vertices: VertexSet = graph.vertices - removed

    return PeelingResult(
        vertices=vertices,
        density=density(graph, w, vertices),
        removal_order=tuple(order),
    )
