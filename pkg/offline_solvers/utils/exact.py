"""
Exact densest subgraph via parametric minimum cuts.

The reference formulation is Charikar's LP

    maximise    sum_e w_e x_e
    subject to  x_e <= y_u, x_e <= y_v   for every edge e = {u, v}
                sum_v y_v = 1,  x, y >= 0

whose optimum equals the maximum density. Instead of solving the LP we answer
"is there S with w(E(S)) - g|S| > 0?" with a maximum-closure cut: source -> edge
node with capacity w_e, edge node -> both endpoints with infinite capacity,
vertex -> sink with capacity g. The source side of the minimum cut is the
inclusion-minimal S maximising w(E(S)) - g|S|.
"""
from typing import (
    FrozenSet,
    List,
    Optional,
    Tuple,
)

import networkx as nx
import numpy as np

from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    density,
)
from offline_solvers.utils.peeling import greedy_peeling
from offline_solvers.utils.result import DensestSubgraph


EXACT_TOLERANCE: float = 1e-9

SOURCE: str = 'source'
SINK: str = 'sink'


def solver_tolerance(w: WeightVector) -> float:
    return EXACT_TOLERANCE * max(1.0, float(w.max()) if w.size else 0.0)


def minimal_closure(
    graph: Graph,
    w: WeightVector,
    g: float,
    forced: FrozenSet[int] = frozenset(),
    excluded: FrozenSet[int] = frozenset(),
) -> VertexSet:
    """
    Inclusion-minimal S with forced ⊆ S and S ∩ excluded = ∅ maximising
    w(E(S)) - g|S|.
    """

    network: nx.DiGraph = nx.DiGraph()
    network.add_node(SOURCE)
    network.add_node(SINK)

    for v in range(graph.n):
        if v not in excluded:
            network.add_edge(('vertex', v), SINK, capacity=max(g, 0.0))

    for i, (u, v) in enumerate(graph.edges):

        if w[i] <= 0 or u in excluded or v in excluded:
            continue

        # Arcs without a capacity attribute are uncapacitated
        network.add_edge(SOURCE, ('edge', i), capacity=float(w[i]))
        network.add_edge(('edge', i), ('vertex', u))
        network.add_edge(('edge', i), ('vertex', v))

    for v in forced:
        network.add_edge(SOURCE, ('vertex', v))

    _, (reachable, _) = nx.minimum_cut(network, SOURCE, SINK)

    return frozenset(
        node[1] for node in reachable
        if isinstance(node, tuple) and node[0] == 'vertex'
    )


def _search(
    graph: Graph,
    w: WeightVector,
    start: VertexSet,
    tolerance: float,
    forced: FrozenSet[int] = frozenset(),
    excluded: FrozenSet[int] = frozenset(),
) -> Tuple[VertexSet, float]:
    """
    Guess-and-test search on the density. Each guess is the incumbent density
    plus the tolerance; a cut that finds a denser set moves the incumbent up to
    that set's density, a cut that finds nothing certifies the incumbent is
    within the tolerance of the optimum.
    """

    best: VertexSet = start
    best_value: float = density(graph, w, best)

    while True:

        candidate: VertexSet = minimal_closure(
            graph,
            w,
            best_value + tolerance,
            forced=forced,
            excluded=excluded
        )

        if not candidate:
            break

        value: float = density(graph, w, candidate)

        if value <= best_value:
            break

        best, best_value = candidate, value

    return best, best_value


def _canonical(
    graph: Graph,
    w: WeightVector,
    best: VertexSet,
    value: float,
    tolerance: float,
) -> VertexSet:
    """
    Smallest maximiser, ties broken by sorted member order.

    Maximisers form a lattice, so for each v the maximiser containing v of
    least size is unique. It is found by forcing v in and pricing vertices
    slightly above the optimum; every smallest maximiser is one of these.
    """

    union: VertexSet = best | minimal_closure(graph, w, value - tolerance)

    if len(union) == 1:
        return best

    candidates: List[Tuple[int, Tuple[int, ...]]] = []

    for v in sorted(union):

        smallest: VertexSet = minimal_closure(
            graph,
            w,
            value + tolerance,
            forced=frozenset({v})
        )

        if density(graph, w, smallest) >= value - tolerance:
            candidates.append((len(smallest), tuple(sorted(smallest))))

    if not candidates:
        return best

    return frozenset(min(candidates)[1])


def exact_densest(
    graph: Graph,
    w: WeightVector,
    canonical: bool = True,
    warm_start: Optional[VertexSet] = None,
    tolerance: Optional[float] = None,
) -> DensestSubgraph:
    """
    Maximiser of f_w over nonempty vertex sets, exact up to the solver
    tolerance (1e-9 * max(1, max w) by default).

    The search starts from the greedy peeling solution, or from
    ``warm_start`` when that is denser under w. With ``canonical`` the
    smallest maximiser (then lexicographically first) is returned, which
    costs one extra cut per vertex in the union of all maximisers.
    """

    if graph.m == 0 or not np.any(w > 0):
        return DensestSubgraph(
            vertices=frozenset({0}),
            density=0.0,
            all_zero=True
        )

    tolerance = tolerance if tolerance is not None else solver_tolerance(w)

    start: VertexSet = greedy_peeling(graph, w).vertices

    if warm_start and density(graph, w, warm_start) > density(graph, w, start):
        start = warm_start

    best, value = _search(graph, w, start, tolerance)

    if canonical:
        best = _canonical(graph, w, best, value, tolerance)

    return DensestSubgraph(vertices=best, density=density(graph, w, best))


def second_best_density(
    graph: Graph,
    w: WeightVector,
    best: VertexSet,
    tolerance: Optional[float] = None,
) -> float:
    """
    Largest density over nonempty sets other than ``best``.

    Any other set either misses some v in ``best`` or contains some v outside
    it, so n constrained solves cover every candidate.
    """

    tolerance = tolerance if tolerance is not None else solver_tolerance(w)
    values: List[float] = []

    for v in sorted(best):

        excluded: FrozenSet[int] = frozenset({v})
        allowed: VertexSet = graph.vertices - excluded

        if not allowed:
            continue

        _, value = _search(graph, w, allowed, tolerance, excluded=excluded)
        values.append(value)

    for v in sorted(graph.vertices - best):

        forced: FrozenSet[int] = frozenset({v})

        _, value = _search(
            graph,
            w,
            graph.vertices,
            tolerance,
            forced=forced
        )
        values.append(value)

    return max(values, default=0.0)
