"""Small graphs and temporary files shared by the app test suites."""
import os
from itertools import combinations
from tempfile import (
    TemporaryDirectory,
    mkdtemp,
)
from typing import (
    Iterable,
    List,
    Tuple,
)

import networkx as nx
import numpy as np

from graph_core.utils.graph import (
    Graph,
    WeightVector,
    load_edge_list,
    weight_vector,
)


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)), name=f'K{n}')


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)], name=f'P{n}')


def star_graph(leaves: int) -> Graph:
    return Graph(
        leaves + 1,
        [(0, i) for i in range(1, leaves + 1)],
        name=f'K1,{leaves}'
    )


def lollipop() -> Tuple[Graph, WeightVector]:
    """Triangle {0, 1, 2} with unit weights plus pendant edge {0, 3} of 0.5."""

    graph: Graph = Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)], name='lollipop')

    return graph, weight_vector(graph, [1.0, 1.0, 1.0, 0.5])


def random_graph(
    rng: np.random.Generator,
    n: int,
    p: float = 0.5,
) -> Graph:

    edges: List[Tuple[int, int]] = [
        (u, v) for u, v in combinations(range(n), 2) if rng.random() < p
    ]

    return Graph(n, edges, name=f'random-{n}')


def random_weights(
    rng: np.random.Generator,
    graph: Graph,
    low: float = 0.0,
    high: float = 100.0,
    integer: bool = False,
) -> WeightVector:

    if integer:
        values = rng.integers(int(low), int(high) + 1, size=graph.m)
    else:
        values = rng.uniform(low, high, size=graph.m)

    return weight_vector(graph, values.astype(np.float64))


# Removed with everything under it when the test process exits
_TEMP_ROOT: TemporaryDirectory = TemporaryDirectory(prefix='dsb-test-')


def temp_dir() -> str:
    return mkdtemp(dir=_TEMP_ROOT.name)


def write_lines(lines: Iterable[str], name: str = 'graph.txt') -> str:

    path: str = os.path.join(temp_dir(), name)

    with open(path, 'w') as f:
        for line in lines:
            f.write(f'{line}\n')

    return path


def networkx_edge_list_file(nx_graph: nx.Graph, name: str) -> str:
    return write_lines(
        (f'{u} {v}' for u, v in nx_graph.edges()),
        name=f'{name}.txt'
    )


def karate_path() -> str:
    return networkx_edge_list_file(nx.karate_club_graph(), 'karate')


def karate() -> Graph:
    return load_edge_list(karate_path())


def lesmis_path() -> str:

    # Character names contain spaces, so relabel to integers first
    relabelled: nx.Graph = nx.convert_node_labels_to_integers(
        nx.les_miserables_graph()
    )

    return networkx_edge_list_file(relabelled, 'lesmis')


def lesmis() -> Graph:
    return load_edge_list(lesmis_path())
