import math
from logging import (
    getLogger,
    Logger,
)
from pathlib import Path
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from bandits_shared.exceptions import (
    DomainError,
    GraphFormatError,
    WeightFileError,
)


log: Logger = getLogger(__name__)


COMMENT_PREFIXES: Tuple[str, ...] = ('#', '%')

# Vertex subsets are plain frozensets of dense vertex indices
VertexSet = FrozenSet[int]

# Per-edge weights, aligned with Graph.edges
WeightVector = np.ndarray

PathLike = Union[str, Path]


class Graph(object):
    """
    Immutable undirected simple graph with dense vertex and edge indices.

    Edge ``i`` is ``edges[i] == (u, v)`` with ``u < v``; ``adjacency[v]`` lists
    ``(neighbor, edge_index)`` pairs. ``labels`` maps dense indices back to the
    identifiers used in the source file.
    """

    def __init__(
        self,
        n: int,
        edges: Sequence[Tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
        name: str = 'graph',
    ):

        self.n: int = n
        self.name: str = name
        self.labels: Tuple[str, ...] = tuple(
            labels if labels is not None else (str(v) for v in range(n))
        )

        if len(self.labels) != n:
            raise DomainError(
                f'Expected {n} vertex labels, got {len(self.labels)}'
            )

        seen: set = set()
        normalised: List[Tuple[int, int]] = []

        for u, v in edges:

            if u == v:
                raise DomainError(f'Self-loop on vertex {u}')

            u, v = min(u, v), max(u, v)

            if u < 0 or v >= n:
                raise DomainError(f'Edge ({u}, {v}) out of range for n={n}')

            if (u, v) in seen:
                raise DomainError(f'Duplicate edge ({u}, {v})')

            seen.add((u, v))
            normalised.append((u, v))

        self.edges: Tuple[Tuple[int, int], ...] = tuple(normalised)
        self.edge_index: Dict[Tuple[int, int], int] = {
            edge: i for i, edge in enumerate(self.edges)
        }

        adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(n)]

        for i, (u, v) in enumerate(self.edges):
            adjacency[u].append((v, i))
            adjacency[v].append((u, i))

        self.adjacency: Tuple[Tuple[Tuple[int, int], ...], ...] = tuple(
            tuple(neighbors) for neighbors in adjacency
        )

        self.edge_array: np.ndarray = np.array(
            self.edges,
            dtype=np.int64
        ).reshape(-1, 2)

        # Filled in by load_edge_list
        self.dropped_duplicates: int = 0
        self.dropped_self_loops: int = 0

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> VertexSet:
        return frozenset(range(self.n))

    def vertex_set(self, members: Iterable[int]) -> VertexSet:

        s: VertexSet = frozenset(int(v) for v in members)

        for v in s:
            if not 0 <= v < self.n:
                raise DomainError(f'Vertex {v} out of range for n={self.n}')

        return s

    def neighbors_in(self, v: int, s: VertexSet) -> List[int]:
        return [u for u, _ in self.adjacency[v] if u in s]

    def star_edges(self, v: int, s: VertexSet) -> List[int]:
        """Ascending indices of E_S(v), the edges joining v to S."""

        return sorted(i for u, i in self.adjacency[v] if u in s)

    def indicator(self, edge_indices: Iterable[int]) -> np.ndarray:

        chi: np.ndarray = np.zeros(self.m)
        chi[list(edge_indices)] = 1.0

        return chi

    def __repr__(self) -> str:
        return f'Graph(name={self.name!r}, n={self.n}, m={self.m})'


def weight_vector(graph: Graph, values: Iterable[float]) -> WeightVector:
    """Validated read-only copy of ``values`` as a weight vector for graph."""

    w: np.ndarray = np.array(list(values), dtype=np.float64)

    if w.shape != (graph.m,):
        raise DomainError(
            f'Weight vector has {w.size} entries, graph has {graph.m} edges'
        )

    if not np.all(np.isfinite(w)):
        raise DomainError('Weights must be finite')

    if np.any(w < 0):
        raise DomainError('Weights must be nonnegative')

    w.setflags(write=False)

    return w


def unit_weights(graph: Graph) -> WeightVector:
    return weight_vector(graph, np.ones(graph.m))


def _data_lines(path: PathLike) -> Iterable[Tuple[int, List[str]]]:

    with open(path, 'r') as f:

        for line_number, line in enumerate(f, start=1):

            stripped: str = line.strip()

            if not stripped or stripped.startswith(COMMENT_PREFIXES):
                continue

            yield line_number, stripped.split()


def load_edge_list(path: PathLike, name: Optional[str] = None) -> Graph:
    """
    Reads a whitespace-separated edge list ("u v" or "u v w" per line).

    Vertex tokens are arbitrary strings, re-indexed in order of first
    appearance. Self-loop lines are dropped without registering their vertex,
    and repeated edges (in either orientation) keep their first occurrence.
    """

    index_of: Dict[str, int] = {}
    labels: List[str] = []
    edges: List[Tuple[int, int]] = []
    seen: set = set()
    duplicates: int = 0
    self_loops: int = 0

    for line_number, tokens in _data_lines(path):

        if len(tokens) < 2:
            raise GraphFormatError(
                f'expected at least two vertex tokens, got {len(tokens)}',
                line_number
            )

        a, b = tokens[0], tokens[1]

        if a == b:
            self_loops += 1
            continue

        for token in (a, b):
            if token not in index_of:
                index_of[token] = len(labels)
                labels.append(token)

        u, v = index_of[a], index_of[b]
        key: Tuple[int, int] = (min(u, v), max(u, v))

        if key in seen:
            duplicates += 1
            continue

        seen.add(key)
        edges.append(key)

    graph: Graph = Graph(
        n=len(labels),
        edges=edges,
        labels=labels,
        name=name or Path(path).stem
    )
    graph.dropped_duplicates = duplicates
    graph.dropped_self_loops = self_loops

    if duplicates or self_loops:
        log.warning(
            f'Dropped {duplicates} duplicate edges and {self_loops} '
            f'self-loops while loading {path}'
        )

    return graph


def write_edge_list(graph: Graph, path: PathLike) -> None:
    """Canonical serialisation: one edge per line in edge-index order."""

    with open(path, 'w') as f:
        for u, v in graph.edges:
            f.write(f'{graph.labels[u]} {graph.labels[v]}\n')


def load_weights(graph: Graph, path: PathLike) -> WeightVector:
    """Reads a "u v w" weight file that covers every edge exactly once."""

    index_of: Dict[str, int] = {
        label: v for v, label in enumerate(graph.labels)
    }
    values: List[Optional[float]] = [None] * graph.m

    for line_number, tokens in _data_lines(path):

        if len(tokens) != 3:
            raise WeightFileError(
                f'expected "u v w", got {len(tokens)} tokens',
                line_number
            )

        a, b, raw = tokens

        try:
            u, v = index_of[a], index_of[b]
        except KeyError as e:
            raise WeightFileError(f'unknown vertex {e}', line_number)

        i: Optional[int] = graph.edge_index.get((min(u, v), max(u, v)))

        if i is None:
            raise WeightFileError(f'no edge {a} {b} in graph', line_number)

        if values[i] is not None:
            raise WeightFileError(f'edge {a} {b} given twice', line_number)

        try:
            value: float = float(raw)
        except ValueError:
            raise WeightFileError(f'weight "{raw}" is not a number', line_number)

        if not math.isfinite(value) or value < 0:
            raise WeightFileError(
                f'weight {raw} must be finite and nonnegative',
                line_number
            )

        values[i] = value

    missing: List[int] = [i for i, value in enumerate(values) if value is None]

    if missing:
        u, v = graph.edges[missing[0]]
        raise WeightFileError(
            f'{len(missing)} edges have no weight, first is '
            f'{graph.labels[u]} {graph.labels[v]}'
        )

    return weight_vector(graph, values)


def write_weights(graph: Graph, w: WeightVector, path: PathLike) -> None:

    with open(path, 'w') as f:
        for (u, v), value in zip(graph.edges, w):
            f.write(f'{graph.labels[u]} {graph.labels[v]} {float(value)!r}\n')


def induced_edges(graph: Graph, s: VertexSet) -> List[int]:
    """Ascending indices of E(S), the edges with both endpoints in S."""

    return [i for i, (u, v) in enumerate(graph.edges) if u in s and v in s]


def edge_sum(w: WeightVector, edge_indices: Iterable[int]) -> float:
    """Correctly rounded sum of w over the given edges."""

    return math.fsum(w[i] for i in sorted(edge_indices))


def density(graph: Graph, w: WeightVector, s: VertexSet) -> float:
    """Degree density f_w(S) = w(E(S)) / |S|."""

    if not s:
        raise DomainError('Density of the empty set is undefined')

    return edge_sum(w, induced_edges(graph, s)) / len(s)


def degree_in(graph: Graph, w: WeightVector, s: VertexSet, v: int) -> float:
    """Weighted degree of v inside G[S]."""

    if v not in s:
        raise DomainError(f'Vertex {v} is not in the set')

    return edge_sum(w, graph.star_edges(v, s))


def max_degree(graph: Graph) -> int:

    if graph.n < 1:
        raise DomainError('Graph has no vertices')

    return max(len(neighbors) for neighbors in graph.adjacency)
