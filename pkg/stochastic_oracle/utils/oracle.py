"""
Blurred-graph feedback: a queried edge subset F returns one noisy number,
sum over F of (w(e) + eta_e), never the individual edge weights.
"""
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import (
    Dict,
    Iterable,
    List,
)

import numpy as np

from bandits_shared.exceptions import DomainError
from graph_core.utils.graph import (
    Graph,
    VertexSet,
    WeightVector,
    edge_sum,
)


MAX_SEED: int = 2 ** 64


class NoiseKind(str, Enum):

    GAUSSIAN = 'gaussian'
    NONE = 'none'


@dataclass(frozen=True)
class NoiseModel:

    kind: NoiseKind = NoiseKind.GAUSSIAN

    # Standard deviation of each per-edge draw
    scale: float = 1.0

    def __post_init__(self):

        if self.kind == NoiseKind.GAUSSIAN and not (
            math.isfinite(self.scale) and self.scale > 0
        ):
            raise DomainError(
                f'Gaussian noise needs a finite positive scale, '
                f'got {self.scale}'
            )


NO_NOISE: NoiseModel = NoiseModel(kind=NoiseKind.NONE)


@dataclass(frozen=True)
class OracleCounters:

    total_queries: int
    single_edge_queries: int
    histogram: Dict[int, int]

    @property
    def single_edge_fraction(self) -> float:

        if not self.total_queries:
            return 0.0

        return self.single_edge_queries / self.total_queries


class SamplingOracle(object):
    """
    Seeded noisy-sum oracle over a fixed graph and hidden weight vector.

    Noise comes from a Philox stream keyed by the seed and consumed strictly
    in query order, so a replayed seed reproduces every observation and every
    counter. One oracle belongs to one run; it is not safe to share.
    """

    def __init__(
        self,
        graph: Graph,
        w: WeightVector,
        noise: NoiseModel,
        seed: int,
    ):

        if w.shape != (graph.m,):
            raise DomainError(
                f'Expected {graph.m} weights, got shape {w.shape}'
            )

        if not 0 <= seed < MAX_SEED:
            raise DomainError(f'Seed must fit in 64 bits, got {seed}')

        self.graph: Graph = graph
        self.noise: NoiseModel = noise
        self.seed: int = seed

        self._w: WeightVector = w
        self._rng: np.random.Generator = np.random.Generator(
            np.random.Philox(key=seed)
        )

        self.total_queries: int = 0
        self.single_edge_queries: int = 0
        self.histogram: Counter = Counter()

    def _edge_list(self, edge_indices: Iterable[int]) -> List[int]:

        edges: List[int] = sorted(set(int(i) for i in edge_indices))

        if not edges:
            raise DomainError('Cannot query an empty edge set')

        if edges[0] < 0 or edges[-1] >= self.graph.m:
            raise DomainError(
                f'Edge index out of range for m={self.graph.m}'
            )

        return edges

    def _count(self, size: int, times: int) -> None:

        self.total_queries += times
        self.histogram[size] += times

        if size == 1:
            self.single_edge_queries += times

    def sample_edges(self, edge_indices: Iterable[int]) -> float:
        """One noisy observation of w(F)."""

        edges: List[int] = self._edge_list(edge_indices)
        mean: float = edge_sum(self._w, edges)

        self._count(len(edges), 1)

        if self.noise.kind == NoiseKind.NONE:
            return mean

        eta: np.ndarray = self._rng.standard_normal(len(edges))

        return mean + self.noise.scale * math.fsum(eta)

    def sample_edges_many(
        self,
        edge_indices: Iterable[int],
        times: int,
    ) -> np.ndarray:
        """
        ``times`` independent observations of w(F). Draws the same stream
        values, in the same order, as ``times`` calls to sample_edges.
        """

        if times < 0:
            raise DomainError(f'Cannot take {times} samples')

        edges: List[int] = self._edge_list(edge_indices)
        mean: float = edge_sum(self._w, edges)

        if times == 0:
            return np.zeros(0)

        self._count(len(edges), times)

        if self.noise.kind == NoiseKind.NONE:
            return np.full(times, mean)

        eta: np.ndarray = self._rng.standard_normal((times, len(edges)))

        return np.array(
            [mean + self.noise.scale * math.fsum(row) for row in eta]
        )

    def sample_vertex_star(self, s: VertexSet, v: int) -> float:
        """One noisy observation of the weighted degree of v inside G[S]."""

        if v not in s:
            raise DomainError(f'Vertex {v} is not in the set')

        star: List[int] = self.graph.star_edges(v, s)

        if not star:
            raise DomainError(f'Vertex {v} has no edges inside the set')

        return self.sample_edges(star)

    def snapshot(self) -> OracleCounters:

        return OracleCounters(
            total_queries=self.total_queries,
            single_edge_queries=self.single_edge_queries,
            histogram=dict(sorted(self.histogram.items())),
        )

    def __repr__(self) -> str:
        return (
            f'SamplingOracle(graph={self.graph.name!r}, '
            f'noise={self.noise.kind.value}, seed={self.seed}, '
            f'queries={self.total_queries})'
        )


def make_oracle(
    graph: Graph,
    w: WeightVector,
    noise: NoiseModel,
    seed: int,
) -> SamplingOracle:
    return SamplingOracle(graph, w, noise, seed)
