import math

import numpy as np
from django.test import SimpleTestCase

from bandits_shared.exceptions import DomainError
from bandits_shared.testing import (
    complete_graph,
    lollipop,
    path_graph,
)
from graph_core.utils.graph import (
    Graph,
    unit_weights,
    weight_vector,
)
from stochastic_oracle.utils.oracle import (
    NO_NOISE,
    NoiseKind,
    NoiseModel,
    SamplingOracle,
    make_oracle,
)


def _gaussian_oracle(seed: int = 1) -> SamplingOracle:

    graph, w = lollipop()

    return make_oracle(graph, w, NoiseModel(), seed)


class NoiseModelTests(SimpleTestCase):

    def test_gaussian_needs_positive_scale(self):

        with self.assertRaises(DomainError):
            NoiseModel(kind=NoiseKind.GAUSSIAN, scale=0.0)

        with self.assertRaises(DomainError):
            NoiseModel(kind=NoiseKind.GAUSSIAN, scale=float('inf'))

    def test_no_noise_ignores_scale(self):
        self.assertEqual(NoiseModel(kind=NoiseKind.NONE, scale=0.0).kind, 'none')


class DeterminismTests(SimpleTestCase):

    def test_same_seed_same_sequence(self):

        first = _gaussian_oracle(42)
        second = _gaussian_oracle(42)

        for edges in ([0], [0, 1, 2], [3], [1, 3]):
            self.assertEqual(
                first.sample_edges(edges),
                second.sample_edges(edges)
            )

        self.assertEqual(first.snapshot(), second.snapshot())

    def test_different_seeds_differ(self):

        first = _gaussian_oracle(1).sample_edges_many([0, 1], 10)
        second = _gaussian_oracle(2).sample_edges_many([0, 1], 10)

        self.assertFalse(np.array_equal(first, second))

    def test_batch_draws_consume_the_stream_like_single_calls(self):

        single = _gaussian_oracle(9)
        batch = _gaussian_oracle(9)

        expected = [single.sample_edges([0, 1, 2]) for _ in range(5)]
        expected.append(single.sample_edges([3]))

        observed = list(batch.sample_edges_many([0, 1, 2], 5))
        observed.append(batch.sample_edges([3]))

        self.assertEqual(observed, expected)
        self.assertEqual(single.snapshot(), batch.snapshot())

    def test_seed_must_fit_in_64_bits(self):

        graph, w = lollipop()

        with self.assertRaises(DomainError):
            make_oracle(graph, w, NoiseModel(), 2 ** 64)

        with self.assertRaises(DomainError):
            make_oracle(graph, w, NoiseModel(), -1)


class SampleEdgesTests(SimpleTestCase):

    def test_noise_free_sum(self):

        graph: Graph = path_graph(4)
        w = weight_vector(graph, [2.0, 3.0, 7.0])
        oracle = make_oracle(graph, w, NO_NOISE, 0)

        self.assertEqual(oracle.sample_edges([0, 1]), 5.0)
        self.assertEqual(oracle.sample_edges([1, 0]), 5.0)

    def test_noise_free_is_exact_forever(self):

        graph, w = lollipop()
        oracle = make_oracle(graph, w, NO_NOISE, 3)

        np.testing.assert_array_equal(
            oracle.sample_edges_many([0, 3], 100),
            np.full(100, 1.5)
        )

    def test_gaussian_mean_converges(self):

        graph: Graph = path_graph(2)
        oracle = make_oracle(
            graph,
            weight_vector(graph, [4.0]),
            NoiseModel(scale=1.0),
            2024
        )

        draws = oracle.sample_edges_many([0], 10 ** 5)

        # Three standard errors of the mean
        self.assertAlmostEqual(float(draws.mean()), 4.0, delta=0.02)

    def test_noise_variance_grows_with_query_size(self):

        graph: Graph = complete_graph(5)
        oracle = make_oracle(graph, unit_weights(graph), NoiseModel(), 77)

        draws = oracle.sample_edges_many(range(graph.m), 20000)

        self.assertAlmostEqual(float(draws.var()), graph.m, delta=0.5)

    def test_sample_means_stay_within_four_standard_errors(self):

        graph: Graph = complete_graph(4)
        w = weight_vector(graph, [3.0, 0.5, 12.25, 7.0, 1.5, 40.0])
        edges = [0, 2, 3, 5]
        scale: float = 2.0
        draws_per_trial: int = 10 ** 4
        bound: float = 4 * math.sqrt(len(edges)) * scale / math.sqrt(
            draws_per_trial
        )

        inside: int = 0

        for seed in range(100):

            oracle = make_oracle(graph, w, NoiseModel(scale=scale), seed)
            draws = oracle.sample_edges_many(edges, draws_per_trial)

            if abs(float(draws.mean()) - 62.25) < bound:
                inside += 1

        self.assertGreaterEqual(inside, 99)

    def test_observations_are_not_clipped(self):

        graph: Graph = path_graph(2)
        oracle = make_oracle(
            graph,
            weight_vector(graph, [0.0]),
            NoiseModel(),
            5
        )

        self.assertTrue(np.any(oracle.sample_edges_many([0], 100) < 0))

    def test_empty_query_is_an_error(self):

        with self.assertRaises(DomainError):
            _gaussian_oracle().sample_edges([])

    def test_out_of_range_edge_is_an_error(self):

        with self.assertRaises(DomainError):
            _gaussian_oracle().sample_edges([4])


class AccountingTests(SimpleTestCase):

    def test_histogram_and_single_edge_counter(self):

        oracle = _gaussian_oracle()

        oracle.sample_edges([0])
        oracle.sample_edges([0, 1])
        oracle.sample_edges_many([2], 3)
        oracle.sample_edges_many([0, 1, 2], 0)

        counters = oracle.snapshot()

        self.assertEqual(counters.total_queries, 5)
        self.assertEqual(counters.single_edge_queries, 4)
        self.assertEqual(counters.histogram, {1: 4, 2: 1})
        self.assertEqual(sum(counters.histogram.values()), 5)
        self.assertEqual(counters.single_edge_fraction, 0.8)

    def test_failed_query_is_not_counted(self):

        oracle = _gaussian_oracle()

        with self.assertRaises(DomainError):
            oracle.sample_edges([])

        self.assertEqual(oracle.total_queries, 0)


class SampleVertexStarTests(SimpleTestCase):

    def test_triangle_degree(self):

        graph: Graph = complete_graph(3)
        oracle = make_oracle(graph, unit_weights(graph), NO_NOISE, 0)

        self.assertEqual(oracle.sample_vertex_star(graph.vertices, 0), 2.0)

    def test_single_edge_star_counts_as_single_edge_query(self):

        graph, w = lollipop()
        oracle = make_oracle(graph, w, NO_NOISE, 0)

        self.assertEqual(oracle.sample_vertex_star(graph.vertices, 3), 0.5)
        self.assertEqual(oracle.single_edge_queries, 1)

    def test_zero_weights(self):

        graph: Graph = complete_graph(3)
        oracle = make_oracle(
            graph,
            weight_vector(graph, [0.0, 0.0, 0.0]),
            NO_NOISE,
            0
        )

        self.assertEqual(oracle.sample_vertex_star(graph.vertices, 1), 0.0)

    def test_empty_star_is_an_error(self):

        graph: Graph = path_graph(3)
        oracle = make_oracle(graph, unit_weights(graph), NO_NOISE, 0)

        with self.assertRaises(DomainError):
            oracle.sample_vertex_star(frozenset({0, 2}), 0)

        with self.assertRaises(DomainError):
            oracle.sample_vertex_star(frozenset({0}), 1)
