import numpy as np
from django.test import SimpleTestCase

from bandits_shared.exceptions import (
    DegenerateIntervalError,
    DomainError,
)
from bandits_shared.testing import (
    complete_graph,
    lollipop,
    random_weights,
)
from baselines.utils.naive import run_naive
from baselines.utils.r_oracle import (
    oracle_intervals,
    run_r_oracle,
    sample_count,
)
from dslin.utils.arms import (
    build_arm_family,
    generate_arm_family,
)
from graph_core.utils.graph import (
    Graph,
    unit_weights,
    weight_vector,
)
from offline_solvers.utils.exact import exact_densest
from stochastic_oracle.utils.oracle import (
    NO_NOISE,
    NoiseModel,
    make_oracle,
)


class NaiveTests(SimpleTestCase):

    def test_single_arm_on_triangle(self):

        graph: Graph = complete_graph(3)
        w = unit_weights(graph)
        family = build_arm_family(graph, [graph.vertices], 3)
        result = run_naive(
            graph,
            family,
            make_oracle(graph, w, NO_NOISE, 0),
            10,
            np.random.default_rng(0)
        )

        np.testing.assert_allclose(result.averages, [1.0, 1.0, 1.0])
        self.assertEqual(result.vertices, graph.vertices)
        np.testing.assert_array_equal(result.visits, [10, 10, 10])

    def test_zero_budget_is_rejected(self):

        graph: Graph = complete_graph(3)
        family = build_arm_family(graph, [graph.vertices], 3)

        with self.assertRaises(DomainError):
            run_naive(
                graph,
                family,
                make_oracle(graph, unit_weights(graph), NO_NOISE, 0),
                0,
                np.random.default_rng(0)
            )

    def test_running_means_match_batch_recomputation(self):

        graph: Graph = complete_graph(6)
        w = random_weights(np.random.default_rng(2), graph, 1, 10)
        family = generate_arm_family(graph, 3, np.random.default_rng(3))
        budget: int = 300

        result = run_naive(
            graph,
            family,
            make_oracle(graph, w, NoiseModel(), 4),
            budget,
            np.random.default_rng(5)
        )

        # Replay the same arm draws and observations
        arms = np.random.default_rng(5).integers(0, len(family), size=budget)
        replay = make_oracle(graph, w, NoiseModel(), 4)
        shares = [[] for _ in range(graph.m)]

        for arm in arms:

            support = family.supports[int(arm)]
            share = replay.sample_edges(support) / support.size

            for e in support:
                shares[e].append(share)

        np.testing.assert_array_equal(
            result.visits,
            [len(values) for values in shares]
        )
        np.testing.assert_allclose(
            result.averages,
            [np.mean(values) if values else 0.0 for values in shares],
            atol=1e-10
        )


class ROracleTests(SimpleTestCase):

    def test_sample_count_closed_form(self):
        self.assertEqual(sample_count(3, 2.0, 0.9, 0.9, 2.0), 8)

    def test_triangle_sampling(self):

        graph: Graph = complete_graph(3)
        w = weight_vector(graph, [3.0, 3.0, 3.0])
        lower, upper = oracle_intervals(w)
        oracle = make_oracle(graph, w, NoiseModel(), 1)

        result = run_r_oracle(graph, oracle, lower, upper)

        np.testing.assert_array_equal(result.samples, [8, 8, 8])
        self.assertEqual(result.total_samples, 24)
        self.assertEqual(oracle.single_edge_queries, 24)
        self.assertEqual(result.vertices, graph.vertices)

    def test_degenerate_intervals_skip_sampling(self):

        graph, w = lollipop()
        oracle = make_oracle(graph, w, NoiseModel(), 0)

        result = run_r_oracle(graph, oracle, w.copy(), w.copy())

        self.assertEqual(oracle.total_queries, 0)
        self.assertEqual(result.vertices, exact_densest(graph, w).vertices)

    def test_intervals_only_shrink(self):

        rng = np.random.default_rng(6)
        graph: Graph = complete_graph(7)
        w = random_weights(rng, graph, 1, 100)
        lower, upper = oracle_intervals(w)

        result = run_r_oracle(
            graph,
            make_oracle(graph, w, NoiseModel(), 6),
            lower,
            upper
        )

        self.assertTrue(np.all(result.lower <= result.upper))
        self.assertTrue(np.all(lower <= result.lower))
        self.assertTrue(np.all(result.upper <= upper))

    def test_literal_lower_bounds_are_degenerate(self):

        graph: Graph = complete_graph(3)
        w = weight_vector(graph, [5.0, 6.0, 7.0])
        lower, upper = oracle_intervals(w, literal_lower=True)

        np.testing.assert_array_equal(lower, [0.0, 0.0, 0.0])

        with self.assertRaises(DegenerateIntervalError):
            run_r_oracle(
                graph,
                make_oracle(graph, w, NoiseModel(), 0),
                lower,
                upper
            )

    def test_parameter_validation(self):

        graph, w = lollipop()
        lower, upper = oracle_intervals(w)

        with self.assertRaises(DomainError):
            run_r_oracle(
                graph,
                make_oracle(graph, w, NoiseModel(), 0),
                lower,
                upper,
                gamma=1.0
            )
