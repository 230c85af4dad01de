import math
import statistics
from fractions import Fraction
from typing import List

import numpy as np
from django.test import (
    SimpleTestCase,
    tag,
)

from bandits_shared.exceptions import (
    BudgetTooSmallError,
    DomainError,
)
from bandits_shared.testing import (
    complete_graph,
    karate,
    path_graph,
    random_graph,
    random_weights,
)
from bench.utils.knockout import (
    default_budget,
    knockout_weights,
)
from dssr.utils.peeling import (
    PeelingState,
    run_dssr,
    sample_phase_vertex,
)
from dssr.utils.schedule import build_schedule
from graph_core.utils.graph import (
    Graph,
    density,
    degree_in,
    unit_weights,
    weight_vector,
)
from offline_solvers.utils.brute_force import brute_force_densest
from offline_solvers.utils.peeling import greedy_peeling
from stochastic_oracle.utils.oracle import (
    NO_NOISE,
    NoiseModel,
    make_oracle,
)


class BuildScheduleTests(SimpleTestCase):

    def test_four_vertices(self):

        schedule = build_schedule(100, 4)

        self.assertEqual(schedule.overhead, 15)
        self.assertEqual(schedule.harmonic, Fraction(11, 6))
        self.assertEqual(schedule.phase_budgets, (16, 24, 47))
        self.assertEqual(schedule.cumulative, (2, 4, 12))
        self.assertEqual(schedule.increments, (2, 2, 8))

    def test_budget_at_overhead_is_rejected(self):

        with self.assertRaises(BudgetTooSmallError) as ctx:
            build_schedule(15, 4)

        self.assertEqual(ctx.exception.minimum_budget, 16)

    def test_karate_budget_is_feasible(self):

        schedule = build_schedule(1000, 34)

        self.assertEqual(schedule.overhead, 630)
        self.assertEqual(len(schedule.increments), 33)
        self.assertTrue(all(tau >= 0 for tau in schedule.increments))
        self.assertGreater(schedule.tau(1), 0)
        self.assertEqual(sum(schedule.increments), schedule.cumulative[-1])

    def test_single_vertex_is_rejected(self):

        with self.assertRaises(DomainError):
            build_schedule(100, 1)


class SamplePhaseVertexTests(SimpleTestCase):

    def setUp(self):

        self.graph: Graph = Graph(4, [(0, 1), (2, 3), (1, 2)])
        self.w = weight_vector(self.graph, [3.5, 1.0, 2.0])
        self.schedule = build_schedule(100, 4)

    def _state(self, noise=NO_NOISE):
        return PeelingState(self.graph, make_oracle(self.graph, self.w, noise, 0))

    def test_changed_star_follows_the_last_removal(self):

        state = self._state()

        self.assertFalse(any(state.changed_star(v) for v in range(4)))

        state.remove(3)
        self.assertEqual(
            [state.changed_star(v) for v in range(3)],
            [False, False, True]
        )

        state.remove(2)
        self.assertEqual(
            [state.changed_star(v) for v in range(2)],
            [False, True]
        )

    def test_isolated_vertex_skips_the_oracle(self):

        state = self._state()
        state.remove(1)

        sample_phase_vertex(state, self.schedule, 2, 0)

        self.assertEqual(state.degree_estimates[0], 0.0)
        self.assertEqual(state.oracle.total_queries, 0)

    def test_unchanged_star_merges_by_count(self):

        state = self._state()
        state.remove(3)
        state.degree_estimates[0] = 2.0
        state.sample_counts[0] = 3

        sample_phase_vertex(state, self.schedule, 2, 0)

        self.assertAlmostEqual(state.degree_estimates[0], 2.6)
        self.assertEqual(state.sample_counts[0], 5)
        self.assertEqual(state.oracle.total_queries, 2)

    def test_changed_star_is_resampled_from_scratch(self):

        state = self._state()
        state.remove(3)
        state.degree_estimates[2] = 100.0
        state.sample_counts[2] = 7

        sample_phase_vertex(state, self.schedule, 2, 2)

        self.assertEqual(state.degree_estimates[2], 2.0)
        self.assertEqual(state.sample_counts[2], 4)
        self.assertEqual(state.oracle.histogram, {1: 4})

    def test_first_phase_uses_fresh_samples(self):

        state = self._state()

        for v in range(4):
            sample_phase_vertex(state, self.schedule, 1, v)

        for v in range(4):
            self.assertEqual(
                state.degree_estimates[v],
                degree_in(self.graph, self.w, self.graph.vertices, v)
            )

        self.assertEqual(state.oracle.total_queries, 8)


class RunDSSRTests(SimpleTestCase):

    def test_zero_noise_matches_greedy_peeling(self):

        rng = np.random.default_rng(100)

        for _ in range(100):

            n: int = int(rng.integers(2, 31))
            graph: Graph = random_graph(rng, n, p=float(rng.uniform(0.1, 0.8)))
            w = random_weights(rng, graph, 0, 100)
            budget: int = 10 * (n + 1) * (n + 2)
            oracle = make_oracle(graph, w, NO_NOISE, 0)

            result = run_dssr(graph, oracle, budget)
            greedy = greedy_peeling(graph, w)

            self.assertEqual(
                tuple(result.diagnostics.removal_order),
                greedy.removal_order
            )
            self.assertEqual(result.vertices, greedy.vertices)
            self.assertEqual(density(graph, w, result.vertices), greedy.density)
            self.assertLessEqual(oracle.total_queries, budget)

    def test_noise_free_quality_is_exact(self):

        graph: Graph = complete_graph(5)
        w = unit_weights(graph)
        result = run_dssr(graph, make_oracle(graph, w, NO_NOISE, 0), 200)

        self.assertEqual(result.diagnostics.quality_trace, [2.0, 1.5, 1.0, 0.5])
        self.assertEqual(result.vertices, graph.vertices)

    def test_phase_records(self):

        graph: Graph = path_graph(5)
        oracle = make_oracle(graph, unit_weights(graph), NoiseModel(), 3)
        result = run_dssr(graph, oracle, 500)
        phases = result.diagnostics.phases

        self.assertEqual([record.survivors for record in phases], [5, 4, 3, 2])
        self.assertEqual(phases[-1].cumulative_queries, oracle.total_queries)
        self.assertEqual(
            [record.cumulative_queries for record in phases],
            sorted(record.cumulative_queries for record in phases)
        )
        self.assertEqual(len(set(result.diagnostics.removal_order)), 4)

    def test_budget_is_never_exceeded(self):

        rng = np.random.default_rng(4)

        for seed in range(50):

            n: int = int(rng.integers(2, 16))
            graph: Graph = random_graph(rng, n)
            w = random_weights(rng, graph)
            budget: int = int(rng.integers((n + 1) * (n + 2) // 2 + 1, 5000))
            oracle = make_oracle(graph, w, NoiseModel(), seed)

            result = run_dssr(graph, oracle, budget)

            self.assertLessEqual(oracle.total_queries, budget)
            self.assertEqual(result.diagnostics.queries, oracle.total_queries)

    def test_same_seed_same_output(self):

        graph: Graph = karate()
        w = random_weights(np.random.default_rng(1), graph, 1, 100)

        first = run_dssr(graph, make_oracle(graph, w, NoiseModel(), 9), 1000)
        second = run_dssr(graph, make_oracle(graph, w, NoiseModel(), 9), 1000)

        self.assertEqual(first.vertices, second.vertices)
        self.assertEqual(
            first.diagnostics.removal_order,
            second.diagnostics.removal_order
        )

    @tag('slow')
    def test_half_approximation_at_desk_scale(self):

        rng = np.random.default_rng(11)

        for _ in range(50):

            n: int = int(rng.integers(2, 13))
            graph: Graph = random_graph(rng, n)
            w = random_weights(rng, graph, 1, 100)
            opt: float = brute_force_densest(graph, w).density
            budget: int = 10 * default_budget(n)

            good: int = 0

            for seed in range(20):

                oracle = make_oracle(graph, w, NoiseModel(), seed)
                result = run_dssr(graph, oracle, budget)

                self.assertLessEqual(oracle.total_queries, budget)

                if density(graph, w, result.vertices) >= 0.45 * opt:
                    good += 1

            self.assertGreaterEqual(good, 19)

    @tag('slow')
    def test_quality_does_not_fall_as_the_budget_grows(self):

        graph: Graph = karate()
        w = knockout_weights(graph, 0)
        means: List[float] = []
        errors: List[float] = []

        for budget in (10 ** 3, 10 ** 4, 10 ** 5):

            qualities: List[float] = []

            for seed in range(50):
                oracle = make_oracle(graph, w, NoiseModel(), seed)
                result = run_dssr(graph, oracle, budget)
                qualities.append(density(graph, w, result.vertices))

            means.append(statistics.fmean(qualities))
            errors.append(statistics.stdev(qualities) / math.sqrt(50))

        for i in range(len(means) - 1):
            self.assertGreaterEqual(
                means[i + 1],
                means[i] - math.hypot(errors[i], errors[i + 1])
            )
