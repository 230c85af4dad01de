import time

import numpy as np
from django.test import SimpleTestCase
from hypothesis import (
    given,
    settings as hypothesis_settings,
    strategies as st,
)

from bandits_shared.exceptions import DomainError
from bandits_shared.testing import (
    complete_graph,
    karate,
    lollipop,
    random_graph,
    random_weights,
    star_graph,
)
from graph_core.utils.graph import (
    Graph,
    density,
    unit_weights,
    weight_vector,
)
from offline_solvers.utils.brute_force import (
    brute_force_densest,
    brute_force_second_best,
)
from offline_solvers.utils.exact import (
    exact_densest,
    second_best_density,
    solver_tolerance,
)
from offline_solvers.utils.peeling import greedy_peeling


def _random_instance(rng: np.random.Generator, max_n: int = 12):

    n: int = int(rng.integers(1, max_n + 1))
    graph: Graph = random_graph(rng, n, p=float(rng.uniform(0.2, 0.9)))

    return graph, random_weights(rng, graph, 0.0, 100.0)


class ExactDensestTests(SimpleTestCase):

    def test_clique_is_densest(self):

        graph: Graph = complete_graph(4)
        result = exact_densest(graph, unit_weights(graph))

        self.assertEqual(result.vertices, graph.vertices)
        self.assertAlmostEqual(result.density, 1.5)

    def test_lollipop(self):

        graph, w = lollipop()
        result = exact_densest(graph, w)

        self.assertEqual(result.vertices, frozenset({0, 1, 2}))
        self.assertAlmostEqual(result.density, 1.0)

    def test_all_zero_weights_are_flagged(self):

        graph: Graph = complete_graph(3)
        result = exact_densest(graph, weight_vector(graph, [0.0, 0.0, 0.0]))

        self.assertTrue(result.all_zero)
        self.assertEqual(result.vertices, frozenset({0}))
        self.assertEqual(result.density, 0.0)

    def test_ties_go_to_smallest_then_lexicographic(self):

        # Two disjoint triangles plus a bridge of weight zero
        graph: Graph = Graph(
            6,
            [(3, 4), (3, 5), (4, 5), (0, 1), (0, 2), (1, 2), (2, 3)]
        )
        w = weight_vector(graph, [1, 1, 1, 1, 1, 1, 0])

        self.assertEqual(
            exact_densest(graph, w).vertices,
            frozenset({0, 1, 2})
        )
        self.assertEqual(
            brute_force_densest(graph, w).vertices,
            frozenset({0, 1, 2})
        )

    def test_matches_brute_force_on_random_instances(self):

        rng = np.random.default_rng(20240601)
        started: float = time.monotonic()

        for _ in range(500):

            graph, w = _random_instance(rng)
            exact = exact_densest(graph, w)
            brute = brute_force_densest(graph, w)

            self.assertAlmostEqual(exact.density, brute.density, delta=1e-9)
            self.assertAlmostEqual(
                density(graph, w, exact.vertices),
                exact.density,
                delta=1e-12
            )

            # Half-approximation of greedy peeling on the same instances
            self.assertGreaterEqual(
                greedy_peeling(graph, w).density,
                brute.density / 2 - 1e-12
            )

        self.assertLess(time.monotonic() - started, 30.0)

    def test_integer_weights_agree_on_the_set(self):

        rng = np.random.default_rng(7)

        for _ in range(100):

            graph: Graph = random_graph(rng, int(rng.integers(2, 10)))
            w = random_weights(rng, graph, 0, 3, integer=True)

            self.assertEqual(
                exact_densest(graph, w).vertices,
                brute_force_densest(graph, w).vertices
            )

    def test_scaling_weights_scales_the_optimum(self):

        rng = np.random.default_rng(11)

        for _ in range(50):

            graph, w = _random_instance(rng, max_n=10)
            base = exact_densest(graph, w)
            scaled = exact_densest(graph, weight_vector(graph, w * 3.5))

            self.assertAlmostEqual(
                scaled.density,
                base.density * 3.5,
                delta=solver_tolerance(w) * 3.5
            )

    def test_warm_start_does_not_change_the_optimum(self):

        graph: Graph = karate()
        rng = np.random.default_rng(5)
        w = random_weights(rng, graph, 1, 100)
        cold = exact_densest(graph, w, canonical=False)
        warm = exact_densest(
            graph,
            w,
            canonical=False,
            warm_start=frozenset(range(10))
        )

        self.assertAlmostEqual(cold.density, warm.density, delta=1e-9)

    def test_karate_is_stable_and_beats_greedy(self):

        graph: Graph = karate()
        rng = np.random.default_rng(99)
        w = random_weights(rng, graph, 1, 100)
        first = exact_densest(graph, w)
        second = exact_densest(graph, w)

        self.assertEqual(first, second)
        self.assertGreaterEqual(
            first.density,
            greedy_peeling(graph, w).density - 1e-12
        )


class BruteForceTests(SimpleTestCase):

    def test_single_edge(self):

        graph: Graph = Graph(2, [(0, 1)])
        result = brute_force_densest(graph, weight_vector(graph, [5.0]))

        self.assertEqual(result.vertices, frozenset({0, 1}))
        self.assertEqual(result.density, 2.5)

    def test_triangle(self):

        graph: Graph = complete_graph(3)
        result = brute_force_densest(graph, unit_weights(graph))

        self.assertEqual((result.vertices, result.density), (graph.vertices, 1.0))

    def test_lollipop(self):

        graph, w = lollipop()

        self.assertEqual(
            brute_force_densest(graph, w).vertices,
            frozenset({0, 1, 2})
        )

    def test_refuses_large_graphs(self):

        graph: Graph = complete_graph(21)

        with self.assertRaises(DomainError):
            brute_force_densest(graph, unit_weights(graph))


class GreedyPeelingTests(SimpleTestCase):

    def test_star(self):

        graph: Graph = star_graph(3)
        result = greedy_peeling(graph, unit_weights(graph))

        self.assertEqual(result.vertices, graph.vertices)
        self.assertEqual(result.density, 0.75)
        self.assertEqual(result.removal_order, (1, 2, 3))

    def test_triangle(self):

        graph: Graph = complete_graph(3)
        result = greedy_peeling(graph, unit_weights(graph))

        self.assertEqual((result.vertices, result.density), (graph.vertices, 1.0))

    def test_ties_remove_smallest_index(self):

        graph: Graph = complete_graph(4)

        self.assertEqual(
            greedy_peeling(graph, unit_weights(graph)).removal_order,
            (0, 1, 2)
        )

    def test_ties_survive_non_integer_weights(self):

        # Removing 2 leaves vertex 0 with 0.2, which 0.1 + 0.2 - 0.1 is not
        graph: Graph = Graph(5, [(0, 2), (0, 3), (1, 4)])
        result = greedy_peeling(graph, weight_vector(graph, [0.1, 0.2, 0.2]))

        self.assertEqual(result.removal_order, (2, 0, 3, 1))

    @hypothesis_settings(max_examples=80, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_half_approximation(self, seed):

        rng = np.random.default_rng(seed)
        graph, w = _random_instance(rng)

        self.assertGreaterEqual(
            greedy_peeling(graph, w).density,
            brute_force_densest(graph, w).density / 2 - 1e-12
        )


class SecondBestTests(SimpleTestCase):

    def test_single_edge(self):

        graph: Graph = Graph(2, [(0, 1)])

        self.assertEqual(
            second_best_density(
                graph,
                weight_vector(graph, [5.0]),
                frozenset({0, 1})
            ),
            0.0
        )

    def test_lollipop(self):

        graph, w = lollipop()

        self.assertAlmostEqual(
            second_best_density(graph, w, frozenset({0, 1, 2})),
            0.875
        )

    def test_matches_brute_force(self):

        rng = np.random.default_rng(314)

        for _ in range(60):

            graph, w = _random_instance(rng, max_n=10)
            best = exact_densest(graph, w)
            second: float = second_best_density(graph, w, best.vertices)

            self.assertAlmostEqual(
                second,
                brute_force_second_best(graph, w, best.vertices),
                delta=solver_tolerance(w)
            )
            self.assertLessEqual(second, best.density + 1e-9)
