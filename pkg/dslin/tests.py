import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from bandits_shared.exceptions import (
    ArmFamilyError,
    DomainError,
)
from bandits_shared.testing import (
    complete_graph,
    karate,
    random_weights,
)
from dslin.utils.arms import (
    ArmFamily,
    RankTracker,
    UniformAllocation,
    build_arm_family,
    generate_arm_family,
)
from dslin.utils.design import (
    DesignState,
    DSLinParameters,
    select_arm,
)
from dslin.utils.qp_bound import (
    BoundMode,
    qp_upper_bound,
)
from dslin.utils.runner import (
    StopMode,
    run_dslin,
)
from dslin.utils.stopping import check_stop
from graph_core.utils.graph import (
    Graph,
    density,
    max_degree,
)
from offline_solvers.utils.exact import exact_densest
from stochastic_oracle.utils.oracle import (
    NO_NOISE,
    NoiseModel,
    make_oracle,
)


def _params(**overrides) -> DSLinParameters:

    values = dict(
        epsilon=0.1,
        delta=0.1,
        lam=1.0,
        noise_scale=1.0,
        weight_bound=1.0,
        max_degree=1,
    )
    values.update(overrides)

    return DSLinParameters(**values)


def _plain_family(n_arms: int, p=None) -> ArmFamily:
    """Family with placeholder arms, for selection rules only."""

    return ArmFamily(
        arms=tuple(frozenset({0, 1, 2}) for _ in range(n_arms)),
        supports=tuple(np.array([0]) for _ in range(n_arms)),
        p=np.full(n_arms, 1 / n_arms) if p is None else np.array(p),
        basis=(),
        k=3,
    )


def _random_support(rng: np.random.Generator, m: int) -> np.ndarray:

    size: int = int(rng.integers(1, m + 1))

    return np.sort(rng.choice(m, size=size, replace=False))


def _random_psd(rng: np.random.Generator, m: int) -> np.ndarray:

    factor: np.ndarray = rng.normal(size=(m, int(rng.integers(1, m + 1))))

    return factor @ factor.T


class DesignUpdateTests(SimpleTestCase):

    def test_scalar_ridge(self):

        state = DesignState(1, 1, _params())
        state.update(0, np.array([0]), 3.0)

        np.testing.assert_array_equal(state.A, [[2.0]])
        np.testing.assert_array_equal(state.b, [3.0])
        self.assertAlmostEqual(float(state.estimate()[0]), 1.5)
        self.assertEqual((state.t, int(state.counts[0])), (1, 1))

    def test_zero_response_gives_zero_estimate(self):

        state = DesignState(4, 1, _params())

        np.testing.assert_array_equal(state.estimate(), np.zeros(4))

    def test_negative_estimates_are_clipped(self):

        state = DesignState(1, 1, _params())
        state.update(0, np.array([0]), -0.4)

        self.assertAlmostEqual(float(state.raw_estimate()[0]), -0.2)
        self.assertEqual(float(state.estimate()[0]), 0.0)

    def test_non_finite_reward_is_an_error(self):

        state = DesignState(2, 1, _params())

        with self.assertRaises(DomainError):
            state.update(0, np.array([0]), float('nan'))

    def test_inverse_tracks_fifty_updates(self):

        rng = np.random.default_rng(50)
        state = DesignState(12, 1, _params())

        for _ in range(50):
            state.update(0, _random_support(rng, 12), float(rng.normal()))

        np.testing.assert_allclose(
            state.A_inv,
            np.linalg.inv(state.A),
            atol=1e-8
        )
        self.assertAlmostEqual(
            state.logdet,
            float(np.linalg.slogdet(state.A)[1]),
            delta=1e-6
        )

    def test_linear_algebra_over_many_sequences(self):

        rng = np.random.default_rng(1000)

        for _ in range(1000):

            m: int = int(rng.integers(1, 51))
            state = DesignState(m, 1, _params(lam=float(rng.uniform(0.5, 5))))

            for _ in range(int(rng.integers(1, 30))):
                state.update(0, _random_support(rng, m), float(rng.normal()))

            self.assertLess(
                float(np.abs(state.A_inv @ state.A - np.eye(m)).max()),
                1e-8
            )
            self.assertAlmostEqual(
                state.logdet,
                float(np.linalg.slogdet(state.A)[1]),
                delta=1e-6
            )

    def test_periodic_check_keeps_inverse_in_sync(self):

        rng = np.random.default_rng(3)
        state = DesignState(6, 1, _params())
        state.A_inv[0, 0] += 1.0  # corrupt

        with self.assertLogs('dslin.utils.design', level='WARNING'):
            for _ in range(256):
                state.update(0, _random_support(rng, 6), 1.0)

        np.testing.assert_allclose(
            state.A_inv @ state.A,
            np.eye(6),
            atol=1e-8
        )

    def test_width_shrinks_as_data_arrives(self):

        rng = np.random.default_rng(8)
        state = DesignState(10, 1, _params())
        probe: np.ndarray = np.array([1, 4, 7])
        previous: float = state.width(probe)

        for _ in range(40):

            state.update(0, _random_support(rng, 10), 0.0)
            current: float = state.width(probe)

            self.assertLessEqual(current, previous + 1e-12)
            previous = current

    def test_noise_free_recovery_with_small_ridge(self):

        m: int = 5
        w: np.ndarray = np.array([1.0, 2.0, 0.0, 4.0, 3.5])
        state = DesignState(m, m, _params(lam=1e-9))

        for i in range(m):
            state.update(i, np.array([i]), float(w[i]))

        np.testing.assert_allclose(state.estimate(), w, atol=1e-3)


class ConfidenceRadiusTests(SimpleTestCase):

    def test_closed_form_at_start(self):

        state = DesignState(3, 1, _params())

        self.assertAlmostEqual(
            state.confidence_radius(),
            math.sqrt(2 * math.log(10)) + 1,
            places=9
        )
        self.assertAlmostEqual(state.confidence_radius(), 3.1460, places=4)

    def test_delta_near_one_leaves_the_ridge_term(self):

        state = DesignState(3, 1, _params(delta=1 - 1e-12, lam=4.0))

        self.assertAlmostEqual(state.confidence_radius(), 2.0, delta=1e-5)

    def test_max_degree_inflates_noise_scale(self):

        params = _params(max_degree=4, noise_scale=0.5)

        self.assertEqual(params.r_prime, 1.0)

    def test_radius_is_nondecreasing(self):

        rng = np.random.default_rng(21)
        state = DesignState(8, 1, _params(lam=2.0))
        previous: float = state.confidence_radius()

        for _ in range(100):

            state.update(0, _random_support(rng, 8), 0.0)
            current: float = state.confidence_radius()

            self.assertGreaterEqual(current, previous - 1e-12)
            previous = current

    def test_parameter_validation(self):

        with self.assertRaises(DomainError):
            _params(delta=1.0)

        with self.assertRaises(DomainError):
            _params(lam=0.0)


class QPBoundTests(SimpleTestCase):

    def test_identity(self):

        bound = qp_upper_bound(np.eye(2))

        self.assertEqual(bound.mode, BoundMode.EXACT)
        self.assertAlmostEqual(bound.value, math.sqrt(2))

    def test_correlated_pair(self):

        q = np.array([[1.0, 0.5], [0.5, 1.0]])
        exact = qp_upper_bound(q)
        relaxed = qp_upper_bound(q, exact_max_dim=0)

        self.assertAlmostEqual(exact.value, math.sqrt(3))
        self.assertEqual(relaxed.mode, BoundMode.RELAXED)
        self.assertAlmostEqual(relaxed.value, math.sqrt(3))

    def test_rejects_asymmetric_and_indefinite(self):

        with self.assertRaises(DomainError):
            qp_upper_bound(np.array([[1.0, 0.5], [0.0, 1.0]]))

        with self.assertRaises(DomainError):
            qp_upper_bound(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_enumeration_matches_all_corners(self):

        rng = np.random.default_rng(200)

        for _ in range(200):

            m: int = int(rng.integers(1, 13))
            q: np.ndarray = _random_psd(rng, m)
            corners = max(
                float(np.array(x) @ q @ np.array(x))
                for x in itertools.product((-1.0, 1.0), repeat=m)
            )
            exact = qp_upper_bound(q)
            relaxed = qp_upper_bound(q, exact_max_dim=0)

            self.assertAlmostEqual(
                exact.value,
                math.sqrt(corners),
                delta=1e-9 * max(1.0, exact.value)
            )
            self.assertGreaterEqual(relaxed.value, exact.value - 1e-9)


class StoppingRuleTests(SimpleTestCase):

    def test_huge_epsilon_stops(self):
        self.assertTrue(check_stop(2.0, 1.0, 2, 5.0, 3.0, epsilon=100.0))

    def test_noise_free_limit_stops(self):
        self.assertTrue(check_stop(2.0, 0.3, 3, 0.0, 0.4, epsilon=0.0))

    def test_fabricated_state_keeps_sampling(self):

        # LHS 2 - 0.1 = 1.9, RHS 2 + 0.2 - 0.05 = 2.15
        self.assertFalse(check_stop(2.0, 0.2, 2, 1.0, 0.4, epsilon=0.05))

    def test_exact_second_best_can_only_help(self):

        self.assertFalse(check_stop(2.0, 0.2, 2, 1.0, 0.4, 0.05))
        self.assertTrue(
            check_stop(2.0, 0.2, 2, 1.0, 0.4, 0.05, second_best=1.5)
        )


class SelectArmTests(SimpleTestCase):

    def test_first_round_takes_arm_zero(self):

        state = DesignState(1, 3, _params())

        self.assertEqual(select_arm(state, _plain_family(3)), 0)

    def test_least_played_ratio(self):

        state = DesignState(1, 3, _params())
        state.counts[:] = [2, 0, 1]

        self.assertEqual(select_arm(state, _plain_family(3)), 1)

    def test_weighted_allocation(self):

        state = DesignState(1, 2, _params())
        state.counts[:] = [1, 1]

        self.assertEqual(select_arm(state, _plain_family(2, [0.9, 0.1])), 0)

    def test_zero_probability_arms_are_never_chosen(self):

        state = DesignState(1, 3, _params())

        self.assertEqual(
            select_arm(state, _plain_family(3, [0.0, 0.5, 0.5])),
            1
        )

    def test_uniform_allocation_round_robins(self):

        graph: Graph = complete_graph(5)
        family = generate_arm_family(graph, 3, np.random.default_rng(0))
        state = DesignState(graph.m, len(family), _params())

        for t in range(1, 47):

            arm: int = select_arm(state, family)
            state.update(arm, family.supports[arm], 0.0)

            self.assertLessEqual(
                int(state.counts.max() - state.counts.min()),
                1
            )
            self.assertEqual(int(state.counts.sum()), t)


class ArmFamilyTests(SimpleTestCase):

    def test_rank_tracker(self):

        tracker = RankTracker(3)

        self.assertTrue(tracker.add(np.array([1.0, 1.0, 0.0])))
        self.assertFalse(tracker.add(np.array([2.0, 2.0, 0.0])))
        self.assertTrue(tracker.add(np.array([0.0, 1.0, 1.0])))
        self.assertFalse(tracker.add(np.zeros(3)))
        self.assertTrue(tracker.add(np.array([1.0, 0.0, 1.0])))
        self.assertEqual(tracker.rank, 3)

    def test_generated_family_spans_edges(self):

        graph: Graph = complete_graph(6)
        family = generate_arm_family(graph, 3, np.random.default_rng(4))

        self.assertEqual(len(family), graph.m)
        self.assertEqual(family.basis, tuple(range(graph.m)))
        self.assertTrue(all(len(arm) >= 3 for arm in family.arms))
        self.assertAlmostEqual(float(family.p.sum()), 1.0, delta=1e-12)

        stacked = np.stack([graph.indicator(s) for s in family.supports])

        self.assertEqual(np.linalg.matrix_rank(stacked), graph.m)

    def test_karate_family(self):

        graph: Graph = karate()
        family = generate_arm_family(
            graph,
            10,
            np.random.default_rng(7),
            allocation=UniformAllocation()
        )

        self.assertEqual(len(family), graph.m)
        self.assertTrue(all(len(arm) >= 10 for arm in family.arms))

    def test_arm_size_limits(self):

        graph: Graph = complete_graph(4)

        with self.assertRaises(ArmFamilyError):
            generate_arm_family(graph, 2, np.random.default_rng(0))

        with self.assertRaises(ArmFamilyError):
            generate_arm_family(graph, 5, np.random.default_rng(0))

    def test_build_rejects_small_or_deficient_families(self):

        graph: Graph = complete_graph(4)

        with self.assertRaises(ArmFamilyError):
            build_arm_family(graph, [frozenset({0, 1})], 3)

        with self.assertRaises(ArmFamilyError):
            build_arm_family(graph, [frozenset({0, 1, 2})], 3)

        with self.assertRaises(ArmFamilyError):
            build_arm_family(
                complete_graph(3),
                [frozenset({0, 1, 2})],
                3,
                p=[0.5]
            )


class RunDSLinTests(SimpleTestCase):

    def setUp(self):

        self.graph: Graph = complete_graph(6)
        self.family = generate_arm_family(
            self.graph,
            3,
            np.random.default_rng(11)
        )
        self.w = random_weights(
            np.random.default_rng(12),
            self.graph,
            1,
            20,
            integer=True
        )

    def test_noise_free_recovery_matches_optimum(self):

        params = _params(
            epsilon=0.01,
            lam=1e-6,
            max_degree=max_degree(self.graph)
        )
        oracle = make_oracle(self.graph, self.w, NO_NOISE, 0)
        result = run_dslin(
            self.graph,
            self.family,
            oracle,
            params,
            max_iters=self.graph.m
        )

        self.assertAlmostEqual(
            density(self.graph, self.w, result.vertices),
            exact_densest(self.graph, self.w).density,
            delta=1e-9
        )
        self.assertTrue(result.diagnostics.capped)
        self.assertEqual(result.diagnostics.iterations, self.graph.m)
        self.assertEqual(oracle.total_queries, self.graph.m)

    def test_huge_epsilon_stops_after_initialisation(self):

        oracle = make_oracle(self.graph, self.w, NoiseModel(), 1)
        result = run_dslin(
            self.graph,
            self.family,
            oracle,
            _params(epsilon=1e9, weight_bound=10.0),
            max_iters=self.graph.m + 100
        )

        self.assertTrue(result.diagnostics.stopped)
        self.assertFalse(result.diagnostics.capped)
        self.assertEqual(result.diagnostics.iterations, self.graph.m)

    def test_cap_counts_every_round_and_traces(self):

        oracle = make_oracle(self.graph, self.w, NoiseModel(), 2)
        result = run_dslin(
            self.graph,
            self.family,
            oracle,
            _params(epsilon=0.0, lam=100.0, weight_bound=100.0),
            max_iters=self.graph.m + 30,
            true_weights=self.w,
            trace_every=10
        )
        diagnostics = result.diagnostics

        self.assertTrue(diagnostics.capped)
        self.assertEqual(oracle.total_queries, self.graph.m + 30)
        self.assertEqual(
            [point.iteration for point in diagnostics.trace],
            [15, 25, 35, 45]
        )
        self.assertTrue(all(
            point.true_density is not None and point.estimation_error >= 0
            for point in diagnostics.trace
        ))
        self.assertEqual(
            diagnostics.radius_trace,
            sorted(diagnostics.radius_trace)
        )

    def test_exact_second_best_mode_runs(self):

        oracle = make_oracle(self.graph, self.w, NO_NOISE, 0)
        result = run_dslin(
            self.graph,
            self.family,
            oracle,
            _params(epsilon=0.5),
            max_iters=self.graph.m + 5,
            stop_mode=StopMode.EXACT_SECOND_BEST
        )

        self.assertTrue(result.vertices)

    def test_max_iters_below_m_is_an_error(self):

        oracle = make_oracle(self.graph, self.w, NO_NOISE, 0)

        with self.assertRaises(DomainError):
            run_dslin(
                self.graph,
                self.family,
                oracle,
                _params(),
                max_iters=self.graph.m - 1
            )
