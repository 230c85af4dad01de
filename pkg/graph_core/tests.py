import os

import numpy as np
from django.test import SimpleTestCase
from hypothesis import (
    given,
    settings as hypothesis_settings,
    strategies as st,
)

from bandits_shared.exceptions import (
    DomainError,
    GraphFormatError,
    WeightFileError,
)
from bandits_shared.testing import (
    complete_graph,
    karate,
    lollipop,
    path_graph,
    random_graph,
    random_weights,
    star_graph,
    write_lines,
)
from graph_core.utils.graph import (
    Graph,
    degree_in,
    density,
    induced_edges,
    load_edge_list,
    load_weights,
    max_degree,
    unit_weights,
    weight_vector,
    write_edge_list,
    write_weights,
)


class LoadEdgeListTests(SimpleTestCase):

    def test_two_edge_path(self):

        graph: Graph = load_edge_list(write_lines(['0 1', '1 2']))

        self.assertEqual(graph.n, 3)
        self.assertEqual(graph.m, 2)

    def test_duplicates_are_dropped_and_counted(self):

        with self.assertLogs('graph_core.utils.graph', level='WARNING'):
            graph: Graph = load_edge_list(write_lines(['0 1', '0 1', '1 0']))

        self.assertEqual((graph.n, graph.m), (2, 1))
        self.assertEqual(graph.dropped_duplicates, 2)

    def test_self_loops_do_not_register_vertices(self):

        with self.assertLogs('graph_core.utils.graph', level='WARNING'):
            graph: Graph = load_edge_list(write_lines(['x x', 'a b']))

        self.assertEqual(graph.labels, ('a', 'b'))
        self.assertEqual(graph.dropped_self_loops, 1)

    def test_comments_weights_and_sparse_ids(self):

        graph: Graph = load_edge_list(write_lines([
            '# SNAP style header',
            '% matrix market style comment',
            '1000 7 2.5',
            '',
            '7 42',
        ]))

        self.assertEqual(graph.labels, ('1000', '7', '42'))
        self.assertEqual(graph.edges, ((0, 1), (1, 2)))

    def test_malformed_line_reports_line_number(self):

        with self.assertRaises(GraphFormatError) as ctx:
            load_edge_list(write_lines(['0 1', '# note', 'lonely']))

        self.assertEqual(ctx.exception.line_number, 3)

    def test_karate_dimensions(self):

        graph: Graph = karate()

        self.assertEqual((graph.n, graph.m), (34, 78))
        self.assertEqual(max_degree(graph), 17)

    def test_canonical_serialisation_is_a_fixed_point(self):

        original: Graph = load_edge_list(write_lines(
            ['b a', 'c a', 'a b', 'd d', 'c d', 'e b']
        ))
        path: str = write_lines([], name='canonical.txt')

        write_edge_list(original, path)
        reloaded: Graph = load_edge_list(path)

        self.assertEqual(reloaded.labels, original.labels)
        self.assertEqual(reloaded.edges, original.edges)

        second: str = os.path.join(os.path.dirname(path), 'again.txt')
        write_edge_list(reloaded, second)

        with open(path) as a, open(second) as b:
            self.assertEqual(a.read(), b.read())


class WeightFileTests(SimpleTestCase):

    def setUp(self):
        self.graph: Graph = load_edge_list(write_lines(['a b', 'b c']))

    def test_round_trip(self):

        w = weight_vector(self.graph, [1.25, 3.0])
        path: str = write_lines([], name='weights.txt')

        write_weights(self.graph, w, path)

        np.testing.assert_array_equal(load_weights(self.graph, path), w)

    def test_orientation_does_not_matter(self):

        w = load_weights(self.graph, write_lines(['b a 1', 'c b 2']))

        np.testing.assert_array_equal(w, [1.0, 2.0])

    def test_missing_edge_is_an_error(self):

        with self.assertRaises(WeightFileError):
            load_weights(self.graph, write_lines(['a b 1']))

    def test_extra_edge_is_an_error(self):

        with self.assertRaises(WeightFileError) as ctx:
            load_weights(self.graph, write_lines(['a b 1', 'b c 2', 'a c 3']))

        self.assertEqual(ctx.exception.line_number, 3)

    def test_repeated_edge_is_an_error(self):

        with self.assertRaises(WeightFileError):
            load_weights(self.graph, write_lines(['a b 1', 'b a 2', 'b c 1']))

    def test_negative_weight_is_an_error(self):

        with self.assertRaises(WeightFileError):
            load_weights(self.graph, write_lines(['a b -1', 'b c 1']))


class GraphInvariantTests(SimpleTestCase):

    def test_rejects_self_loops_and_duplicates(self):

        with self.assertRaises(DomainError):
            Graph(2, [(1, 1)])

        with self.assertRaises(DomainError):
            Graph(2, [(0, 1), (1, 0)])

    def test_each_edge_in_two_adjacency_lists(self):

        graph: Graph = karate()
        appearances = [0] * graph.m

        for neighbors in graph.adjacency:
            for _, i in neighbors:
                appearances[i] += 1

        self.assertEqual(set(appearances), {2})

    def test_weight_vector_validation(self):

        graph: Graph = path_graph(3)

        with self.assertRaises(DomainError):
            weight_vector(graph, [1.0])

        with self.assertRaises(DomainError):
            weight_vector(graph, [1.0, float('nan')])

        with self.assertRaises(DomainError):
            weight_vector(graph, [1.0, -0.5])


class InducedEdgesTests(SimpleTestCase):

    def test_triangle(self):

        graph: Graph = complete_graph(3)

        self.assertEqual(induced_edges(graph, graph.vertices), [0, 1, 2])
        self.assertEqual(induced_edges(graph, frozenset({0})), [])

    def test_lollipop_triangle(self):

        graph, _ = lollipop()

        self.assertEqual(induced_edges(graph, frozenset({0, 1, 2})), [0, 1, 2])


class DensityTests(SimpleTestCase):

    def test_triangle_unit_weights(self):

        graph: Graph = complete_graph(3)

        self.assertEqual(
            density(graph, unit_weights(graph), graph.vertices),
            1.0
        )

    def test_weighted_path(self):

        graph: Graph = path_graph(3)
        w = weight_vector(graph, [1.0, 3.0])

        self.assertEqual(density(graph, w, frozenset({1, 2})), 1.5)
        self.assertAlmostEqual(density(graph, w, graph.vertices), 4 / 3)

    def test_empty_set_is_undefined(self):

        graph: Graph = path_graph(3)

        with self.assertRaises(DomainError):
            density(graph, unit_weights(graph), frozenset())


class DegreeTests(SimpleTestCase):

    def test_triangle(self):

        graph: Graph = complete_graph(3)

        for v in range(3):
            self.assertEqual(
                degree_in(graph, unit_weights(graph), graph.vertices, v),
                2.0
            )

    def test_isolated_vertex(self):

        graph: Graph = path_graph(3)

        self.assertEqual(
            degree_in(graph, unit_weights(graph), frozenset({0, 2}), 0),
            0.0
        )

    def test_lollipop_hub(self):

        graph, _ = lollipop()

        self.assertEqual(
            degree_in(graph, unit_weights(graph), graph.vertices, 0),
            3.0
        )

    def test_vertex_outside_set(self):

        graph: Graph = path_graph(3)

        with self.assertRaises(DomainError):
            degree_in(graph, unit_weights(graph), frozenset({0}), 2)

    def test_max_degree(self):

        self.assertEqual(max_degree(complete_graph(3)), 2)
        self.assertEqual(max_degree(star_graph(3)), 3)


class HandshakeTests(SimpleTestCase):

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
        n=st.integers(min_value=1, max_value=12),
        data=st.data(),
    )
    def test_density_matches_half_degree_sum(self, seed, n, data):

        rng = np.random.default_rng(seed)
        graph: Graph = random_graph(rng, n)
        w = random_weights(rng, graph)
        members = data.draw(
            st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1)
        )
        s = frozenset(members)

        lhs: float = density(graph, w, s) * len(s)
        rhs: float = sum(degree_in(graph, w, s, v) for v in s) / 2

        self.assertAlmostEqual(lhs, rhs, delta=1e-12 * max(1.0, abs(lhs)))

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
        data=st.data(),
    )
    def test_induced_edges_monotone(self, seed, data):

        rng = np.random.default_rng(seed)
        graph: Graph = random_graph(rng, 10)
        inner = frozenset(data.draw(st.sets(st.integers(0, 9))))
        outer = inner | frozenset(data.draw(st.sets(st.integers(0, 9))))

        self.assertLessEqual(
            set(induced_edges(graph, inner)),
            set(induced_edges(graph, outer))
        )
        self.assertEqual(
            induced_edges(graph, graph.vertices),
            list(range(graph.m))
        )
