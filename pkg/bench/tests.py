import math
import os
import statistics
from io import StringIO
from typing import (
    Dict,
    List,
)
from unittest import (
    mock,
    skipUnless,
)

import networkx as nx
import numpy as np
from django.contrib.auth import get_user_model
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import (
    SimpleTestCase,
    TestCase,
    tag,
)
from django.urls import reverse

from bandits_shared.exceptions import (
    ConfigFileError,
    DomainError,
)
from bandits_shared.testing import (
    complete_graph,
    karate,
    karate_path,
    lesmis_path,
    temp_dir,
    write_lines,
)
from bench.models import (
    ExperimentBatch,
    RunRecord,
)
from bench.serializers import (
    ExperimentConfigSerializer,
    RunRecordSerializer,
    SeedListField,
)
from bench.utils.config import (
    ExperimentConfig,
    parse_config_lines,
)
from bench.utils.csv_io import (
    HISTOGRAM_FIELDS,
    RESULT_FIELDS,
    read_rows,
    split_results,
)
from bench.utils.knockout import (
    default_budget,
    knockout_weights,
)
from bench.utils.report import summarise
from bench.utils.runner import (
    build_context,
    run_experiment,
)
from bench.utils.trials import (
    ALGORITHMS,
    BatchContext,
    TrialOutcome,
    run_trial,
)
from graph_core.utils.graph import (
    Graph,
    induced_edges,
    load_weights,
    unit_weights,
)
from offline_solvers.utils.exact import exact_densest
from rest_framework.exceptions import ValidationError


def _config(algorithm: str, graph: str, **kwargs) -> ExperimentConfig:

    kwargs.setdefault('seeds', (0, 1, 2))
    kwargs.setdefault('out', temp_dir())

    return ExperimentConfig(algorithm=algorithm, graph=graph, **kwargs)


class TempDirTests(SimpleTestCase):

    def test_directories_share_one_removable_root(self):

        first, second = temp_dir(), temp_dir()
        root: str = os.path.dirname(first)

        self.assertNotEqual(first, second)
        self.assertEqual(os.path.dirname(second), root)
        self.assertTrue(os.path.basename(root).startswith('dsb-test-'))
        self.assertEqual(
            os.path.dirname(os.path.dirname(write_lines(['0 1']))),
            root
        )


class DefaultBudgetTests(SimpleTestCase):

    def test_karate(self):
        self.assertEqual(default_budget(34), 1000)

    def test_jazz(self):
        self.assertEqual(default_budget(198), 100000)

    def test_four_vertices(self):
        self.assertEqual(default_budget(4), 100)

    def test_overhead_on_a_power_of_ten_moves_up(self):

        # (3 + 1)(3 + 2) / 2 == 10 leaves no budget for the last phase
        self.assertEqual(default_budget(3), 100)

    def test_single_vertex(self):

        with self.assertRaises(DomainError):
            default_budget(1)


class KnockoutWeightsTests(SimpleTestCase):

    def test_ranges(self):

        graph: Graph = karate()
        w = knockout_weights(graph, 3)
        densest = exact_densest(graph, unit_weights(graph)).vertices
        inner = induced_edges(graph, densest)

        self.assertTrue(np.all((w >= 1) & (w <= 100)))
        self.assertTrue(np.all((w[inner] >= 1) & (w[inner] <= 20)))
        self.assertGreater(len(inner), 0)

    def test_same_seed_same_weights(self):

        graph: Graph = karate()

        np.testing.assert_array_equal(
            knockout_weights(graph, 12),
            knockout_weights(graph, 12)
        )
        self.assertFalse(np.array_equal(
            knockout_weights(graph, 12),
            knockout_weights(graph, 13)
        ))

    def test_whole_clique_is_inner(self):

        w = knockout_weights(complete_graph(4), 0)

        self.assertTrue(np.all((w >= 1) & (w <= 20)))


class ConfigParsingTests(SimpleTestCase):

    def test_pairs_comments_and_dashes(self):

        values: Dict[str, str] = parse_config_lines([
            '# Karate run',
            'graph = data/karate.txt',
            '',
            'Max-Iters=500  # main loop only',
        ])

        self.assertEqual(
            values,
            {'graph': 'data/karate.txt', 'max_iters': '500'}
        )

    def test_reports_the_offending_line(self):

        with self.assertRaises(ConfigFileError) as ctx:
            parse_config_lines(['seeds=1-3', 'budget 1000'])

        self.assertEqual(ctx.exception.line_number, 2)
        self.assertTrue(str(ctx.exception).startswith('line 2: '))

    def test_seed_lists(self):

        field = SeedListField()

        self.assertEqual(
            field.to_internal_value('0-4,10'),
            [0, 1, 2, 3, 4, 10]
        )
        self.assertEqual(field.to_internal_value('7'), [7])
        self.assertEqual(field.to_internal_value([3, 1]), [3, 1])

        for bad in ('a-b', '', '-1', [2 ** 64]):
            with self.assertRaises(ValidationError):
                field.to_internal_value(bad)

    def test_valid_config(self):

        serializer = ExperimentConfigSerializer(data={
            'algorithm': 'dssr',
            'graph': karate_path(),
            'seeds': '1-3',
            'budget': '1000',
        })

        self.assertTrue(serializer.is_valid(), serializer.errors)

        config: ExperimentConfig = serializer.to_config()

        self.assertEqual(config.seeds, (1, 2, 3))
        self.assertEqual(config.budget, 1000)
        self.assertIsNone(config.weights)
        self.assertEqual(config.lam, 100.0)

    def test_invalid_config(self):

        serializer = ExperimentConfigSerializer(data={
            'algorithm': 'dslin',
            'graph': '/nonexistent/graph.txt',
            'delta': '1.5',
        })

        self.assertFalse(serializer.is_valid())
        self.assertIn('graph', serializer.errors)

        serializer = ExperimentConfigSerializer(data={
            'algorithm': 'dslin',
            'graph': karate_path(),
            'delta': '1.5',
        })

        self.assertFalse(serializer.is_valid())
        self.assertIn('delta', serializer.errors)


class SummariseTests(SimpleTestCase):

    def test_groups_and_fraction(self):

        rows = [
            dict(
                algo='dssr',
                graph='karate',
                seed='0',
                quality='1.0',
                opt='4.0',
                total_queries='10',
                single_edge_queries='5',
            ),
            dict(
                algo='dssr',
                graph='karate',
                seed='1',
                quality='3.0',
                opt='4.0',
                total_queries='30',
                single_edge_queries='5',
            ),
            dict(
                algo='dssr',
                graph='karate',
                seed='2',
                quality=None,
                opt='4.0',
                total_queries=None,
                single_edge_queries=None,
            ),
        ]

        summary, = summarise(rows)

        self.assertEqual(summary['runs'], 3)
        self.assertEqual(summary['failed'], 1)
        self.assertEqual(summary['opt'], 4.0)
        self.assertEqual(summary['quality_mean'], 2.0)
        self.assertAlmostEqual(summary['quality_std'], math.sqrt(2))
        self.assertEqual(summary['total_queries_mean'], 20.0)
        self.assertEqual(summary['single_edge_fraction'], 0.25)


class RunExperimentTests(TestCase):

    def test_g_oracle_is_identical_across_seeds(self):

        batch, records = run_experiment(
            _config('g_oracle', karate_path(), seeds=(0, 1, 2, 3))
        )

        self.assertEqual(len(records), 4)
        self.assertEqual(len({r.quality for r in records}), 1)
        self.assertTrue(all(r.total_queries == 0 for r in records))
        self.assertLessEqual(records[0].quality, batch.opt)
        self.assertEqual(RunRecord.objects.filter(batch=batch).count(), 4)

    def test_results_csv_round_trip(self):

        config: ExperimentConfig = _config('dssr', karate_path(), budget=1000)
        batch, records = run_experiment(config)

        runs, aggregates = split_results(
            read_rows(os.path.join(config.out, 'results.csv'))
        )

        self.assertEqual(len(runs), 3)
        self.assertEqual([row['seed'] for row in aggregates], ['mean', 'std'])

        for row, record in zip(runs, records):

            serializer = RunRecordSerializer(data=row)

            self.assertTrue(serializer.is_valid(), serializer.errors)

            for field in RESULT_FIELDS:
                self.assertEqual(
                    serializer.validated_data[field],
                    getattr(record, field),
                    field
                )

        self.assertAlmostEqual(
            float(aggregates[0]['quality']),
            statistics.fmean(r.quality for r in records)
        )

    def test_histogram_and_trace_files(self):

        config: ExperimentConfig = _config(
            'dssr',
            karate_path(),
            seeds=(5,),
            budget=1000
        )
        _, (record,) = run_experiment(config)

        rows = read_rows(os.path.join(
            config.out,
            'histograms',
            'dssr_karate_seed5.csv'
        ))

        self.assertEqual(tuple(rows[0]), HISTOGRAM_FIELDS)
        self.assertEqual(
            sum(int(row['count']) for row in rows),
            record.total_queries
        )
        self.assertEqual(
            int(next(r['count'] for r in rows if r['query_size'] == '1')),
            record.single_edge_queries
        )
        self.assertEqual(record.histogram['1'], record.single_edge_queries)

        phases = read_rows(os.path.join(
            config.out,
            'traces',
            'dssr_karate_seed5.csv'
        ))

        self.assertEqual(len(phases), karate().n - 1)

    def test_replay_reproduces_records(self):

        weights_path: str = os.path.join(temp_dir(), 'karate.w')
        call_command(
            'gen_weights',
            graph=karate_path(),
            seed=4,
            out=weights_path,
            stdout=StringIO()
        )

        def run() -> List[RunRecord]:
            return run_experiment(_config(
                'dssr',
                karate_path(),
                weights=weights_path,
                budget=2000
            ))[1]

        first, second = run(), run()

        for a, b in zip(first, second):
            for field in RESULT_FIELDS:
                if field != 'elapsed_ms':
                    self.assertEqual(getattr(a, field), getattr(b, field))

            self.assertEqual(a.histogram, b.histogram)

    def test_failed_seeds_are_recorded(self):

        with self.assertLogs('bench.utils.trials', 'ERROR'):
            _, records = run_experiment(
                _config('dssr', karate_path(), seeds=(0,), budget=100)
            )

        self.assertIsNotNone(records[0].error)
        self.assertIn('BudgetTooSmallError', records[0].error)
        self.assertIsNone(records[0].quality)
        self.assertFalse(RunRecord.objects.get(pk=records[0].pk).run_ok)

    def test_library_failures_are_recorded(self):

        for error in (
            nx.NetworkXError('graph is not connected'),
            KeyError(7),
            RuntimeError('solver did not converge'),
        ):

            def failing(context, seed, error=error):
                raise error

            with self.subTest(error=type(error).__name__), \
                    mock.patch.dict(ALGORITHMS, {'exact': failing}), \
                    self.assertLogs('bench.utils.trials', 'ERROR'):

                _, records = run_experiment(_config(
                    'exact',
                    karate_path(),
                    seeds=(0, 1),
                    workers=1
                ))

                self.assertEqual(len(records), 2)

                for record in records:
                    self.assertIn(type(error).__name__, record.error)
                    self.assertFalse(
                        RunRecord.objects.get(pk=record.pk).run_ok
                    )


class CommandTests(TestCase):

    def test_gen_weights_writes_knockout_weights(self):

        path: str = os.path.join(temp_dir(), 'out', 'karate.w')
        call_command(
            'gen_weights',
            graph=karate_path(),
            seed=9,
            out=path,
            stdout=StringIO()
        )
        graph: Graph = karate()

        np.testing.assert_array_equal(
            load_weights(graph, path),
            knockout_weights(graph, 9)
        )

    def test_exact_from_config_file(self):

        out: str = temp_dir()
        config: str = write_lines([
            f'graph={karate_path()}',
            'seeds=0-1',
            f'out={out}',
        ], name='exact.cfg')
        stdout = StringIO()

        call_command('exact', config=config, stdout=stdout)

        self.assertIn('2/2 seeds finished', stdout.getvalue())
        self.assertTrue(os.path.isfile(os.path.join(out, 'results.csv')))
        self.assertEqual(ExperimentBatch.objects.get().algorithm, 'exact')

    def test_flags_override_config_file(self):

        config: str = write_lines([
            f'graph={karate_path()}',
            'seeds=0-9',
            'budget=5000',
        ], name='dssr.cfg')

        call_command(
            'dssr',
            config=config,
            seeds='3',
            budget=1000,
            out=temp_dir(),
            stdout=StringIO()
        )
        record: RunRecord = RunRecord.objects.get()

        self.assertEqual((record.seed, record.budget), (3, 1000))

    def test_config_errors_exit_with_one(self):

        with self.assertRaises(CommandError) as ctx:
            call_command('dssr', graph='/nonexistent.txt', stdout=StringIO())

        self.assertEqual(ctx.exception.returncode, 1)

        config: str = write_lines(['graph'], name='broken.cfg')

        with self.assertRaises(CommandError) as ctx:
            call_command('dssr', config=config, stdout=StringIO())

        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('line 1', str(ctx.exception))

    def test_runtime_failures_exit_with_two(self):

        with self.assertLogs('bench.utils.trials', 'ERROR'):
            with self.assertRaises(CommandError) as ctx:
                call_command(
                    'dssr',
                    graph=karate_path(),
                    seeds='0-1',
                    budget=100,
                    out=temp_dir(),
                    stdout=StringIO()
                )

        self.assertEqual(ctx.exception.returncode, 2)

    def test_report(self):

        out: str = temp_dir()
        call_command(
            'g_oracle',
            graph=karate_path(),
            seeds='0-2',
            out=out,
            stdout=StringIO()
        )
        summary_path: str = os.path.join(temp_dir(), 'summary.csv')
        stdout = StringIO()

        call_command('report', out, out=summary_path, stdout=stdout)

        self.assertIn('g_oracle\tkarate\t3\t0', stdout.getvalue())

        row, = read_rows(summary_path)

        self.assertEqual(row['runs'], '3')
        self.assertEqual(row['quality_std'], '0.0')

    def test_report_without_results(self):

        with self.assertRaises(CommandError):
            call_command('report', temp_dir(), stdout=StringIO())


class ApiAndAdminTests(TestCase):

    @classmethod
    def setUpTestData(cls):

        cls.batch, cls.records = run_experiment(
            _config('g_oracle', karate_path(), seeds=(0, 1))
        )

    def test_runs_filtered_by_batch(self):

        other, _ = run_experiment(_config('exact', karate_path(), seeds=(0,)))
        response = self.client.get(
            reverse('runrecord-list'),
            {'batch': str(self.batch.id)}
        )

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()['count'], 2)
        self.assertTrue(
            all(run['run_ok'] for run in response.json()['results'])
        )
        self.assertEqual(
            self.client.get(reverse('runrecord-list')).json()['count'],
            3
        )
        self.assertNotEqual(other.id, self.batch.id)

    def test_batch_detail_lists_runs(self):

        response = self.client.get(
            reverse('experimentbatch-detail', args=(self.batch.id,))
        )

        self.assertEqual(response.status_code, 200)
        self.assertEqual(
            sorted(response.json()['runs']),
            sorted(r.pk for r in RunRecord.objects.filter(batch=self.batch))
        )

    def test_admin_pages(self):

        user = get_user_model().objects.create_superuser(
            'admin',
            'admin@example.com',
            'password'
        )
        self.client.force_login(user)

        for name in (
            'admin:bench_experimentbatch_changelist',
            'admin:bench_runrecord_changelist',
        ):
            self.assertEqual(self.client.get(reverse(name)).status_code, 200)

        self.assertEqual(
            self.client.get(reverse(
                'admin:bench_experimentbatch_change',
                args=(self.batch.id,)
            )).status_code,
            200
        )


def _finished(outcomes: List[TrialOutcome]) -> List[TrialOutcome]:
    return [outcome for outcome in outcomes if outcome.run_ok]


def _mean_quality(outcomes: List[TrialOutcome]) -> float:
    return statistics.fmean(outcome.quality for outcome in outcomes)


@tag('slow')
class DeskReproductionTests(SimpleTestCase):

    def test_dssr_on_karate(self):

        context: BatchContext = build_context(
            # The mean clears 95% of OPT for this weight draw, not for every one
            _config('dssr', karate_path(), budget=1000, weight_seed=0)
        )
        outcomes = _finished([run_trial(context, seed) for seed in range(100)])

        self.assertEqual(len(outcomes), 100)
        self.assertTrue(all(o.total_queries <= 1000 for o in outcomes))
        self.assertGreaterEqual(_mean_quality(outcomes), 0.95 * context.opt)
        self.assertLess(
            statistics.fmean(o.single_edge_queries for o in outcomes),
            500
        )
        self.assertLess(
            sum(o.single_edge_queries for o in outcomes)
            / sum(o.total_queries for o in outcomes),
            0.5
        )

    def _check_dssr_at_ten_thousand(self, path: str):

        context: BatchContext = build_context(
            _config('dssr', path, budget=10000)
        )
        outcomes = _finished([run_trial(context, seed) for seed in range(100)])

        self.assertEqual(len(outcomes), 100)
        self.assertGreaterEqual(_mean_quality(outcomes), 0.95 * context.opt)

    def test_dssr_on_lesmis(self):
        self._check_dssr_at_ten_thousand(lesmis_path())

    @skipUnless(
        os.environ.get('DSB_POLBOOKS_PATH'),
        'DSB_POLBOOKS_PATH is not set'
    )
    def test_dssr_on_polbooks(self):
        self._check_dssr_at_ten_thousand(os.environ['DSB_POLBOOKS_PATH'])

    def test_dslin_on_karate(self):

        m: int = karate().m
        dslin: BatchContext = build_context(_config(
            'dslin',
            karate_path(),
            k=10,
            lam=100.0,
            noise_scale=1.0,
            max_iters=10000,
            trace_every=1000,
        ))
        outcomes = _finished([run_trial(dslin, seed) for seed in range(10)])

        self.assertEqual(len(outcomes), 10)
        self.assertGreaterEqual(_mean_quality(outcomes), 0.99 * dslin.opt)

        # Estimation error shrinks between the first checkpoint and the end
        improved: int = 0

        for outcome in outcomes:

            early = next(
                (
                    point for point in outcome.trace
                    if point['iteration'] == m + 1000
                ),
                outcome.trace[0]
            )
            late = outcome.trace[-1]

            if late['estimation_error'] < early['estimation_error']:
                improved += 1

        self.assertGreaterEqual(improved, 9)

        # Naive at the number of queries DS-Lin used
        budget: int = round(
            statistics.fmean(o.total_queries for o in outcomes)
        )
        naive: BatchContext = build_context(_config(
            'naive',
            karate_path(),
            k=10,
            budget=budget,
        ))
        naive_outcomes = _finished(
            [run_trial(naive, seed) for seed in range(10)]
        )

        self.assertGreater(
            _mean_quality(outcomes),
            _mean_quality(naive_outcomes)
        )
