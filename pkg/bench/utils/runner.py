import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from logging import (
    getLogger,
    Logger,
)
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Tuple,
)

from django.db import transaction

from bench.models import (
    ExperimentBatch,
    RunRecord,
)
from bench.utils.config import ExperimentConfig
from bench.utils.csv_io import (
    RESULT_FIELDS,
    write_histogram,
    write_results,
    write_rows,
)
from bench.utils.knockout import (
    default_budget,
    knockout_weights,
    seeded_generator,
)
from bench.utils.trials import (
    DSLIN_TRACE_FIELDS,
    DSSR_TRACE_FIELDS,
    BatchContext,
    TrialOutcome,
    run_trial,
)
from dslin.utils.arms import (
    ArmFamily,
    generate_arm_family,
)
from graph_core.utils.graph import (
    Graph,
    WeightVector,
    load_edge_list,
    load_weights,
)
from offline_solvers.utils.exact import exact_densest
from stochastic_oracle.utils.oracle import (
    NoiseKind,
    NoiseModel,
)


log: Logger = getLogger(__name__)


TRACE_FIELDS: Dict[str, Tuple[str, ...]] = {
    'dslin': DSLIN_TRACE_FIELDS,
    'dssr': DSSR_TRACE_FIELDS,
}

# Algorithms that query the arm family
FAMILY_ALGORITHMS: Tuple[str, ...] = ('dslin', 'naive')


def load_instance(config: ExperimentConfig) -> Tuple[Graph, WeightVector]:
    """The graph plus its weight file, or knockout weights from weight_seed."""

    graph: Graph = load_edge_list(config.graph)

    if config.weights:
        return graph, load_weights(graph, config.weights)

    return graph, knockout_weights(graph, config.weight_seed)


def _algorithm_params(
    config: ExperimentConfig,
    graph: Graph,
) -> Dict[str, Any]:

    params: Dict[str, Any] = dict(
        epsilon=config.epsilon,
        delta=config.delta,
        lam=config.lam,
        noise_scale=config.noise_scale,
        weight_bound=config.weight_bound,
        max_iters=config.max_iters,
        stop_mode=config.stop_mode,
        trace_every=config.trace_every,
        qp_exact_max_dim=config.qp_exact_max_dim,
        gamma=config.gamma,
        r_epsilon=config.r_epsilon,
        literal_lower=config.literal_lower,
        budget=config.budget,
    )

    if config.budget is None:

        if config.algorithm == 'dssr':
            params['budget'] = default_budget(graph.n)

        elif config.algorithm == 'naive':
            params['budget'] = graph.m + config.max_iters

    return params


def build_context(config: ExperimentConfig) -> BatchContext:
    """Loads the instance and computes everything shared across seeds."""

    graph, weights = load_instance(config)
    family: Optional[ArmFamily] = None

    if config.algorithm in FAMILY_ALGORITHMS:
        family = generate_arm_family(
            graph,
            config.k,
            seeded_generator(config.family_seed)
        )

    return BatchContext(
        algorithm=config.algorithm,
        graph=graph,
        weights=weights,
        opt=exact_densest(graph, weights).density,
        noise=NoiseModel(
            kind=NoiseKind(config.noise),
            scale=config.noise_scale
        ),
        params=_algorithm_params(config, graph),
        family=family,
    )


def _run_seeds(
    context: BatchContext,
    seeds: Tuple[int, ...],
    workers: int,
) -> List[TrialOutcome]:

    trial = partial(run_trial, context)

    if workers <= 1 or len(seeds) <= 1:
        return [trial(seed) for seed in seeds]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(trial, seeds))


def _run_name(outcome: TrialOutcome) -> str:
    return f'{outcome.algo}_{outcome.graph}_seed{outcome.seed}'


def write_outputs(
    config: ExperimentConfig,
    outcomes: List[TrialOutcome],
) -> str:
    """Writes every CSV of a batch; returns the path of results.csv."""

    results_path: str = os.path.join(config.out, 'results.csv')

    write_results(
        results_path,
        [
            {field: getattr(outcome, field) for field in RESULT_FIELDS}
            for outcome in outcomes
        ]
    )

    for outcome in outcomes:

        if not outcome.run_ok:
            continue

        if outcome.histogram:
            write_histogram(
                os.path.join(
                    config.out,
                    'histograms',
                    f'{_run_name(outcome)}.csv'
                ),
                outcome.histogram
            )

        if outcome.trace and outcome.algo in TRACE_FIELDS:
            write_rows(
                os.path.join(
                    config.out,
                    'traces',
                    f'{_run_name(outcome)}.csv'
                ),
                TRACE_FIELDS[outcome.algo],
                outcome.trace
            )

    return results_path


def run_experiment(
    config: ExperimentConfig,
) -> Tuple[ExperimentBatch, List[RunRecord]]:
    """
    Runs every seed of the config, stores the batch and one RunRecord per
    seed, and writes the CSV outputs. Seeds may run in worker processes; the
    database and the files are written from this process only.
    """

    context: BatchContext = build_context(config)

    log.info(
        'Running %s on %s (n=%d, m=%d) for %d seeds, OPT=%.6g',
        config.algorithm,
        context.graph.name,
        context.graph.n,
        context.graph.m,
        len(config.seeds),
        context.opt
    )

    outcomes: List[TrialOutcome] = _run_seeds(
        context,
        config.seeds,
        config.workers
    )

    with transaction.atomic():

        batch: ExperimentBatch = ExperimentBatch(
            name=config.name,
            algorithm=config.algorithm,
            graph_name=context.graph.name,
            graph_path=config.graph,
            weights_path=config.weights or '',
            config=config.to_json(),
            opt=context.opt,
        )
        batch.save()

        records: List[RunRecord] = RunRecord.objects.bulk_create([
            RunRecord(
                batch=batch,
                histogram={
                    str(size): count
                    for size, count in outcome.histogram.items()
                },
                error=outcome.error,
                **{field: getattr(outcome, field) for field in RESULT_FIELDS}
            )
            for outcome in outcomes
        ])

    write_outputs(config, outcomes)

    failed: int = sum(1 for outcome in outcomes if not outcome.run_ok)

    if failed:
        log.warning('%d of %d seeds failed', failed, len(outcomes))

    log.info('Finished batch %s', batch.id)

    return batch, records
