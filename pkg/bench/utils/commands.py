from argparse import ArgumentParser
from typing import (
    Any,
    Dict,
    List,
    Tuple,
)

from django.core.management.base import (
    BaseCommand,
    CommandError,
)

from bandits_shared.exceptions import (
    DensestBanditsError,
    FileFormatError,
)
from bench.models import (
    ExperimentBatch,
    RunRecord,
)
from bench.serializers import ExperimentConfigSerializer
from bench.utils.config import (
    ExperimentConfig,
    parse_config_file,
)
from bench.utils.runner import run_experiment


RUNTIME_FAILURE: int = 2

# flag -> (dest, type, help) for the per-algorithm hyperparameters
HYPERPARAMETER_FLAGS: Dict[str, Tuple[str, type, str]] = {
    '--epsilon': ('epsilon', float, 'Accuracy of the stopping rule'),
    '--delta': ('delta', float, 'Confidence level, in (0, 1)'),
    '--lambda': ('lam', float, 'Ridge regulariser'),
    '--L': ('weight_bound', float, 'Bound on the weight vector norm'),
    '--k': ('k', int, 'Minimum arm size'),
    '--family-seed': ('family_seed', int, 'Seed of the arm family draw'),
    '--max-iters': ('max_iters', int, 'Cap on main-loop rounds'),
    '--stop-mode': ('stop_mode', str, 'conservative or exact-second-best'),
    '--trace-every': ('trace_every', int, 'Rounds between trace rows'),
    '--qp-exact-max-dim': (
        'qp_exact_max_dim',
        int,
        'Largest dimension solved by vertex enumeration'
    ),
    '--budget': ('budget', int, 'Total number of oracle queries'),
    '--gamma': ('gamma', float, 'Approximation factor of the estimate'),
    '--r-epsilon': ('r_epsilon', float, 'Additive error of the estimate'),
}


class ExperimentCommand(BaseCommand):
    """
    Runs one algorithm over a batch of seeds. Subclasses set ``algorithm``
    and list the hyperparameter flags they accept in ``hyperparameters``.
    """

    algorithm: str = ''
    hyperparameters: Tuple[str, ...] = ()
    accepts_literal_lower: bool = False

    def add_arguments(self, parser: ArgumentParser) -> None:

        parser.add_argument(
            '--config',
            help='Flat key=value file; flags given here override it'
        )
        parser.add_argument('--graph', help='Edge list file')
        parser.add_argument('--weights', help='Weight file for the graph')
        parser.add_argument(
            '--weight-seed',
            dest='weight_seed',
            type=int,
            help='Seed of the knockout weights used when --weights is absent'
        )
        parser.add_argument(
            '--seed',
            '--seeds',
            dest='seeds',
            help='Seeds such as "7", "1,2,3" or "1-100"'
        )
        parser.add_argument('--out', help='Directory for the CSV outputs')
        parser.add_argument('--name', help='Batch name')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--noise', help='gaussian or none')
        parser.add_argument(
            '--R',
            dest='noise_scale',
            type=float,
            help='Noise scale'
        )

        for flag in self.hyperparameters:

            dest, kind, text = HYPERPARAMETER_FLAGS[flag]
            parser.add_argument(flag, dest=dest, type=kind, help=text)

        if self.accepts_literal_lower:
            parser.add_argument(
                '--literal-lower',
                dest='literal_lower',
                action='store_const',
                const=True,
                help='Use min(w - 1, 0) as the lower interval end'
            )

    def load_config(self, options: Dict[str, Any]) -> ExperimentConfig:

        data: Dict[str, Any] = {}

        if options.get('config'):
            try:
                data.update(parse_config_file(options['config']))
            except OSError as e:
                raise CommandError(f'Cannot read config: {e}')
            except FileFormatError as e:
                raise CommandError(
                    f'Invalid config "{options["config"]}": {e}'
                )

        fields = ExperimentConfigSerializer().fields

        data.update({
            key: value for key, value in options.items()
            if key in fields and value is not None
        })
        data['algorithm'] = self.algorithm

        serializer = ExperimentConfigSerializer(data=data)

        if not serializer.is_valid():
            raise CommandError(f'Invalid config: {dict(serializer.errors)}')

        return serializer.to_config()

    def handle(self, *args, **options) -> None:

        config: ExperimentConfig = self.load_config(options)

        try:
            batch, records = run_experiment(config)
        except FileFormatError as e:
            raise CommandError(f'Invalid input file: {e}')
        except DensestBanditsError as e:
            raise CommandError(str(e), returncode=RUNTIME_FAILURE)

        self.report(batch, records)

        if all(record.error is not None for record in records):
            raise CommandError(
                f'Every seed failed, first error: {records[0].error}',
                returncode=RUNTIME_FAILURE
            )

    def report(self, batch: ExperimentBatch, records: List[RunRecord]) -> None:

        finished: List[RunRecord] = [r for r in records if r.error is None]

        if not finished:
            return

        mean_quality: float = (
            sum(r.quality for r in finished) / len(finished)
        )

        self.stdout.write(self.style.SUCCESS(
            f'{batch.algorithm} on {batch.graph_name}: '
            f'{len(finished)}/{len(records)} seeds finished, '
            f'mean quality {mean_quality:.6g}, OPT {batch.opt:.6g}'
        ))
