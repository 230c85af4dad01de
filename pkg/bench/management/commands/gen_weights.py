import os
from argparse import ArgumentParser

from django.core.management.base import (
    BaseCommand,
    CommandError,
)

from bandits_shared.exceptions import DensestBanditsError
from bench.utils.knockout import knockout_weights
from graph_core.utils.graph import (
    Graph,
    load_edge_list,
    write_weights,
)


class Command(BaseCommand):

    help = 'Writes knockout weights for a graph to a weight file'

    def add_arguments(self, parser: ArgumentParser) -> None:

        parser.add_argument('--graph', required=True, help='Edge list file')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--out', required=True, help='Weight file to write')

    def handle(self, *args, **options) -> None:

        if options['seed'] < 0:
            raise CommandError('--seed must be non-negative')

        try:
            graph: Graph = load_edge_list(options['graph'])
        except (OSError, DensestBanditsError) as e:
            raise CommandError(f'Cannot load graph: {e}')

        w = knockout_weights(graph, options['seed'])
        directory: str = os.path.dirname(os.path.abspath(options['out']))
        os.makedirs(directory, exist_ok=True)
        write_weights(graph, w, options['out'])

        self.stdout.write(self.style.SUCCESS(
            f'Wrote {graph.m} weights for {graph.name} to {options["out"]}'
        ))
