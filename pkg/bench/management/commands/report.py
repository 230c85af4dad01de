import os
from argparse import ArgumentParser
from typing import (
    Dict,
    List,
)

from django.core.management.base import (
    BaseCommand,
    CommandError,
)

from bench.utils.csv_io import write_rows
from bench.utils.report import (
    REPORT_FIELDS,
    summarise_files,
)


def _format(value: object) -> str:

    if value is None:
        return '-'

    if isinstance(value, float):
        return f'{value:.6g}'

    return str(value)


class Command(BaseCommand):

    help = 'Summarises results CSVs per algorithm and graph'

    def add_arguments(self, parser: ArgumentParser) -> None:

        parser.add_argument(
            'paths',
            nargs='+',
            help='Results CSV files, or directories searched for results.csv'
        )
        parser.add_argument('--out', help='Also write the summary to this CSV')

    def handle(self, *args, **options) -> None:

        missing: List[str] = [
            path for path in options['paths'] if not os.path.exists(path)
        ]

        if missing:
            raise CommandError(
                f'No such file or directory: {", ".join(missing)}'
            )

        summaries: List[Dict[str, object]] = summarise_files(options['paths'])

        if not summaries:
            raise CommandError('No result rows found')

        self.stdout.write('\t'.join(REPORT_FIELDS))

        for summary in summaries:
            self.stdout.write(
                '\t'.join(_format(summary[field]) for field in REPORT_FIELDS)
            )

        if options['out']:
            write_rows(options['out'], REPORT_FIELDS, summaries)
            self.stdout.write(self.style.SUCCESS(f'Wrote {options["out"]}'))
