import csv
import os
import statistics
from logging import (
    getLogger,
    Logger,
)
from tempfile import NamedTemporaryFile
from typing import (
    Any,
    Callable,
    Dict,
    IO,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)


log: Logger = getLogger(__name__)


RESULT_FIELDS: Tuple[str, ...] = (
    'algo',
    'graph',
    'seed',
    'budget',
    'quality',
    'opt',
    'out_size',
    'total_queries',
    'single_edge_queries',
    'elapsed_ms',
)

# Columns summarised in the trailing mean and std rows
SUMMARY_FIELDS: Tuple[str, ...] = (
    'quality',
    'out_size',
    'total_queries',
    'single_edge_queries',
    'elapsed_ms',
)

AGGREGATE_SEEDS: Tuple[str, ...] = ('mean', 'std')

HISTOGRAM_FIELDS: Tuple[str, ...] = ('query_size', 'count')


def atomic_write(path: str, write: Callable[[IO[str]], None]) -> None:
    """Writes through a temporary file in the same directory, then renames."""

    directory: str = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)

    with NamedTemporaryFile(
        'w',
        dir=directory,
        prefix='.tmp-',
        suffix='.csv',
        delete=False,
        newline=''
    ) as f:
        try:
            write(f)
        except BaseException:
            f.close()
            os.unlink(f.name)
            raise

    os.replace(f.name, path)
    log.info('Wrote %s', path)


def _cell(value: Any) -> str:

    if value is None:
        return ''

    if isinstance(value, float):
        return repr(float(value))

    return str(value)


def write_rows(
    path: str,
    fields: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
) -> None:

    def write(f: IO[str]) -> None:

        writer = csv.writer(f)
        writer.writerow(fields)

        for row in rows:
            writer.writerow([_cell(row.get(field)) for field in fields])

    atomic_write(path, write)


def aggregate_rows(records: Sequence[Mapping[str, Any]]) -> List[Dict[str, Any]]:
    """Mean and sample std rows over the runs that finished."""

    finished = [r for r in records if r.get('quality') is not None]

    if not finished:
        return []

    mean: Dict[str, Any] = {
        'algo': finished[0]['algo'],
        'graph': finished[0]['graph'],
        'seed': 'mean',
        'opt': finished[0].get('opt'),
    }
    std: Dict[str, Any] = dict(mean, seed='std')

    for field in SUMMARY_FIELDS:

        values: List[float] = [
            float(r[field]) for r in finished if r.get(field) is not None
        ]

        if values:
            mean[field] = statistics.fmean(values)
            std[field] = statistics.stdev(values) if len(values) > 1 else 0.0

    return [mean, std]


def write_results(path: str, records: Sequence[Mapping[str, Any]]) -> None:
    write_rows(path, RESULT_FIELDS, list(records) + aggregate_rows(records))


def write_histogram(path: str, histogram: Mapping[int, int]) -> None:

    write_rows(
        path,
        HISTOGRAM_FIELDS,
        [
            dict(query_size=int(size), count=count)
            for size, count in sorted(
                histogram.items(),
                key=lambda item: int(item[0])
            )
        ]
    )


def read_rows(path: str) -> List[Dict[str, Optional[str]]]:
    """CSV rows as dicts with empty cells read as None."""

    with open(path, newline='') as f:
        return [
            {key: (value if value != '' else None) for key, value in row.items()}
            for row in csv.DictReader(f)
        ]


def split_results(
    rows: Iterable[Dict[str, Optional[str]]],
) -> Tuple[List[Dict[str, Optional[str]]], List[Dict[str, Optional[str]]]]:
    """Separates per-seed rows from the mean and std rows."""

    runs: List[Dict[str, Optional[str]]] = []
    aggregates: List[Dict[str, Optional[str]]] = []

    for row in rows:
        (aggregates if row['seed'] in AGGREGATE_SEEDS else runs).append(row)

    return runs, aggregates
