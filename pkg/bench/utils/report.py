import os
import statistics
from collections import defaultdict
from typing import (
    Dict,
    Iterable,
    List,
    Optional,
    Tuple,
)

from bench.utils.csv_io import (
    read_rows,
    split_results,
)


REPORT_FIELDS: Tuple[str, ...] = (
    'algo',
    'graph',
    'runs',
    'failed',
    'opt',
    'quality_mean',
    'quality_std',
    'total_queries_mean',
    'single_edge_queries_mean',
    'single_edge_fraction',
)

Row = Dict[str, Optional[str]]


def results_files(paths: Iterable[str]) -> List[str]:
    """Expands directories to the results.csv files below them."""

    files: List[str] = []

    for path in paths:

        if not os.path.isdir(path):
            files.append(path)
            continue

        for directory, _, names in sorted(os.walk(path)):
            if 'results.csv' in names:
                files.append(os.path.join(directory, 'results.csv'))

    return files


def _mean(values: List[float]) -> Optional[float]:
    return statistics.fmean(values) if values else None


def summarise(rows: Iterable[Row]) -> List[Dict[str, object]]:
    """
    One summary per (algorithm, graph) over the per-seed rows. Runs with an
    empty quality cell failed and only count towards ``failed``.
    """

    groups: Dict[Tuple[str, str], List[Row]] = defaultdict(list)

    for row in rows:
        groups[(row['algo'], row['graph'])].append(row)

    summaries: List[Dict[str, object]] = []

    for (algo, graph), group in sorted(groups.items()):

        finished: List[Row] = [r for r in group if r['quality'] is not None]
        quality: List[float] = [float(r['quality']) for r in finished]
        total: List[float] = [
            float(r['total_queries']) for r in finished
            if r['total_queries'] is not None
        ]
        single: List[float] = [
            float(r['single_edge_queries']) for r in finished
            if r['single_edge_queries'] is not None
        ]
        opt: Optional[str] = next(
            (r['opt'] for r in group if r['opt'] is not None),
            None
        )

        summaries.append(dict(
            algo=algo,
            graph=graph,
            runs=len(group),
            failed=len(group) - len(finished),
            opt=float(opt) if opt is not None else None,
            quality_mean=_mean(quality),
            quality_std=statistics.stdev(quality) if len(quality) > 1 else 0.0,
            total_queries_mean=_mean(total),
            single_edge_queries_mean=_mean(single),
            single_edge_fraction=(
                sum(single) / sum(total) if sum(total) > 0 else None
            ),
        ))

    return summaries


def summarise_files(paths: Iterable[str]) -> List[Dict[str, object]]:

    rows: List[Row] = []

    for path in results_files(paths):
        runs, _ = split_results(read_rows(path))
        rows.extend(runs)

    return summarise(rows)
