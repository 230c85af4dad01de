from dataclasses import (
    asdict,
    dataclass,
)
from typing import (
    Any,
    Dict,
    Iterable,
    Optional,
    Tuple,
)

from bandits_shared.exceptions import ConfigFileError


def parse_config_lines(lines: Iterable[str]) -> Dict[str, str]:
    """
    Flat ``key=value`` pairs. Blank lines and text after ``#`` are ignored;
    keys are case-insensitive and dashes read as underscores.
    """

    values: Dict[str, str] = {}

    for number, raw in enumerate(lines, start=1):

        line: str = raw.split('#', 1)[0].strip()

        if not line:
            continue

        key, sep, value = line.partition('=')

        if not sep or not key.strip():
            raise ConfigFileError(
                f'expected key=value, got "{raw.strip()}"',
                line_number=number
            )

        values[key.strip().lower().replace('-', '_')] = value.strip()

    return values


def parse_config_file(path: str) -> Dict[str, str]:

    with open(path) as f:
        return parse_config_lines(f)


@dataclass(frozen=True)
class ExperimentConfig:

    algorithm: str
    graph: str
    seeds: Tuple[int, ...]
    out: str
    name: str = ''
    weights: Optional[str] = None
    weight_seed: int = 0
    noise: str = 'gaussian'
    noise_scale: float = 1.0
    workers: int = 1

    # DS-SR, Naive
    budget: Optional[int] = None

    # DS-Lin
    epsilon: float = 1.0
    delta: float = 0.05
    lam: float = 100.0
    weight_bound: Optional[float] = None
    max_iters: int = 10000
    stop_mode: str = 'conservative'
    trace_every: int = 1
    qp_exact_max_dim: int = 22

    # DS-Lin, Naive
    k: int = 10
    family_seed: int = 0

    # R-Oracle
    gamma: float = 0.9
    r_epsilon: float = 0.9
    literal_lower: bool = False

    def to_json(self) -> Dict[str, Any]:
        return dict(asdict(self), seeds=list(self.seeds))
