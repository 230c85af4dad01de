"""
Phase budgets for DS-SR. Phase t (1 <= t <= n - 1) peels S of size n - t + 1:

    T~_t = ceil((T - sum_{i<=n+1} i) / (H(n-1) (n - t)))
    T'_t = ceil(T~_t / (2 |S|)),   T'_0 = 0,   tau_t = T'_t - T'_{t-1}

with H the harmonic number. Fractions keep every ceiling exact.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    List,
    Tuple,
)

from bandits_shared.exceptions import (
    BudgetTooSmallError,
    DomainError,
)


def harmonic(k: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def schedule_overhead(n: int) -> int:
    return (n + 1) * (n + 2) // 2


@dataclass(frozen=True)
class BudgetSchedule:

    budget: int
    n: int
    harmonic: Fraction
    overhead: int

    # Indexed by phase - 1
    phase_budgets: Tuple[int, ...]
    cumulative: Tuple[int, ...]
    increments: Tuple[int, ...]

    @property
    def phases(self) -> int:
        return self.n - 1

    def tau(self, t: int) -> int:
        return self.increments[t - 1]

    def cumulative_samples(self, t: int) -> int:
        """T'_t, the fresh samples a vertex gets when its star changed."""

        return self.cumulative[t - 1]


def build_schedule(budget: int, n: int) -> BudgetSchedule:

    if n < 2:
        raise DomainError(f'DS-SR needs at least two vertices, got n={n}')

    overhead: int = schedule_overhead(n)

    if budget <= overhead:
        raise BudgetTooSmallError(budget, overhead + 1)

    h: Fraction = harmonic(n - 1)
    phase_budgets: List[int] = []
    cumulative: List[int] = []
    increments: List[int] = []
    previous: int = 0

    for t in range(1, n):

        phase_budget: int = math.ceil(Fraction(budget - overhead) / (h * (n - t)))
        samples: int = math.ceil(Fraction(phase_budget, 2 * (n - t + 1)))

        phase_budgets.append(phase_budget)
        cumulative.append(samples)
        increments.append(samples - previous)
        previous = samples

    return BudgetSchedule(
        budget=budget,
        n=n,
        harmonic=h,
        overhead=overhead,
        phase_budgets=tuple(phase_budgets),
        cumulative=tuple(cumulative),
        increments=tuple(increments),
    )
