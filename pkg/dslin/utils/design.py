"""
Regularised least-squares state for DS-Lin.

A = lambda I + sum of chi chi^T over queried arms and b = sum of chi r, so the
estimate is A^-1 b. The inverse and log det(A) are maintained by rank-one
updates; an indicator chi touches only the edges of one arm, which keeps each
update at O(m |E(S)|) plus the O(m^2) outer product.
"""
import math
from dataclasses import dataclass
from logging import (
    getLogger,
    Logger,
)
from typing import Sequence

import numpy as np

from bandits_shared.exceptions import (
    DomainError,
    InternalConsistencyError,
)
from dslin.utils.arms import ArmFamily


log: Logger = getLogger(__name__)


# Updates between comparisons of A_inv against a fresh inverse
SYNC_INTERVAL: int = 256

INVERSE_TOLERANCE: float = 1e-8
LOGDET_TOLERANCE: float = 1e-6


@dataclass(frozen=True)
class DSLinParameters:

    epsilon: float
    delta: float
    lam: float

    # Per-edge sub-Gaussian scale R
    noise_scale: float

    # Bound L on the Euclidean norm of w
    weight_bound: float

    max_degree: int = 1

    def __post_init__(self):

        if not 0 < self.delta < 1:
            raise DomainError(f'delta must lie in (0, 1), got {self.delta}')

        if not self.lam > 0:
            raise DomainError(f'lambda must be positive, got {self.lam}')

        if self.epsilon < 0:
            raise DomainError(f'epsilon must be >= 0, got {self.epsilon}')

        if not (self.noise_scale > 0 and self.weight_bound >= 0):
            raise DomainError('Noise scale must be positive and L >= 0')

    @property
    def r_prime(self) -> float:
        return math.sqrt(self.max_degree) * self.noise_scale


class DesignState(object):

    def __init__(self, m: int, n_arms: int, params: DSLinParameters):

        self.m: int = m
        self.params: DSLinParameters = params

        self.t: int = 0
        self.A: np.ndarray = params.lam * np.eye(m)
        self.A_inv: np.ndarray = np.eye(m) / params.lam
        self.logdet: float = m * math.log(params.lam)
        self.b: np.ndarray = np.zeros(m)
        self.counts: np.ndarray = np.zeros(n_arms, dtype=np.int64)

        self._since_sync: int = 0

    def update(self, arm: int, support: np.ndarray, reward: float) -> None:
        """Adds chi chi^T for the arm's edge set and b += chi r."""

        if not math.isfinite(reward):
            raise DomainError(f'Reward must be finite, got {reward}')

        idx: np.ndarray = np.asarray(support, dtype=np.int64)

        # u = A_inv chi and q = chi^T A_inv chi for a 0/1 indicator
        u: np.ndarray = self.A_inv[:, idx].sum(axis=1)
        q: float = float(u[idx].sum())

        self.logdet += math.log1p(q)
        self.A_inv -= np.outer(u, u) / (1.0 + q)
        self.A[np.ix_(idx, idx)] += 1.0
        self.b[idx] += reward

        self.counts[arm] += 1
        self.t += 1
        self._since_sync += 1

        if self._since_sync >= SYNC_INTERVAL:
            self.check_consistency()

    def resync(self) -> None:
        """Recomputes A_inv and log det(A) from A."""

        self.A_inv = np.linalg.inv(self.A)
        self.A_inv = (self.A_inv + self.A_inv.T) / 2

        sign, logdet = np.linalg.slogdet(self.A)

        if sign <= 0:
            raise InternalConsistencyError(
                'Design matrix is not positive definite'
            )

        self.logdet = float(logdet)
        self._since_sync = 0

    def check_consistency(self) -> None:

        self._since_sync = 0

        identity_error: float = float(
            np.abs(self.A_inv @ self.A - np.eye(self.m)).max()
        )
        _, logdet = np.linalg.slogdet(self.A)
        logdet_error: float = abs(float(logdet) - self.logdet)

        if (
            identity_error > INVERSE_TOLERANCE
            or logdet_error > LOGDET_TOLERANCE
        ):
            log.warning(
                'Re-synchronising design inverse at t=%d '
                '(|A_inv A - I| = %.3g, log det drift = %.3g)',
                self.t,
                identity_error,
                logdet_error
            )
            self.resync()

    def raw_estimate(self) -> np.ndarray:
        return self.A_inv @ self.b

    def estimate(self) -> np.ndarray:
        """Least-squares weights with negative entries clipped to zero."""

        return np.maximum(self.raw_estimate(), 0.0)

    def width(self, support: Sequence[int]) -> float:
        """||chi||_{A^-1} for the indicator of the given edges."""

        idx: np.ndarray = np.asarray(support, dtype=np.int64)

        if not idx.size:
            return 0.0

        return math.sqrt(max(float(self.A_inv[np.ix_(idx, idx)].sum()), 0.0))

    def confidence_radius(self) -> float:
        """
        C_t = R' sqrt(2 log(det(A)^(1/2) / (lambda^(m/2) delta))) + sqrt(lambda) L
        """

        params: DSLinParameters = self.params
        growth: float = 0.5 * self.logdet - 0.5 * self.m * math.log(params.lam)

        if growth < -LOGDET_TOLERANCE * max(1.0, abs(self.logdet)):
            raise InternalConsistencyError(
                f'log det(A) = {self.logdet} is below m log(lambda)'
            )

        log_term: float = max(growth, 0.0) - math.log(params.delta)

        return (
            params.r_prime * math.sqrt(2.0 * log_term)
            + math.sqrt(params.lam) * params.weight_bound
        )


def select_arm(state: DesignState, family: ArmFamily) -> int:
    """argmin of T_t(S) / p(S) over the support of p; lowest index on ties."""

    support: np.ndarray = family.support

    if not support.size:
        raise DomainError('Allocation has an empty support')

    ratios: np.ndarray = state.counts[support] / family.p[support]

    return int(support[int(np.argmin(ratios))])
