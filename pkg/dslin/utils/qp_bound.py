"""
Upper bound on max over x in [-1, 1]^m of sqrt(x^T Q x) for PSD Q.

The quadratic form is convex, so the box maximum sits at a vertex. Small
dimensions enumerate the 2^(m-1) sign patterns with x_0 = +1 (x and -x give
the same value); larger ones use sqrt(sum |Q_ij|), which dominates every
vertex value.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from bandits_shared.exceptions import DomainError


QP_EXACT_MAX_DIM: int = 22

# Sign patterns scored per batch
PATTERN_CHUNK: int = 1 << 14

PSD_TOLERANCE: float = 1e-8


class BoundMode(str, Enum):

    EXACT = 'exact'
    RELAXED = 'relaxed'


@dataclass(frozen=True)
class QPBound:

    value: float
    mode: BoundMode


def _validate(q: np.ndarray) -> None:

    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DomainError(f'Expected a square matrix, got shape {q.shape}')

    scale: float = max(1.0, float(np.abs(q).max()) if q.size else 0.0)

    if not np.allclose(q, q.T, atol=PSD_TOLERANCE * scale, rtol=0.0):
        raise DomainError('Matrix is not symmetric')

    if q.size and float(np.linalg.eigvalsh(q).min()) < -PSD_TOLERANCE * scale:
        raise DomainError('Matrix is not positive semidefinite')


def _vertex_maximum(q: np.ndarray) -> float:

    m: int = q.shape[0]
    patterns: int = 1 << (m - 1)
    best: float = 0.0

    for start in range(0, patterns, PATTERN_CHUNK):

        codes: np.ndarray = np.arange(start, min(start + PATTERN_CHUNK, patterns))
        x: np.ndarray = np.ones((codes.size, m))

        for j in range(1, m):
            x[:, j] -= 2.0 * ((codes >> (j - 1)) & 1)

        values: np.ndarray = ((x @ q) * x).sum(axis=1)
        best = max(best, float(values.max()))

    return math.sqrt(max(best, 0.0))


def qp_upper_bound(
    q: np.ndarray,
    exact_max_dim: int = QP_EXACT_MAX_DIM,
    validate: bool = True,
) -> QPBound:

    if validate:
        _validate(q)

    if q.shape[0] == 0:
        return QPBound(value=0.0, mode=BoundMode.EXACT)

    if q.shape[0] <= exact_max_dim:
        return QPBound(value=_vertex_maximum(q), mode=BoundMode.EXACT)

    return QPBound(
        value=math.sqrt(float(np.abs(q).sum())),
        mode=BoundMode.RELAXED
    )
