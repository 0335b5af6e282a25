"""One-point gradient estimator and Monte-Carlo oracles for the delta-smoothed loss.

Loss handles passed to the Monte-Carlo oracles must be vectorized: they take
an ``(N, n)`` array of points and return ``N`` loss values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, NumericError
from .geometry import sample_unit_ball_batch, sample_unit_sphere_batch

BatchLoss = Callable[[np.ndarray], np.ndarray]

FD_STEP = 1e-4
_CHUNK = 200_000


@dataclass(frozen=True)
class SmoothingParams:
    delta: float
    n: int

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise InvalidArgumentError(f"delta must lie in (0, 1), got {self.delta}")
        if self.n < 1:
            raise InvalidArgumentError("n must be >= 1")

    @property
    def scale(self) -> float:
        return self.n / self.delta


def one_point_gradient(f_value: float, u: np.ndarray, params: SmoothingParams) -> np.ndarray:
    """The estimate (n/delta) * f(x + delta*u) * u."""
    if not math.isfinite(f_value):
        raise NumericError(f"non-finite loss value {f_value!r}")
    return (params.scale * f_value) * np.asarray(u, dtype=float)


def _check_samples(samples: int):
    if samples < 1:
        raise InvalidArgumentError("samples must be >= 1")


def _chunks(samples: int):
    done = 0
    while done < samples:
        size = min(_CHUNK, samples - done)
        yield size
        done += size


def smoothed_value_mc(
    f: BatchLoss,
    x,
    params: SmoothingParams,
    samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte-Carlo estimate of E_{u ~ ball}[f(x + delta*u)].

    Returns ``(mean, standard_error)``.
    """
    _check_samples(samples)
    x = np.asarray(x, dtype=float)
    total = 0.0
    total_sq = 0.0
    for size in _chunks(samples):
        pts = x + params.delta * sample_unit_ball_batch(params.n, size, rng)
        vals = np.asarray(f(pts), dtype=float)
        total += vals.sum()
        total_sq += (vals * vals).sum()
    mean = total / samples
    if samples < 2:
        return mean, math.inf
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def estimator_mean_mc(
    f: BatchLoss,
    x,
    params: SmoothingParams,
    samples: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and per-coordinate standard error of the one-point estimator."""
    _check_samples(samples)
    x = np.asarray(x, dtype=float)
    total = np.zeros(params.n)
    total_sq = np.zeros(params.n)
    for size in _chunks(samples):
        u = sample_unit_sphere_batch(params.n, size, rng)
        vals = np.asarray(f(x + params.delta * u), dtype=float)
        g = (params.scale * vals)[:, None] * u
        total += g.sum(axis=0)
        total_sq += (g * g).sum(axis=0)
    mean = total / samples
    if samples < 2:
        return mean, np.full(params.n, np.inf)
    var = np.maximum(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, np.sqrt(var / samples)


def smoothed_gradient_fd(
    f: BatchLoss,
    x,
    params: SmoothingParams,
    samples: int,
    rng: np.random.Generator,
    step: float = FD_STEP,
) -> tuple[np.ndarray, np.ndarray]:
    """Central finite difference of ``smoothed_value_mc``, coordinate by coordinate.

    Both sides of each difference reuse one set of ball draws (common random
    numbers), otherwise the MC noise would swamp a 1e-4 step.  The returned
    standard error is that of the paired difference quotient.
    """
    _check_samples(samples)
    x = np.asarray(x, dtype=float)
    n = params.n
    grad = np.zeros(n)
    err = np.zeros(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        total = 0.0
        total_sq = 0.0
        for size in _chunks(samples):
            w = params.delta * sample_unit_ball_batch(n, size, rng)
            diff = (np.asarray(f(x + e + w)) - np.asarray(f(x - e + w))) / (2 * step)
            total += diff.sum()
            total_sq += (diff * diff).sum()
        mean = total / samples
        var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
        grad[i] = mean
        err[i] = math.sqrt(var / samples)
    return grad, err
