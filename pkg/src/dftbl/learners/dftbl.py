"""Delayed follow-the-bandit-leader with blocked updates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..delay import FeedbackEvent
from ..errors import InvalidArgumentError, ProtocolError
from ..geometry import FeasibleSet, project_ball, sample_unit_sphere, shrink
from ..smoothing import SmoothingParams
from .accum import CompensatedSum

GRADIENT_SOURCES = ("all-arrived", "complete-blocks")


@dataclass(frozen=True)
class DftblConfig:
    """Inputs of one D-FTBL run. ``alpha == 0`` selects the convex regime."""

    alpha: float
    K: int
    delta: float
    feasible_set: FeasibleSet
    T: int
    eta: float | None = None
    gradient_source: str = "all-arrived"

    def __post_init__(self):
        if self.alpha < 0:
            raise InvalidArgumentError("alpha must be nonnegative")
        if self.alpha == 0 and not (self.eta is not None and self.eta > 0):
            raise InvalidArgumentError("the convex regime (alpha = 0) needs eta > 0")
        if not 0 < self.delta < min(1.0, self.feasible_set.inner_radius):
            raise InvalidArgumentError(
                f"delta={self.delta} must lie in (0, min(1, r={self.feasible_set.inner_radius}))"
            )
        if self.T < 1 or not 1 <= self.K <= self.T:
            raise InvalidArgumentError(f"need 1 <= K <= T, got K={self.K}, T={self.T}")
        if self.gradient_source not in GRADIENT_SOURCES:
            raise InvalidArgumentError(f"unknown gradient_source {self.gradient_source!r}")

    @property
    def n(self) -> int:
        return self.feasible_set.dimension

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "eta": self.eta,
            "K": self.K,
            "delta": self.delta,
            "T": self.T,
            "set": self.feasible_set.to_dict(),
            "gradient_source": self.gradient_source,
        }


def ftrl_update(g, m, K, alpha, radius, eta=None, y1=None, y_sum=None) -> np.ndarray:
    """Exact minimizer over the ball of <g, x> plus the block-m regularizer.

    alpha == 0: (1/eta)||x - y1||^2, minimized at y1 - (eta/2) g before projection.
    alpha > 0: sum_{i<=m} (K alpha/2)||x - y_i||^2, an isotropic quadratic
    around mean(y_1..y_m); ``y_sum`` is sum_{i<=m} y_i. Projecting the
    unconstrained minimizer is exact in both cases because the objective is
    isotropic.
    """
    if alpha == 0:
        center = y1 - (0.5 * eta) * g
    else:
        center = y_sum / m - g / (m * K * alpha)
    return project_ball(center, radius)


class Dftbl:
    """Plays ``y_m + delta*u_t`` inside block m and re-solves the FTRL problem at block ends.

    Drive it with ``act(t)`` then ``receive(t, F_t)`` for t = 1..T.
    """

    def __init__(self, config: DftblConfig, rng: np.random.Generator, y1=None):
        self.config = config
        self.rng = rng
        self.params = SmoothingParams(config.delta, config.n)
        self.shrunk = shrink(config.feasible_set, config.delta)
        self.y1 = np.zeros(config.n) if y1 is None else np.asarray(y1, dtype=float).copy()
        if not self.shrunk.contains(self.y1):
            raise InvalidArgumentError("y1 must lie in the shrunk set")
        self.y = self.y1.copy()
        self.m = 1
        self.g_bar = CompensatedSum(config.n)
        self.y_sum = self.y1.copy()
        self.history = [self.y1.copy()]
        self._pending_u: dict[int, np.ndarray] = {}
        self._last_acted = 0
        self._block_ended = 0
        if config.gradient_source == "complete-blocks":
            self._block_sums: dict[int, CompensatedSum] = {}
            self._block_counts: dict[int, int] = {}
            self._complete = CompensatedSum(config.n)

    @property
    def n(self) -> int:
        return self.config.n

    def block_of(self, t: int) -> int:
        return (t - 1) // self.config.K + 1

    def block_end(self, m: int) -> int:
        return min(m * self.config.K, self.config.T)

    def block_size(self, m: int) -> int:
        return self.block_end(m) - (m - 1) * self.config.K

    def act(self, t: int):
        """Return ``(x_t, u_t)`` with a fresh direction on the unit sphere."""
        if t != self._last_acted + 1 or t > self.config.T:
            raise ProtocolError(f"act({t}) out of sequence (last round {self._last_acted})")
        if self.block_of(t) != self.m:
            raise ProtocolError(f"round {t} is outside block {self.m}; end_block not called")
        u = sample_unit_sphere(self.n, self.rng)
        x = self.y + self.config.delta * u
        self._pending_u[t] = u
        self._last_acted = t
        return x, u

    def ingest(self, events) -> None:
        scale = self.params.scale
        for e in events:
            try:
                u = self._pending_u.pop(e.query_round)
            except KeyError:
                raise ProtocolError(f"no recorded perturbation for round {e.query_round}") from None
            g = (scale * e.loss_value) * u
            if self.config.gradient_source == "all-arrived":
                self.g_bar.add(g)
            else:
                self._ingest_block(e.query_round, g)

    def _ingest_block(self, k: int, g: np.ndarray) -> None:
        b = self.block_of(k)
        acc = self._block_sums.setdefault(b, CompensatedSum(self.n))
        acc.add(g)
        self._block_counts[b] = self._block_counts.get(b, 0) + 1
        if self._block_counts[b] == self.block_size(b):
            self._complete.add(acc.value)
            del self._block_sums[b], self._block_counts[b]

    @property
    def gradient_sum(self) -> np.ndarray:
        if self.config.gradient_source == "all-arrived":
            return self.g_bar.value
        return self._complete.value

    def end_block(self) -> np.ndarray:
        """Solve for y_{m+1}; must follow the last round of block m."""
        m = self.m
        if self._last_acted != self.block_end(m) or self._block_ended == m:
            raise ProtocolError(f"end_block called mid-block (round {self._last_acted}, block {m})")
        cfg = self.config
        self.y = ftrl_update(self.gradient_sum, m, cfg.K, cfg.alpha, self.shrunk.radius,
                             eta=cfg.eta, y1=self.y1, y_sum=self.y_sum)
        self.y_sum = self.y_sum + self.y
        self.history.append(self.y.copy())
        self._block_ended = m
        self.m = m + 1
        return self.y

    def receive(self, t: int, events) -> None:
        self.ingest(events)
        if t == self.block_end(self.m):
            self.end_block()


def ftrl_objective(x: np.ndarray, g: np.ndarray, ys, alpha: float, K: int, eta=None, y1=None):
    """Block-end objective evaluated directly (without the mean collapse).

    ``x`` may be a batch of points ``(N, n)``. Used as the grid-search oracle.
    """
    x = np.atleast_2d(x)
    val = x @ g
    if alpha == 0:
        diff = x - y1
        return val + np.einsum("ij,ij->i", diff, diff) / eta
    for y in ys:
        diff = x - y
        val = val + 0.5 * K * alpha * np.einsum("ij,ij->i", diff, diff)
    return val
