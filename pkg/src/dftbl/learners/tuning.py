"""Parameter choices that realize each regret guarantee."""

from __future__ import annotations

import math

from ..errors import InvalidArgumentError
from ..geometry import FeasibleSet
from .dftbl import DftblConfig

DELTA_HEADROOM = 0.9


def _clamp_delta(delta: float, r: float) -> float:
    return min(delta, DELTA_HEADROOM * r, DELTA_HEADROOM)


def _clamp_block(K: float, T: int) -> int:
    return int(min(max(round(K), 1), T))


def tune_convex(n, T, d, r, R, G=None, M=None, c: float = 1.0) -> DftblConfig:
    """K = n sqrt(T), eta = 1/max(sqrt(T d), sqrt(n) T^{3/4}), delta = c sqrt(n) T^{-1/4}."""
    K = _clamp_block(n * math.sqrt(T), T)
    eta = 1.0 / max(math.sqrt(T * d), math.sqrt(n) * T ** 0.75)
    delta = _clamp_delta(c * math.sqrt(n) * T ** -0.25, r)
    return DftblConfig(alpha=0.0, eta=eta, K=K, delta=delta,
                       feasible_set=FeasibleSet.ball(n, R), T=T)


def _log_horizon(T: int) -> float:
    if T < 3:
        raise InvalidArgumentError("log-factor tunings need T >= 3")
    return math.log(T)


def tune_strongly_convex(n, T, alpha, r, R, G=None, M=None, c: float = 1.0) -> DftblConfig:
    """K = (nT)^{2/3} ln^{-2/3} T and delta = c n^{2/3} T^{-1/3} ln^{1/3} T; no delay input."""
    if alpha <= 0:
        raise InvalidArgumentError("alpha must be positive")
    L = _log_horizon(T)
    K = _clamp_block((n * T) ** (2 / 3) * L ** (-2 / 3), T)
    delta = _clamp_delta(c * n ** (2 / 3) * T ** (-1 / 3) * L ** (1 / 3), r)
    return DftblConfig(alpha=alpha, K=K, delta=delta, feasible_set=FeasibleSet.ball(n, R), T=T)


def unconstrained_radius(G: float, alpha: float) -> float:
    """Radius 2G/alpha of the ball that must contain the unconstrained minimizer."""
    return 2.0 * G / alpha


def tune_unconstrained(n, T, alpha, G, M=None, c: float = 1.0) -> DftblConfig:
    """K = n sqrt(T/ln T), delta = c sqrt(n) T^{-1/4} ln^{1/4} T over the ball of radius 2G/alpha."""
    if alpha <= 0 or G <= 0:
        raise InvalidArgumentError("alpha and G must be positive")
    L = _log_horizon(T)
    radius = unconstrained_radius(G, alpha)
    K = _clamp_block(n * math.sqrt(T / L), T)
    delta = _clamp_delta(c * math.sqrt(n) * T ** -0.25 * L ** 0.25, radius)
    return DftblConfig(alpha=alpha, K=K, delta=delta,
                       feasible_set=FeasibleSet.ball(n, radius), T=T)


def tune_bistritz_refined(n, T, avg_delay, r: float = 1.0) -> tuple[float, float]:
    """(delta, eta) balancing the exploration and average-delay terms of the one-by-one baseline."""
    if n <= 0 or T <= 0 or avg_delay <= 0:
        raise InvalidArgumentError("inputs must be positive")
    nd = n * avg_delay
    delta = max(math.sqrt(n) * T ** -0.25, nd ** (1 / 3) * T ** (-1 / 3))
    eta = min(n ** -0.5 * T ** -0.75, nd ** (-1 / 3) * T ** (-2 / 3))
    return _clamp_delta(delta, r), eta
