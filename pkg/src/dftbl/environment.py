"""Oblivious loss sequences with exact comparators.

Per-round parameters are generated in fixed-size chunks from a seeded stream
keyed by ``(seed, chunk index)``, so any round can be regenerated from the
seed without materializing the whole horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .geometry import FeasibleSet, project_ball, sample_unit_ball_batch, sample_unit_sphere_batch

CHUNK = 4096
KINDS = ("linear", "strongly-convex-quadratic", "sc-smooth-unconstrained")
_ALIASES = {"quadratic": "strongly-convex-quadratic", "unconstrained": "sc-smooth-unconstrained"}


@dataclass(frozen=True)
class LossConstants:
    G: float  # Lipschitz constant over the action set
    M: float  # bound on |f_t| over the action set
    alpha: float = 0.0
    beta: float = 0.0
    R: float = 1.0  # radius of the action set
    G_origin: float | None = None  # Lipschitz constant at 0 (unconstrained regime)


@dataclass
class LossSequence:
    kind: str
    T: int
    n: int
    seed: int
    constants: LossConstants
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self._cache: dict[int, np.ndarray] = {}
        self._bias_dir = None
        if self.kind == "linear" and self.params.get("bias", 0.0) > 0:
            rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(0,)))
            self._bias_dir = sample_unit_sphere_batch(self.n, 1, rng)[0]

    # -- parameters -----------------------------------------------------
    @property
    def feasible_set(self) -> FeasibleSet:
        return FeasibleSet.ball(self.n, self.constants.R)

    @property
    def unconstrained(self) -> bool:
        return self.kind == "sc-smooth-unconstrained"

    def chunk(self, idx: int) -> np.ndarray:
        """Rows ``idx*CHUNK .. idx*CHUNK + CHUNK - 1`` (0-based rounds) of the parameter table."""
        arr = self._cache.get(idx)
        if arr is not None:
            return arr
        rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(1, idx)))
        if self.kind == "linear":
            s = sample_unit_sphere_batch(self.n, CHUNK, rng)
            if self._bias_dir is not None:
                s = s + self.params["bias"] * self._bias_dir
                s /= np.linalg.norm(s, axis=1)[:, None]
            arr = self.constants.G * s
        else:
            center = np.asarray(self.params.get("center", np.zeros(self.n)), dtype=float)
            spread = float(self.params.get("spread", 0.0))
            arr = center + spread * sample_unit_ball_batch(self.n, CHUNK, rng)
        if len(self._cache) >= 4:
            self._cache.pop(next(iter(self._cache)))
        self._cache[idx] = arr
        return arr

    def params_at(self, t: int) -> np.ndarray:
        self._check_round(t)
        return self.chunk((t - 1) // CHUNK)[(t - 1) % CHUNK]

    def _check_round(self, t: int) -> None:
        if not 1 <= t <= self.T:
            raise InvalidArgumentError(f"round {t} outside 1..{self.T}")

    def table(self, start: int = 1, stop: int | None = None) -> np.ndarray:
        """Parameters of rounds ``start..stop`` (inclusive) as an array."""
        stop = self.T if stop is None else stop
        rows = []
        for idx in range((start - 1) // CHUNK, (stop - 1) // CHUNK + 1):
            lo = max(start - 1 - idx * CHUNK, 0)
            hi = min(stop - idx * CHUNK, CHUNK)
            rows.append(self.chunk(idx)[lo:hi])
        return np.concatenate(rows, axis=0)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, t: int, x) -> float:
        p = self.params_at(t)
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return float(p @ x)
        d = x - p
        return float(0.5 * self.constants.alpha * (d @ d))

    def values_at(self, x) -> np.ndarray:
        """f_t(x) for every round t at one fixed point."""
        x = np.asarray(x, dtype=float)
        out = np.empty(self.T)
        for lo in range(0, self.T, CHUNK):
            hi = min(lo + CHUNK, self.T)
            p = self.chunk(lo // CHUNK)[: hi - lo]
            if self.kind == "linear":
                out[lo:hi] = p @ x
            else:
                d = x - p
                out[lo:hi] = 0.5 * self.constants.alpha * np.einsum("ij,ij->i", d, d)
        return out

    def loss_sum(self, x) -> float:
        return math.fsum(self.values_at(x))

    def param_sum(self) -> np.ndarray:
        total = np.zeros(self.n)
        for lo in range(0, self.T, CHUNK):
            hi = min(lo + CHUNK, self.T)
            total += self.chunk(lo // CHUNK)[: hi - lo].sum(axis=0)
        return total

    def grad_sum(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return self.param_sum()
        return self.constants.alpha * (self.T * x - self.param_sum())

    def minimizer(self, t: int) -> np.ndarray:
        """Per-function minimizer over the action set (quadratic kinds only)."""
        if self.kind == "linear":
            raise InvalidArgumentError("linear losses have no interior minimizer")
        return project_ball(self.params_at(t), self.constants.R)


def generate_losses(kind: str, T: int, n: int, seed: int, **constants) -> LossSequence:
    """Build an oblivious loss sequence.

    linear: ``f_t(x) = <a_t, x>``, ``||a_t|| = G`` on the ball of radius ``R``;
      optional ``bias`` in [0, inf) tilts the directions toward a fixed unit
      vector.
    strongly-convex-quadratic: ``f_t(x) = (alpha/2)||x - c_t||^2`` with
      ``c_t = center + spread * v_t``, ``v_t`` uniform in the unit ball,
      ``||center|| + spread <= R``.
    sc-smooth-unconstrained: the same quadratics with centers within
      ``G/alpha`` of the origin (so every f_t is G-Lipschitz at 0); actions
      live in the ball of radius ``2G/alpha``.
    """
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise InvalidArgumentError(f"unknown loss kind {kind!r}")
    if T < 1 or n < 1:
        raise InvalidArgumentError("T and n must be >= 1")
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise InvalidArgumentError("seed must be a nonnegative integer")
    given_G = constants.get("G")
    given_M = constants.get("M")
    params: dict = {}

    if kind == "linear":
        G = float(constants.get("G", 1.0))
        R = float(constants.get("R", 1.0))
        bias = float(constants.get("bias", 0.0))
        if G <= 0 or R <= 0 or bias < 0:
            raise InvalidArgumentError("need G > 0, R > 0, bias >= 0")
        M = G * R
        if given_M is not None and given_M < M:
            raise InvalidArgumentError(f"M={given_M} is below G*R={M}")
        params["bias"] = bias
        consts = LossConstants(G=G, M=float(given_M or M), R=R)
        return LossSequence(kind, T, n, int(seed), consts, params)

    alpha = float(constants.get("alpha", 1.0))
    if alpha <= 0:
        raise InvalidArgumentError("quadratic losses need alpha > 0")
    center = np.asarray(constants.get("center", np.zeros(n)), dtype=float)
    if center.shape != (n,):
        raise InvalidArgumentError(f"center must have dimension {n}")
    if kind == "strongly-convex-quadratic":
        R = float(constants.get("R", 1.0))
        if R <= 0:
            raise InvalidArgumentError("R must be positive")
        center_bound = R
        G, M = 2 * alpha * R, 2 * alpha * R * R
        G_origin = None
    else:
        if given_G is None or given_G <= 0:
            raise InvalidArgumentError("the unconstrained family needs G > 0 (Lipschitz at 0)")
        G_origin = float(given_G)
        center_bound = G_origin / alpha
        R = 2 * G_origin / alpha
    spread = float(constants.get("spread", center_bound - np.linalg.norm(center)))
    reach = float(np.linalg.norm(center)) + spread
    if spread < 0 or reach > center_bound * (1 + 1e-12):
        raise InvalidArgumentError(f"||center|| + spread = {reach} exceeds {center_bound}")
    if kind == "sc-smooth-unconstrained":
        G = alpha * (R + reach)
        M = 0.5 * alpha * (R + reach) ** 2
        given_G = None  # G names the Lipschitz constant at 0 here
    if given_G is not None and given_G < G:
        raise InvalidArgumentError(f"G={given_G} is below the family's Lipschitz constant {G}")
    if given_M is not None and given_M < M:
        raise InvalidArgumentError(f"M={given_M} is below the family's value bound {M}")
    params.update(center=center, spread=spread)
    consts = LossConstants(G=float(given_G or G), M=float(given_M or M), alpha=alpha,
                           beta=alpha, R=R, G_origin=G_origin)
    return LossSequence(kind, T, n, int(seed), consts, params)


def evaluate(seq: LossSequence, t: int, x) -> float:
    return seq.evaluate(t, x)


def comparator(seq: LossSequence, feasible_set: FeasibleSet | None = None):
    """Best fixed action in hindsight and its total loss, in closed form.

    For the unconstrained family the minimum is over all of R^n.
    """
    if feasible_set is None and not seq.unconstrained:
        feasible_set = seq.feasible_set
    if seq.kind == "linear":
        g = seq.param_sum()
        norm = np.linalg.norm(g)
        R = feasible_set.radius
        x_star = np.zeros(seq.n) if norm == 0 else -R * g / norm
    else:
        mean = seq.param_sum() / seq.T
        x_star = mean if feasible_set is None else project_ball(mean, feasible_set.radius)
    return x_star, seq.loss_sum(x_star)


def comparator_pgd(seq: LossSequence, feasible_set: FeasibleSet, rng: np.random.Generator,
                   restarts: int = 8, tol: float = 1e-10, max_iter: int = 100_000):
    """Projected gradient descent on the average loss, from several random starts.

    Generic fallback used to cross-check the closed forms. Stops when the
    gradient-mapping norm drops below ``tol``.
    """
    R = feasible_set.radius
    if seq.kind == "linear":
        # gradient is constant; a long step makes the projection contract fast
        gnorm = np.linalg.norm(seq.param_sum()) / seq.T
        step = 1e3 * R / gnorm if gnorm > 0 else R
    else:
        step = 1.0 / max(seq.constants.beta, 1.0)
    starts = R * sample_unit_ball_batch(seq.n, restarts, rng)
    best = None
    for x in starts:
        for _ in range(max_iter):
            grad = seq.grad_sum(x) / seq.T
            nxt = project_ball(x - step * grad, R)
            if np.linalg.norm(nxt - x) / step <= tol:
                x = nxt
                break
            x = nxt
        val = seq.loss_sum(x)
        if best is None or val < best[1]:
            best = (x, val)
    return best
