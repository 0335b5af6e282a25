"""Per-round bandit gradient baselines: BGD and its delayed variants GOLD and Bistritz et al."""

from __future__ import annotations

import heapq

import numpy as np

from ..errors import InvalidArgumentError, ProtocolError
from ..geometry import FeasibleSet, project_ball, sample_unit_sphere, shrink
from ..smoothing import SmoothingParams
from .accum import CompensatedSum


class _BanditDescent:
    def __init__(self, feasible_set: FeasibleSet, delta: float, eta: float, T: int,
                 rng: np.random.Generator):
        if eta <= 0:
            raise InvalidArgumentError("eta must be positive")
        self.feasible_set = feasible_set
        self.params = SmoothingParams(delta, feasible_set.dimension)
        self.shrunk = shrink(feasible_set, delta)
        self.delta = delta
        self.eta = eta
        self.T = T
        self.rng = rng
        self.y = np.zeros(feasible_set.dimension)
        self._pending_u: dict[int, np.ndarray] = {}
        self._last_acted = 0

    @property
    def n(self) -> int:
        return self.feasible_set.dimension

    def act(self, t: int):
        if t != self._last_acted + 1 or t > self.T:
            raise ProtocolError(f"act({t}) out of sequence (last round {self._last_acted})")
        u = sample_unit_sphere(self.n, self.rng)
        self._pending_u[t] = u
        self._last_acted = t
        return self.y + self.delta * u, u

    def _take_u(self, k: int) -> np.ndarray:
        try:
            return self._pending_u.pop(k)
        except KeyError:
            raise ProtocolError(f"no recorded perturbation for round {k}") from None

    def _step(self, f_value: float, u: np.ndarray) -> np.ndarray:
        g = (self.params.scale * f_value) * u
        self.y = project_ball(self.y - self.eta * g, self.shrunk.radius)
        return self.y


class Bgd(_BanditDescent):
    """Bandit gradient descent for non-delayed feedback.

    With ``lazy=True`` the update is the FTRL (dual-averaging) form
    ``y_{t+1} = P(y_1 - eta * sum_s g_s)`` instead of the greedy projected step.
    """

    def __init__(self, feasible_set, delta, eta, T, rng, lazy: bool = False):
        super().__init__(feasible_set, delta, eta, T, rng)
        self.lazy = lazy
        self.y1 = self.y.copy()
        self.g_sum = CompensatedSum(self.n)

    def step(self, f_value: float) -> np.ndarray:
        u = self._take_u(self._last_acted)
        if not self.lazy:
            return self._step(f_value, u)
        self.g_sum.add((self.params.scale * f_value) * u)
        self.y = project_ball(self.y1 - self.eta * self.g_sum.value, self.shrunk.radius)
        return self.y

    def receive(self, t: int, events) -> None:
        if len(events) != 1 or events[0].query_round != t:
            raise ProtocolError(f"BGD needs exactly its own feedback at round {t}")
        self.step(events[0].loss_value)


class Gold(_BanditDescent):
    """One update per round using the oldest received-but-unused loss value."""

    def __init__(self, feasible_set, delta, eta, T, rng):
        super().__init__(feasible_set, delta, eta, T, rng)
        self.buffer: list[tuple[int, float]] = []

    def step(self) -> np.ndarray:
        if self.buffer:
            k, f_value = heapq.heappop(self.buffer)
            self._step(f_value, self._take_u(k))
        return self.y

    def receive(self, t: int, events) -> None:
        for e in events:
            heapq.heappush(self.buffer, (e.query_round, e.loss_value))
        self.step()


class Bistritz(_BanditDescent):
    """Applies every loss value of F_t, one projected step each, in query order."""

    def step(self, events) -> np.ndarray:
        for e in sorted(events, key=lambda e: e.query_round):
            self._step(e.loss_value, self._take_u(e.query_round))
        return self.y

    def receive(self, t: int, events) -> None:
        self.step(events)
