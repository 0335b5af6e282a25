"""Delay schedules and the feedback queue realizing arrival sets F_t.

Rounds are 1-based throughout. Feedback for round ``t`` with delay ``d_t``
arrives at the end of round ``t + d_t - 1``; ``d_t = 1`` is the non-delayed
case.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, ProtocolError


@dataclass(frozen=True)
class DelaySchedule:
    kind: str
    delays: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        d = np.asarray(self.delays, dtype=np.int64)
        if d.ndim != 1 or d.size == 0:
            raise InvalidArgumentError("a schedule needs at least one round")
        if (d < 1).any():
            raise InvalidArgumentError("every delay must be >= 1")
        d.setflags(write=False)
        object.__setattr__(self, "delays", d)

    @property
    def T(self) -> int:
        return int(self.delays.size)

    def delay(self, t: int) -> int:
        return int(self.delays[t - 1])

    def arrival_round(self, t: int) -> int:
        return t + int(self.delays[t - 1]) - 1

    def to_json(self) -> str:
        return json.dumps([int(v) for v in self.delays])

    @classmethod
    def from_json(cls, text: str) -> "DelaySchedule":
        values = json.loads(text)
        if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
            raise InvalidArgumentError("a delay schedule is a JSON array of integers")
        return cls("custom", np.array(values, dtype=np.int64))


def schedule_generate(kind: str, T: int, rng: np.random.Generator | None = None, **params) -> DelaySchedule:
    """Materialize a length-``T`` delay schedule.

    kinds: ``fixed`` (``d``), ``uniform-random`` (``d_max``; uniform on
    1..d_max), ``adversarial-burst`` (``period``, ``burst_delay``; every round of
    a period reports at ``period_end + burst_delay - 1``), ``custom``
    (``values``).
    """
    if T < 1:
        raise InvalidArgumentError("T must be >= 1")
    t = np.arange(1, T + 1, dtype=np.int64)
    if kind == "fixed":
        d = _positive(params, "d")
        delays = np.full(T, d, dtype=np.int64)
    elif kind == "uniform-random":
        d_max = _positive(params, "d_max")
        if rng is None:
            raise InvalidArgumentError("uniform-random schedules need an rng")
        delays = rng.integers(1, d_max + 1, size=T, dtype=np.int64)
    elif kind == "adversarial-burst":
        period = _positive(params, "period")
        burst = _positive(params, "burst_delay")
        period_end = ((t - 1) // period + 1) * period
        delays = period_end - t + burst
    elif kind == "custom":
        delays = np.asarray(params.get("values"), dtype=np.int64)
        if delays.shape != (T,):
            raise InvalidArgumentError(f"custom schedule must have length {T}")
    else:
        raise InvalidArgumentError(f"unknown delay kind {kind!r}")
    return DelaySchedule(kind, delays, dict(params))


def _positive(params: dict, name: str) -> int:
    value = params.get(name)
    if not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def delay_stats(schedule) -> dict:
    """Maximum delay ``d`` and average delay ``d_bar``."""
    d = schedule.delays if isinstance(schedule, DelaySchedule) else np.asarray(schedule)
    if d.size == 0:
        raise InvalidArgumentError("empty schedule")
    return {"max_delay": int(d.max()), "avg_delay": float(d.mean())}


@dataclass(frozen=True)
class FeedbackEvent:
    query_round: int
    loss_value: float
    perturbation: np.ndarray
    arrival_round: int

    def __post_init__(self):
        if self.arrival_round < self.query_round:
            raise InvalidArgumentError("feedback cannot arrive before it is queried")


class FeedbackQueue:
    """Holds in-flight feedback and delivers F_t exactly once, in round order.

    ``delivered`` records the delivery round of every query round, which is
    what ``unreceived_at_block`` reads.
    """

    def __init__(self, horizon: int | None = None):
        self.horizon = horizon
        self.current_round = 1
        self._last_popped = 0
        self._pending: dict[int, list[FeedbackEvent]] = defaultdict(list)
        self.delivered: dict[int, int] = {}
        self.pushed = 0

    def push(self, event: FeedbackEvent) -> None:
        if event.query_round != self.current_round:
            raise ProtocolError(
                f"push for round {event.query_round} while at round {self.current_round}"
            )
        self._pending[event.arrival_round].append(event)
        self.pushed += 1

    def pop_arrivals(self, t: int) -> list[FeedbackEvent]:
        """Return F_t ordered by query round and advance to round t + 1."""
        if t <= self._last_popped:
            raise ProtocolError(f"pop_arrivals({t}) after round {self._last_popped}")
        if self.horizon is not None and t > self.horizon:
            raise ProtocolError(f"round {t} is past the horizon {self.horizon}")
        # rounds skipped without a pop would silently lose their events
        if t != self._last_popped + 1:
            raise ProtocolError(f"pop_arrivals({t}) skips round {self._last_popped + 1}")
        events = self._pending.pop(t, [])
        events.sort(key=lambda e: e.query_round)
        for e in events:
            self.delivered[e.query_round] = t
        self._last_popped = t
        self.current_round = t + 1
        return events

    @property
    def undelivered(self) -> int:
        return sum(len(v) for v in self._pending.values())

    def unreceived_at_block(self, m: int, K: int) -> set[int]:
        """U_m: rounds 1..(m-1)K whose feedback is not in by the end of round (m-1)K."""
        return unreceived_at_block(self.delivered, m, K, self._last_popped)


def unreceived_at_block(delivered: dict[int, int], m: int, K: int, last_round: int | None = None) -> set[int]:
    if m < 1 or K < 1:
        raise InvalidArgumentError("m and K must be >= 1")
    end = (m - 1) * K
    if last_round is not None and end > last_round:
        raise InvalidArgumentError(f"simulation has not reached round {end}")
    return {t for t in range(1, end + 1) if delivered.get(t, math.inf) > end}


def arrivals_from_schedule(schedule: DelaySchedule) -> dict[int, int]:
    """Delivery round per query round, omitting feedback lost past the horizon."""
    T = schedule.T
    arrive = np.arange(1, T + 1) + schedule.delays - 1
    return {t: int(a) for t, a in zip(range(1, T + 1), arrive) if a <= T}
