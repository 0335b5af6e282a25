from __future__ import annotations

import math

import numpy as np

from ..delay import FeedbackEvent
from .dftbl import Dftbl
from .tuning import tune_convex


class DoublingDftbl:
    """Convex D-FTBL with the maximum delay estimated by doubling.

    The estimate starts at 1. When an arrival reveals a delay above it, the
    estimate becomes the next power of two and a fresh learner, tuned for the
    remaining horizon, takes over from the following round. Feedback queried
    before a restart is ignored afterwards.
    """

    def __init__(self, n, T, r, R, rng: np.random.Generator, G=None, M=None, c: float = 1.0,
                 tuner=tune_convex):
        self.n, self.T, self.r, self.R, self.G, self.M, self.c = n, T, r, R, G, M, c
        self.rng = rng
        self.tuner = tuner
        self.d_hat = 1
        self.restarts = 0
        self.restart_rounds: list[int] = []
        self._start(1)

    def _start(self, first_round: int) -> None:
        self.offset = first_round - 1
        remaining = self.T - self.offset
        self.config = self.tuner(self.n, remaining, self.d_hat, self.r, self.R, self.G, self.M, c=self.c)
        self.base = Dftbl(self.config, self.rng)

    def act(self, t: int):
        return self.base.act(t - self.offset)

    def receive(self, t: int, events) -> None:
        mine = [
            FeedbackEvent(e.query_round - self.offset, e.loss_value, e.perturbation,
                          e.arrival_round - self.offset)
            for e in events
            if e.query_round > self.offset
        ]
        self.base.receive(t - self.offset, mine)
        observed = max((t - e.query_round + 1 for e in events), default=0)
        if observed > self.d_hat:
            self.d_hat = 2 ** math.ceil(math.log2(observed))
            if t < self.T:
                self.restarts += 1
                self.restart_rounds.append(t + 1)
                self._start(t + 1)

    @property
    def y(self) -> np.ndarray:
        return self.base.y
