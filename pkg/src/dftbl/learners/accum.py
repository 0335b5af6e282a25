from __future__ import annotations

import numpy as np


class CompensatedSum:
    """Kahan-compensated running sum of vectors.

    Estimated gradients carry a factor n/delta, so over 1e5 rounds a naive
    float sum drifts by more than the lemma-level checks tolerate.
    """

    __slots__ = ("_sum", "_comp")

    def __init__(self, n: int):
        self._sum = np.zeros(n)
        self._comp = np.zeros(n)

    def add(self, v: np.ndarray) -> None:
        y = v - self._comp
        s = self._sum + y
        self._comp = (s - self._sum) - y
        self._sum = s

    @property
    def value(self) -> np.ndarray:
        return self._sum

    def copy(self) -> "CompensatedSum":
        out = CompensatedSum(self._sum.size)
        out._sum = self._sum.copy()
        out._comp = self._comp.copy()
        return out
