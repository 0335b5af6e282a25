"""Euclidean-ball feasible sets, projection, shrinking and sphere/ball sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

UNIT_NORM_TOL = 1e-12
# a radially scaled point can land a few ulps outside; treat it as inside so
# projection is exactly idempotent
_BOUNDARY_SLACK = 1.0 + 8 * np.finfo(float).eps


@dataclass(frozen=True)
class FeasibleSet:
    """An origin-centered set with ``inner_radius * B ⊆ K ⊆ outer_radius * B``.

    Only ``kind="ball"`` is implemented, for which both radii coincide.
    """

    dimension: int
    outer_radius: float
    inner_radius: float | None = None
    kind: str = "ball"

    def __post_init__(self):
        if self.kind != "ball":
            raise InvalidArgumentError(f"unsupported set kind {self.kind!r}")
        if self.dimension < 1:
            raise InvalidArgumentError("dimension must be >= 1")
        if self.inner_radius is None:
            object.__setattr__(self, "inner_radius", self.outer_radius)
        if not 0 < self.inner_radius <= self.outer_radius:
            raise InvalidArgumentError("need 0 < inner_radius <= outer_radius")
        if self.inner_radius != self.outer_radius:
            raise InvalidArgumentError("a ball has inner_radius == outer_radius")

    @classmethod
    def ball(cls, dimension: int, radius: float) -> "FeasibleSet":
        return cls(dimension=dimension, outer_radius=float(radius))

    @property
    def radius(self) -> float:
        return self.outer_radius

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = _check_dim(self, x)
        return bool(np.linalg.norm(x) <= self.outer_radius * (1.0 + tol))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dimension": self.dimension, "radius": self.outer_radius}


def _check_dim(K: FeasibleSet, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (K.dimension,):
        raise InvalidArgumentError(
            f"expected a vector of dimension {K.dimension}, got shape {x.shape}"
        )
    return x


def project_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """Radial projection of ``x`` onto the origin ball of the given radius."""
    norm = np.sqrt(x @ x)
    if norm <= radius * _BOUNDARY_SLACK:
        return x.copy()
    return x * (radius / norm)


def project(K: FeasibleSet, x) -> np.ndarray:
    """Euclidean projection argmin_{y in K} ||y - x||^2."""
    return project_ball(_check_dim(K, x), K.outer_radius)


def shrink(K: FeasibleSet, delta: float) -> FeasibleSet:
    """The scaled set (1 - delta/r) K.

    Every point of the result stays inside ``K`` after any perturbation of
    length ``delta``.
    """
    if not 0 < delta < K.inner_radius:
        raise InvalidArgumentError(
            f"shrink needs 0 < delta < inner radius {K.inner_radius}, got {delta}"
        )
    scale = 1.0 - delta / K.inner_radius
    return FeasibleSet.ball(K.dimension, K.outer_radius * scale)


def sample_unit_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the unit sphere in R^n (Gaussian-normalize).

    For ``n == 1`` this yields +1 or -1 with equal probability.
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    while True:
        z = rng.standard_normal(n)
        norm = np.sqrt(z @ z)
        if norm > 0.0:
            return z / norm


def sample_unit_sphere_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    z = rng.standard_normal((size, n))
    norms = np.linalg.norm(z, axis=1)
    # a zero row has probability zero; redraw defensively
    bad = norms == 0.0
    while bad.any():
        z[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(z, axis=1)
        bad = norms == 0.0
    return z / norms[:, None]


def sample_unit_ball(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the solid unit ball: a sphere draw scaled by U**(1/n)."""
    u = sample_unit_sphere(n, rng)
    return u * rng.random() ** (1.0 / n)


def sample_unit_ball_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    u = sample_unit_sphere_batch(n, size, rng)
    return u * (rng.random(size) ** (1.0 / n))[:, None]


def regularized_argmin(K: FeasibleSet, u, eta: float) -> np.ndarray:
    """argmin_{x in K} <u, x> + (1/eta) ||x||^2, via projection of -eta*u/2."""
    u = _check_dim(K, u)
    return project_ball(-0.5 * eta * u, K.outer_radius)
