"""Quantities the regret analysis bounds, recomputed from a finished trace."""

from __future__ import annotations

import numpy as np


def estimated_gradients(trace, delta: float) -> np.ndarray:
    """g_t = (n/delta) f_t(x_t) u_t for every round."""
    n = trace.perturbations.shape[1]
    return (n / delta) * trace.losses[:, None] * trace.perturbations


def block_gradients(trace, K: int, delta: float) -> np.ndarray:
    """Sums of g_t over each complete block of K rounds."""
    g = estimated_gradients(trace, delta)
    blocks = trace.T // K
    return g[: blocks * K].reshape(blocks, K, -1).sum(axis=1)


def unreceived_sums(trace, K: int, delta: float) -> np.ndarray:
    """Sum of g_t over U_m for m = 2..T//K (rounds outstanding at the end of round (m-1)K)."""
    g = estimated_gradients(trace, delta)
    T = trace.T
    rounds = np.arange(1, T + 1)
    arrival = rounds + trace.delays - 1
    arrival = np.where(arrival > T, np.iinfo(np.int64).max, arrival)
    out = []
    for m in range(2, T // K + 1):
        end = (m - 1) * K
        mask = (rounds <= end) & (arrival > end)
        out.append(g[mask].sum(axis=0))
    return np.array(out)


def grid_argmin_disk(objective, radius: float, resolution: float = 1e-3,
                     coarse: float = 2e-2, window: int = 3) -> np.ndarray:
    """Brute-force minimizer of a batch objective over a 2-D disk.

    A coarse pass over an interior grid plus a boundary ring locates the
    basin; a second pass at ``resolution`` covers ``window`` coarse cells
    around it. Boundary rings make sure minimizers on the circle are
    reachable to within half a resolution step of arc.
    """
    best = _best(objective, _disk_points(radius, coarse, np.zeros(2), radius))
    span = window * coarse
    return _best(objective, _disk_points(radius, resolution, best, span))


def _disk_points(radius, step, center, half_width):
    xs = np.arange(center[0] - half_width, center[0] + half_width + step / 2, step)
    ys = np.arange(center[1] - half_width, center[1] + half_width + step / 2, step)
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    pts = pts[np.einsum("ij,ij->i", pts, pts) <= radius * radius]
    arc = step / radius
    theta = np.arange(0.0, 2 * np.pi, arc)
    ring = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    near = np.abs(ring - center).max(axis=1) <= half_width + step
    return np.vstack([pts, ring[near]])


def _best(objective, pts):
    vals = objective(pts)
    return pts[int(np.argmin(vals))]
