import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dftbl.errors import InvalidArgumentError
from dftbl.geometry import (
    FeasibleSet,
    project,
    regularized_argmin,
    sample_unit_ball,
    sample_unit_ball_batch,
    sample_unit_sphere,
    sample_unit_sphere_batch,
    shrink,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def vectors(n):
    return arrays(np.float64, n, elements=finite)


@pytest.mark.parametrize(
    "radius, x, expected",
    [
        (1.0, [3.0, 4.0], [0.6, 0.8]),
        (1.0, [0.2, 0.1], [0.2, 0.1]),
        (2.0, [0.0, -5.0], [0.0, -2.0]),
    ],
)
def test_project_examples(radius, x, expected):
    K = FeasibleSet.ball(2, radius)
    np.testing.assert_allclose(project(K, x), expected, atol=1e-15)


def test_project_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        project(FeasibleSet.ball(3, 1.0), [1.0, 2.0])


def test_set_invariants():
    K = FeasibleSet.ball(4, 1.5)
    assert K.contains(np.zeros(4))
    assert K.contains(np.array([1.5, 0, 0, 0]))
    assert not K.contains(np.array([1.0, 1.2, 0, 0]))
    with pytest.raises(InvalidArgumentError):
        FeasibleSet.ball(2, 0.0)
    with pytest.raises(InvalidArgumentError):
        FeasibleSet(dimension=2, outer_radius=1.0, kind="polytope")


@pytest.mark.parametrize("radius, delta, expected", [(1.0, 0.2, 0.8), (2.0, 0.5, 1.5)])
def test_shrink_examples(radius, delta, expected):
    assert shrink(FeasibleSet.ball(2, radius), delta).radius == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("delta", [1.0, 1.5, 0.0, -0.1])
def test_shrink_rejects_bad_delta(delta):
    with pytest.raises(InvalidArgumentError):
        shrink(FeasibleSet.ball(2, 1.0), delta)


def test_sphere_n1_is_sign(rng):
    draws = {float(sample_unit_sphere(1, rng)[0]) for _ in range(200)}
    assert draws == {-1.0, 1.0}


def test_sphere_deterministic():
    a = sample_unit_sphere(5, np.random.default_rng(7))
    b = sample_unit_sphere(5, np.random.default_rng(7))
    assert np.array_equal(a, b)


def test_sphere_unit_norm_and_mean(rng):
    u = sample_unit_sphere_batch(3, 100_000, rng)
    assert np.abs(np.linalg.norm(u, axis=1) - 1).max() < 1e-12
    # per-coordinate sd of the mean is sqrt(1/3)/sqrt(1e5) ~ 1.8e-3
    assert np.abs(u.mean(axis=0)).max() < 0.02


@pytest.mark.parametrize("n", [0, -1])
def test_samplers_reject_n(n, rng):
    with pytest.raises(InvalidArgumentError):
        sample_unit_sphere(n, rng)
    with pytest.raises(InvalidArgumentError):
        sample_unit_ball(n, rng)


def _radial_second_moment(n, grid=200_001):
    # E||u||^2 for the uniform ball: radial density n r^(n-1) on [0, 1]
    r = np.linspace(0.0, 1.0, grid)
    return np.trapezoid(r**2 * n * r ** (n - 1), r)


def test_ball_second_moment(rng):
    oracle = _radial_second_moment(2)
    assert oracle == pytest.approx(0.5, abs=1e-8)
    u = sample_unit_ball_batch(2, 1_000_000, rng)
    assert np.linalg.norm(u, axis=1).max() <= 1.0
    assert np.mean((u * u).sum(axis=1)) == pytest.approx(oracle, abs=0.01)


def test_ball_n1_is_uniform_interval(rng):
    u = np.array([sample_unit_ball(1, rng)[0] for _ in range(50_000)])
    assert np.abs(u).max() <= 1.0
    assert u.var() == pytest.approx(1 / 3, abs=0.01)


@given(vectors(3), st.floats(0.1, 10))
def test_projection_idempotent(x, radius):
    K = FeasibleSet.ball(3, radius)
    p = project(K, x)
    assert np.array_equal(project(K, p), p)
    assert K.contains(p)


@given(vectors(4), vectors(4), st.floats(0.1, 10))
def test_projection_nonexpansive(x, y, radius):
    K = FeasibleSet.ball(4, radius)
    assert np.linalg.norm(project(K, x) - project(K, y)) <= np.linalg.norm(x - y) + 1e-12


def test_shrink_safety(rng):
    for n, r, delta in [(2, 1.0, 0.2), (5, 2.0, 0.5), (1, 1.0, 0.9)]:
        K = FeasibleSet.ball(n, r)
        inner = shrink(K, delta)
        ys = inner.radius * sample_unit_ball_batch(n, 1000, rng)
        # push some points onto the boundary of the shrunk set as the worst case
        ys[:100] *= inner.radius / np.linalg.norm(ys[:100], axis=1)[:, None]
        us = sample_unit_sphere_batch(n, 1000, rng)
        assert all(K.contains(y + delta * u) for y, u in zip(ys, us))


@given(vectors(3), vectors(3), st.floats(0.01, 5), st.floats(0.1, 3))
def test_regularized_argmin_stability(u, v, eta, radius):
    K = FeasibleSet.ball(3, radius)
    lhs = np.linalg.norm(regularized_argmin(K, u, eta) - regularized_argmin(K, v, eta))
    assert lhs <= 0.5 * eta * np.linalg.norm(u - v) + 1e-9


def test_regularized_argmin_matches_grid():
    # brute force the 2-D objective on a fine grid
    K = FeasibleSet.ball(2, 1.0)
    u, eta = np.array([3.0, -1.0]), 0.5
    xs = np.linspace(-1, 1, 1001)
    X, Y = np.meshgrid(xs, xs)
    P = np.column_stack([X.ravel(), Y.ravel()])
    P = P[(P**2).sum(1) <= 1]
    vals = P @ u + (P**2).sum(1) / eta
    np.testing.assert_allclose(regularized_argmin(K, u, eta), P[np.argmin(vals)], atol=3e-3)
