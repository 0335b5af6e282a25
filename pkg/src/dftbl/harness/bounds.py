"""Right-hand sides of the three regret guarantees.

Each bound has two implementations: the expression as displayed, in floats,
and a regrouped form evaluated with mpmath at 50 digits. ``cross_check``
compares them; the acceptance suite relies on that agreement.
"""

from __future__ import annotations

import math

import mpmath

from ..errors import ConfigError


def gamma(K, n, M, delta, G):
    """Second-moment scale K (nM/delta)^2 + K^2 G^2 of a block gradient."""
    return K * (n * M / delta) ** 2 + K * K * G * G


def _delay_factor(d, K, g):
    return math.sqrt(2 * (d * d / (K * K) + 4) * g)


def theorem1_bound(*, T, K, eta, delta, d, n, M, G, R, r):
    g = gamma(K, n, M, delta, G)
    return (
        4 * R * R / eta
        + eta * T * g / (2 * K)
        + eta * T * G / 2 * _delay_factor(d, K, g)
        + 3 * delta * G * T
        + delta * G * R * T / r
    )


def theorem2_bound(*, T, K, delta, d, n, M, G, R, r, alpha):
    g = gamma(K, n, M, delta, G)
    L = math.log(T)
    return (
        (1 + L) * (2 * g / (alpha * K) + G / alpha * _delay_factor(d, K, g))
        + (6 + 4 * L) * R * math.sqrt(g)
        + 3 * delta * G * T
        + delta * G * R * T / r
    )


def theorem3_bound(*, T, K, delta, d, n, M, G, alpha, beta, G_origin=None):
    """Unconstrained regime; ``G_origin`` (default ``G``) sets the radius 2G/alpha."""
    G0 = G if G_origin is None else G_origin
    g = gamma(K, n, M, delta, G)
    L = math.log(T)
    return (
        (1 + L) * (2 * g / (alpha * K) + G / alpha * _delay_factor(d, K, g))
        + (6 + 4 * L) * 2 * G0 * math.sqrt(g) / alpha
        + beta * delta * delta * T
        + beta * delta * delta * G0 * T / alpha
    )


# -- high-precision regrouped forms ------------------------------------------

def _mp(*values):
    return [mpmath.mpf(v) for v in values]


def _hp_common(T, K, delta, d, n, M, G):
    T, K, delta, d, n, M, G = _mp(T, K, delta, d, n, M, G)
    per_round = (n * M / delta) ** 2
    g = K * (per_round + K * G**2)
    spread = mpmath.sqrt(2 * g * (4 + (d / K) ** 2))
    return T, K, delta, d, G, g, spread


def theorem1_bound_hp(*, T, K, eta, delta, d, n, M, G, R, r):
    with mpmath.workdps(50):
        T, K, delta, d, G, g, spread = _hp_common(T, K, delta, d, n, M, G)
        eta, R, r = _mp(eta, R, r)
        value = eta * T / (2 * K) * (g + K * G * spread) + 4 * R**2 / eta + delta * G * T * (3 + R / r)
        return float(value)


def _hp_log_part(T, K, G, g, spread, alpha):
    return (1 + mpmath.log(T)) * (2 * g / K + G * spread) / alpha


def theorem2_bound_hp(*, T, K, delta, d, n, M, G, R, r, alpha):
    with mpmath.workdps(50):
        T, K, delta, d, G, g, spread = _hp_common(T, K, delta, d, n, M, G)
        R, r, alpha = _mp(R, r, alpha)
        value = (_hp_log_part(T, K, G, g, spread, alpha)
                 + 2 * (3 + 2 * mpmath.log(T)) * R * mpmath.sqrt(g)
                 + delta * G * T * (3 + R / r))
        return float(value)


def theorem3_bound_hp(*, T, K, delta, d, n, M, G, alpha, beta, G_origin=None):
    with mpmath.workdps(50):
        G0 = G if G_origin is None else G_origin
        T, K, delta, d, G, g, spread = _hp_common(T, K, delta, d, n, M, G)
        alpha, beta, G0 = _mp(alpha, beta, G0)
        radius = 2 * G0 / alpha
        value = (_hp_log_part(T, K, G, g, spread, alpha)
                 + 2 * (3 + 2 * mpmath.log(T)) * radius * mpmath.sqrt(g)
                 + beta * delta**2 * T * (1 + G0 / alpha))
        return float(value)


BOUNDS = {
    "theorem1": (theorem1_bound, theorem1_bound_hp),
    "theorem2": (theorem2_bound, theorem2_bound_hp),
    "theorem3": (theorem3_bound, theorem3_bound_hp),
}

LEARNER_THEOREM = {
    "dftbl-convex": "theorem1",
    "dftbl-sc": "theorem2",
    "dftbl-unconstrained": "theorem3",
}


def cross_check(name: str, rel_tol: float = 1e-12, **kwargs) -> float:
    plain, hp = BOUNDS[name]
    a, b = plain(**kwargs), hp(**kwargs)
    if not math.isclose(a, b, rel_tol=rel_tol):
        raise ArithmeticError(f"{name}: evaluators disagree ({a!r} vs {b!r})")
    return a


def theorem_bound(learner: str, constants: dict) -> float:
    """Bound for a D-FTBL run, from the constants recorded in its summary."""
    name = LEARNER_THEOREM.get(learner)
    if name is None:
        raise ConfigError(f"no regret theorem for learner {learner!r}")
    keys = {
        "theorem1": ("T", "K", "eta", "delta", "d", "n", "M", "G", "R", "r"),
        "theorem2": ("T", "K", "delta", "d", "n", "M", "G", "R", "r", "alpha"),
        "theorem3": ("T", "K", "delta", "d", "n", "M", "G", "alpha", "beta"),
    }[name]
    missing = [k for k in keys if constants.get(k) is None]
    if missing:
        raise ConfigError(f"{name} needs constants {missing}")
    kwargs = {k: constants[k] for k in keys}
    if name == "theorem3":
        kwargs["G_origin"] = constants.get("G_origin")
    return BOUNDS[name][0](**kwargs)
