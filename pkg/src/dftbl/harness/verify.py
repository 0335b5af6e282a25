"""Named property suites with measured margins.

Each check returns :class:`PropertyResult`; ``run_suite`` aggregates them.
``tamper`` scales every right-hand side; for the be-the-leader check, whose
right-hand side is zero, a factor of 0 instead demands an impossible margin.
Either way ``tamper=0`` must turn every suite red.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from ..geometry import FeasibleSet, regularized_argmin, sample_unit_ball_batch, shrink
from ..learners import ftrl_objective, ftrl_update
from ..smoothing import SmoothingParams, estimator_mean_mc, smoothed_gradient_fd, smoothed_value_mc
from .bounds import gamma
from .config import ExperimentConfig
from .diagnostics import block_gradients, grid_argmin_disk, unreceived_sums
from .game import run_game


@dataclass
class PropertyResult:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""

    @property
    def ratio(self) -> float:
        if self.bound == 0:
            return math.inf if self.measured > 0 else 0.0
        return self.measured / self.bound

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ratio"] = self.ratio
        return out


def _le(name, measured, bound, detail=""):
    return PropertyResult(name, bool(measured <= bound), float(measured), float(bound), detail)


# -- smoothing ------------------------------------------------------------------

def check_lemma1(tamper: float = 1.0, samples: int = 1_000_000, seed: int = 0):
    """Estimator mean vs. the exact gradient (linear) and vs. finite differences of the smoothed value."""
    rng = np.random.default_rng(seed)
    results = []
    a = np.array([1.0, 2.0])
    params = SmoothingParams(0.1, 2)
    mean, se = estimator_mean_mc(lambda X: X @ a, np.zeros(2), params, samples, rng)
    z = np.abs(mean - a) / se
    results.append(_le("lemma1.linear", z.max(), 4.0 * tamper, f"mean={mean.tolist()}"))

    families = {
        "quadratic": lambda X: np.einsum("ij,ij->i", X, X),
        "quartic": lambda X: np.einsum("ij,ij->i", X, X) ** 2,
    }
    x = np.array([0.3, -0.2])
    p = SmoothingParams(0.2, 2)
    for name, f in families.items():
        est, est_se = estimator_mean_mc(f, x, p, samples, rng)
        fd, fd_se = smoothed_gradient_fd(f, x, p, samples // 4, rng)
        z = np.abs(est - fd) / np.sqrt(est_se**2 + fd_se**2)
        results.append(_le(f"lemma1.fd.{name}", z.max(), 4.0 * tamper,
                           f"estimator={est.tolist()} fd={fd.tolist()}"))
    return results


def check_smoothing_closeness(tamper: float = 1.0, samples: int = 200_000, points: int = 20, seed: int = 1):
    rng = np.random.default_rng(seed)
    n, delta = 3, 0.2
    K = FeasibleSet.ball(n, 1.0)
    inner = shrink(K, delta)
    params = SmoothingParams(delta, n)
    a = np.array([0.6, -0.8, 0.0])
    families = {
        "linear": (lambda X: X @ a, 1.0),
        "norm": (lambda X: np.linalg.norm(X, axis=1), 1.0),
    }
    worst = -math.inf
    bound_at_worst = 0.0
    for f, G in families.values():
        for x in inner.radius * sample_unit_ball_batch(n, points, rng):
            val, se = smoothed_value_mc(f, x, params, samples, rng)
            gap = abs(val - f(x[None, :])[0]) - (delta * G + 4 * se)
            if gap > worst:
                worst, bound_at_worst = gap, delta * G + 4 * se
    return [_le("smoothing.closeness", worst + bound_at_worst, bound_at_worst * tamper)]


# -- block-gradient moments ------------------------------------------------------

def lemma_config(d: int = 1, T: int = 3000, K: int = 50, delta: float = 0.1) -> ExperimentConfig:
    """D-FTBL (convex regime) on quadratic losses, n = 5, explicit K and delta."""
    return ExperimentConfig(
        n=5, T=T, learner="dftbl-convex",
        environment={"kind": "strongly-convex-quadratic", "alpha": 1.0, "R": 1.0},
        delay={"kind": "fixed", "d": d},
        tuning={"mode": "explicit", "K": K, "delta": delta, "eta": 0.01},
    )


def _gamma_of(trace):
    s = trace.summary
    return gamma(s["K"], s["n"], s["M"], s["delta"], s["G"])


def check_lemma4(tamper: float = 1.0, seeds=range(20), config: ExperimentConfig | None = None):
    config = config or lemma_config()
    sq = []
    bound = None
    for seed in seeds:
        trace = run_game(config, seed)
        s = trace.summary
        grads = block_gradients(trace, s["K"], s["delta"])
        sq.append(np.einsum("ij,ij->i", grads, grads))
        bound = _gamma_of(trace)
    sq = np.concatenate(sq)
    return [_le("lemma4", sq.mean(), bound * tamper, f"blocks={sq.size}")]


def check_lemma5(tamper: float = 1.0, seeds=range(20), delays=None, K: int = 50):
    results = []
    for d in delays or (1, K, 4 * K):
        config = lemma_config(d=d, K=K)
        sq = []
        bound = None
        for seed in seeds:
            trace = run_game(config, seed)
            s = trace.summary
            sums = unreceived_sums(trace, s["K"], s["delta"])
            sq.append(np.einsum("ij,ij->i", sums, sums))
            bound = 2 * (d * d / (K * K) + 4) * _gamma_of(trace)
        sq = np.concatenate(sq)
        results.append(_le(f"lemma5.d={d}", sq.mean(), bound * tamper, f"blocks={sq.size}"))
    return results


# -- FTRL / FTL / stability ------------------------------------------------------

def random_sc_block(rng: np.random.Generator):
    """A random strongly convex block update on a disk: (g, ys, K, alpha, radius)."""
    radius = rng.uniform(0.3, 1.0)
    m = int(rng.integers(1, 21))
    K = int(rng.integers(1, 101))
    alpha = rng.uniform(0.1, 5.0)
    ys = radius * sample_unit_ball_batch(2, m, rng)
    # scale so that interior and boundary solutions both occur
    g = rng.standard_normal(2) * m * K * alpha * rng.uniform(0.0, 3.0)
    return g, ys, K, alpha, radius


def check_ftrl_exact(tamper: float = 1.0, instances: int = 1000, seed: int = 2, tol: float = 2e-3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        g, ys, K, alpha, radius = random_sc_block(rng)
        closed = ftrl_update(g, len(ys), K, alpha, radius, y_sum=ys.sum(axis=0))
        grid = grid_argmin_disk(lambda X: ftrl_objective(X, g, ys, alpha, K), radius)
        worst = max(worst, float(np.linalg.norm(closed - grid)))
    return [_le("ftrl.closed_form_vs_grid", worst, tol * tamper, f"instances={instances}")]


def _linear_sequence(rng, n):
    length = int(rng.integers(1, 30))
    return rng.standard_normal((length, n)) * rng.uniform(0.1, 10.0)


def check_ftl(tamper: float = 1.0, instances: int = 10_000, seed: int = 3, slack: float = 1e-9):
    """Be-the-leader: sum_m l_m(x*_m) <= min_x sum_m l_m(x), x*_m the leader after m terms.

    Half the instances add (1/eta)||x - y1||^2 to the first term, which turns
    the leaders into the D-FTBL iterates.
    """
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for i in range(instances):
        n = int(rng.integers(1, 6))
        radius = rng.uniform(0.2, 2.0)
        grads = _linear_sequence(rng, n)
        prefix = np.cumsum(grads, axis=0)
        if i % 2 == 0:
            norms = np.linalg.norm(prefix, axis=1, keepdims=True)
            leaders = -radius * prefix / np.where(norms == 0, 1.0, norms)
            reg = lambda x: 0.0
        else:
            eta = rng.uniform(0.01, 2.0)
            y1 = radius * sample_unit_ball_batch(n, 1, rng)[0]
            leaders = np.array([ftrl_update(p, 1, 1, 0.0, radius, eta=eta, y1=y1) for p in prefix])
            reg = lambda x, y1=y1, eta=eta: float((x - y1) @ (x - y1)) / eta
        played = float(np.einsum("ij,ij->", grads, leaders)) + reg(leaders[0])
        best = float(prefix[-1] @ leaders[-1]) + reg(leaders[-1])
        worst = max(worst, played - best)
    return [_le("ftl.be_the_leader", worst, slack * tamper if tamper else -math.inf,
                f"instances={instances}")]


def check_stability(tamper: float = 1.0, instances: int = 10_000, seed: int = 4, slack: float = 1e-9):
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(instances):
        n = int(rng.integers(1, 6))
        K = FeasibleSet.ball(n, rng.uniform(0.1, 3.0))
        eta = rng.uniform(0.01, 5.0)
        scale = rng.uniform(0.01, 20.0)
        u, v = scale * rng.standard_normal((2, n))
        lhs = np.linalg.norm(regularized_argmin(K, u, eta) - regularized_argmin(K, v, eta))
        worst = max(worst, lhs - tamper * 0.5 * eta * np.linalg.norm(u - v))
    return [_le("projection.stability", worst, slack, f"instances={instances}")]


SUITES = {
    "lemma1": check_lemma1,
    "smoothing": check_smoothing_closeness,
    "lemma4": check_lemma4,
    "lemma5": check_lemma5,
    "ftrl": check_ftrl_exact,
    "ftl": check_ftl,
    "stability": check_stability,
}


def run_suite(name: str, tamper: float = 1.0) -> list[PropertyResult]:
    if name == "all":
        return [r for suite in SUITES.values() for r in suite(tamper=tamper)]
    try:
        suite = SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'") from None
    return suite(tamper=tamper)
