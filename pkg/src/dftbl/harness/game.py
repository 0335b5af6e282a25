"""The delayed bandit game loop and regret accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..delay import DelaySchedule, FeedbackEvent, FeedbackQueue, delay_stats, schedule_generate
from ..environment import LossSequence, comparator, generate_losses
from ..errors import ConfigError
from ..geometry import FeasibleSet
from ..learners import (
    Bgd,
    Bistritz,
    Dftbl,
    DftblConfig,
    DoublingDftbl,
    Gold,
    tune_bistritz_refined,
    tune_convex,
    tune_strongly_convex,
    tune_unconstrained,
    unconstrained_radius,
)
from .bounds import LEARNER_THEOREM, theorem_bound
from .config import ExperimentConfig


@dataclass
class RegretTrace:
    """Per-round record of one game plus a summary of its parameters."""

    losses: np.ndarray
    comparator_losses: np.ndarray
    actions: np.ndarray
    perturbations: np.ndarray
    delays: np.ndarray
    x_star: np.ndarray
    summary: dict = field(default_factory=dict)
    block_points: list | None = None

    @property
    def T(self) -> int:
        return int(self.losses.size)

    @property
    def rounds(self) -> np.ndarray:
        return np.arange(1, self.T + 1)

    @property
    def cum_loss(self) -> np.ndarray:
        return np.cumsum(self.losses)

    @property
    def cum_comparator(self) -> np.ndarray:
        return np.cumsum(self.comparator_losses)

    @property
    def regret(self) -> np.ndarray:
        return self.cum_loss - self.cum_comparator

    @property
    def final_regret(self) -> float:
        return float(self.regret[-1])


def _seed_streams(seed: int):
    env_ss, delay_ss, learner_ss = np.random.SeedSequence(seed).spawn(3)
    env_seed = int(env_ss.generate_state(1, dtype=np.uint32)[0])
    return env_seed, np.random.default_rng(delay_ss), np.random.default_rng(learner_ss)


def build_environment(config: ExperimentConfig, env_seed: int) -> LossSequence:
    spec = dict(config.environment)
    kind = spec.pop("kind")
    return generate_losses(kind, config.T, config.n, env_seed, **spec)


def build_schedule(config: ExperimentConfig, rng: np.random.Generator) -> DelaySchedule:
    spec = dict(config.delay)
    kind = spec.pop("kind")
    if kind == "custom" and "values" in spec:
        spec["values"] = np.asarray(spec["values"], dtype=np.int64)
    return schedule_generate(kind, config.T, rng, **spec)


def _explicit(config: ExperimentConfig, name: str):
    try:
        return config.tuning[name]
    except KeyError:
        raise ConfigError(f"explicit tuning needs {name!r}") from None


def build_learner(config: ExperimentConfig, env: LossSequence, schedule: DelaySchedule,
                  rng: np.random.Generator):
    """Instantiate the configured learner; returns ``(learner, parameter dict)``."""
    n, T = config.n, config.T
    consts = env.constants
    stats = delay_stats(schedule)
    auto = config.tuning.get("mode") == "auto"
    c = config.tuning.get("c", 1.0)
    kind = config.learner
    ball = env.feasible_set

    if kind in ("dftbl-convex", "dftbl-sc", "dftbl-unconstrained"):
        if auto:
            if kind == "dftbl-convex":
                cfg = tune_convex(n, T, stats["max_delay"], ball.radius, ball.radius, consts.G, consts.M, c=c)
            elif kind == "dftbl-sc":
                cfg = tune_strongly_convex(n, T, consts.alpha, ball.radius, ball.radius, c=c)
            else:
                cfg = tune_unconstrained(n, T, consts.alpha, consts.G_origin, consts.M, c=c)
        else:
            alpha = 0.0 if kind == "dftbl-convex" else consts.alpha
            fs = ball
            if kind == "dftbl-unconstrained":
                fs = FeasibleSet.ball(n, unconstrained_radius(consts.G_origin, consts.alpha))
            cfg = DftblConfig(alpha=alpha, K=int(_explicit(config, "K")),
                              delta=float(_explicit(config, "delta")), feasible_set=fs, T=T,
                              eta=config.tuning.get("eta") if alpha == 0 else None)
        if config.gradient_source != "all-arrived":
            cfg = DftblConfig(**{**cfg.__dict__, "gradient_source": config.gradient_source})
        return Dftbl(cfg, rng), {"K": cfg.K, "eta": cfg.eta, "delta": cfg.delta,
                                 "alpha": cfg.alpha, "set_radius": cfg.feasible_set.radius}

    if kind == "dftbl-doubling":
        learner = DoublingDftbl(n, T, ball.radius, ball.radius, rng, consts.G, consts.M, c=c)
        return learner, {"K": learner.config.K, "eta": learner.config.eta,
                         "delta": learner.config.delta, "alpha": 0.0, "set_radius": ball.radius}

    if auto:
        delta, eta = tune_bistritz_refined(n, T, stats["avg_delay"], r=ball.radius)
    else:
        delta, eta = float(_explicit(config, "delta")), float(_explicit(config, "eta"))
    cls = {"bgd": Bgd, "gold": Gold, "bistritz": Bistritz}[kind]
    learner = cls(ball, delta, eta, T, rng)
    return learner, {"K": 1, "eta": eta, "delta": delta, "alpha": 0.0, "set_radius": ball.radius}


def play(learner, env: LossSequence, schedule: DelaySchedule):
    """Run rounds 1..T; returns (losses, actions, perturbations)."""
    T, n = env.T, env.n
    losses = np.empty(T)
    actions = np.empty((T, n))
    perts = np.empty((T, n))
    queue = FeedbackQueue(horizon=T)
    arrival = np.arange(1, T + 1) + schedule.delays - 1
    for t in range(1, T + 1):
        x, u = learner.act(t)
        f = env.evaluate(t, x)
        if not math.isfinite(f):
            raise ArithmeticError(f"non-finite loss at round {t}")
        losses[t - 1] = f
        actions[t - 1] = x
        perts[t - 1] = u
        queue.push(FeedbackEvent(t, f, u, int(arrival[t - 1])))
        learner.receive(t, queue.pop_arrivals(t))
    return losses, actions, perts, queue


def run_game(config: ExperimentConfig, seed: int) -> RegretTrace:
    """Simulate one game; a pure function of ``(config, seed)``."""
    env_seed, delay_rng, learner_rng = _seed_streams(seed)
    env = build_environment(config, env_seed)
    schedule = build_schedule(config, delay_rng)
    learner, tuned = build_learner(config, env, schedule, learner_rng)
    x_star, _ = comparator(env)
    comparator_losses = env.values_at(x_star)
    losses, actions, perts, queue = play(learner, env, schedule)

    stats = delay_stats(schedule)
    consts = env.constants
    summary = {
        "learner": config.learner,
        "seed": seed,
        "n": config.n,
        "T": config.T,
        "d": stats["max_delay"],
        "d_bar": stats["avg_delay"],
        **tuned,
        "G": consts.G,
        "M": consts.M,
        "R": consts.R,
        "r": consts.R,
        "beta": consts.beta,
        "G_origin": consts.G_origin,
        "env_alpha": consts.alpha,
        "max_action_norm": float(np.sqrt((actions * actions).sum(axis=1)).max()),
        "undelivered": queue.undelivered,
    }
    if config.learner == "dftbl-sc" or config.learner == "dftbl-unconstrained":
        summary["alpha"] = consts.alpha
    if isinstance(learner, DoublingDftbl):
        summary["restarts"] = learner.restarts
        summary["d_hat"] = learner.d_hat
    trace = RegretTrace(losses, comparator_losses, actions, perts, schedule.delays.copy(),
                        x_star, summary,
                        block_points=list(learner.history) if isinstance(learner, Dftbl) else None)
    summary["final_regret"] = trace.final_regret
    if config.learner in LEARNER_THEOREM:
        summary["theorem_bound"] = theorem_bound(config.learner, summary)
    else:
        summary["theorem_bound"] = None
    return trace
