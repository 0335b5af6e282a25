"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Every check runs at the stated tolerance and within the stated time budget.
"""

import time

import numpy as np
import pytest

from dftbl.harness import verify
from dftbl.harness.config import ExperimentConfig
from dftbl.harness.game import _seed_streams, build_environment, build_schedule, play, run_game
from dftbl.harness.output import emit_csv
from dftbl.harness.sweep import sweep
from dftbl.learners import Bgd, Dftbl, DftblConfig

pytestmark = pytest.mark.slow

SEEDS = range(20)
LINEAR = {"kind": "linear", "G": 1.0, "R": 1.0}


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def report(log, k, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    log.append((k, ok, f"{detail} [{elapsed:.1f}s / {budget:.0f}s]"))
    return ok


def suite_detail(results):
    return "; ".join(f"{r.name}: {r.measured:.4g} vs {r.bound:.4g}" for r in results)


def mean_regret_vs_bound(config):
    regrets, bound = [], None
    for seed in SEEDS:
        trace = run_game(config, seed)
        regrets.append(trace.final_regret)
        bound = trace.summary["theorem_bound"]
    return float(np.mean(regrets)), bound


def theorem_check(acceptance_report, k, learner, environment, delays, budget):
    rows = []
    with Clock() as clock:
        for d in delays:
            config = ExperimentConfig(n=5, T=40_000, learner=learner, environment=environment,
                                      delay={"kind": "fixed", "d": d}, seeds=list(SEEDS))
            mean, bound = mean_regret_vs_bound(config)
            rows.append((d, mean, bound))
    ok = all(mean <= bound for _, mean, bound in rows)
    detail = "; ".join(f"d={d}: regret {m:.5g} <= bound {b:.5g}" for d, m, b in rows)
    assert report(acceptance_report, k, ok, detail, clock.elapsed, budget), detail


def test_criterion_01_estimator_unbiased(acceptance_report):
    with Clock() as clock:
        (linear, *_) = verify.check_lemma1()
    ok = linear.passed
    assert report(acceptance_report, 1, ok, f"max z-score {linear.measured:.3f} <= 4 ({linear.detail})",
                  clock.elapsed, 10)


def test_criterion_02_block_gradient_moment(acceptance_report):
    with Clock() as clock:
        results = verify.check_lemma4(seeds=SEEDS)
    blocks = results[0].detail
    assert "blocks=" in blocks and int(blocks.split("=")[1]) >= 1000
    assert report(acceptance_report, 2, all(r.passed for r in results),
                  suite_detail(results) + f" ({blocks})", clock.elapsed, 60)


def test_criterion_03_outstanding_gradient_moment(acceptance_report):
    with Clock() as clock:
        results = verify.check_lemma5(seeds=SEEDS, K=50)
    assert len(results) == 3
    assert all(int(r.detail.split("=")[1]) >= 1000 for r in results)
    assert report(acceptance_report, 3, all(r.passed for r in results), suite_detail(results),
                  clock.elapsed, 120)


def test_criterion_04_convex_bound(acceptance_report):
    theorem_check(acceptance_report, 4, "dftbl-convex", LINEAR, (1, 64, 1024), 300)


def test_criterion_05_strongly_convex_bound(acceptance_report):
    env = {"kind": "strongly-convex-quadratic", "alpha": 1.0, "R": 1.0}
    theorem_check(acceptance_report, 5, "dftbl-sc", env, (1, 256), 300)


def test_criterion_06_unconstrained_bound(acceptance_report):
    env = {"kind": "sc-smooth-unconstrained", "G": 1.0, "alpha": 1.0}
    cfg = ExperimentConfig(n=5, T=40_000, learner="dftbl-unconstrained", environment=env)
    trace = run_game(cfg.replace(T=100), 0)
    assert trace.summary["set_radius"] == 2.0
    theorem_check(acceptance_report, 6, "dftbl-unconstrained", env, (1, 256), 300)


def test_criterion_07_sublinear_trend(acceptance_report):
    ratios = []
    with Clock() as clock:
        for T in (1_000, 4_000, 16_000, 64_000):
            config = ExperimentConfig(n=5, T=T, learner="dftbl-convex", environment=LINEAR)
            regrets = [run_game(config, seed).final_regret for seed in SEEDS]
            ratios.append(float(np.mean(regrets)) / T)
    ok = all(b < a for a, b in zip(ratios, ratios[1:]))
    detail = "regret/T = " + ", ".join(f"{r:.4g}" for r in ratios)
    assert report(acceptance_report, 7, ok, detail, clock.elapsed, 300), detail


def _actions(learner, T, n, seed):
    config = ExperimentConfig(n=n, T=T, learner="bgd", environment=LINEAR)
    env_seed, delay_rng, _ = _seed_streams(seed)
    env = build_environment(config, env_seed)
    _, actions, _, _ = play(learner, env, build_schedule(config, delay_rng))
    return actions


def test_criterion_08_reductions(acceptance_report):
    n, T, delta, eta = 5, 5_000, 0.2, 0.01
    tuning = {"mode": "explicit", "delta": delta, "eta": eta}
    same = {}
    with Clock() as clock:
        bgd = run_game(ExperimentConfig(n=n, T=T, learner="bgd", environment=LINEAR, tuning=tuning), 3)
        for name in ("gold", "bistritz"):
            other = run_game(ExperimentConfig(n=n, T=T, learner=name, environment=LINEAR, tuning=tuning), 3)
            same[name] = np.array_equal(other.actions, bgd.actions) and np.array_equal(other.losses, bgd.losses)
        cfg = DftblConfig(alpha=0.0, eta=eta, K=1, delta=delta,
                          feasible_set=build_environment(
                              ExperimentConfig(n=n, T=T, learner="bgd", environment=LINEAR), 0).feasible_set,
                          T=T)
        ftbl = _actions(Dftbl(cfg, np.random.default_rng(11)), T, n, 3)
        # the 1/eta regularizer gives steps of eta/2 in dual-averaging form
        lazy = _actions(Bgd(cfg.feasible_set, delta, eta / 2, T, np.random.default_rng(11), lazy=True), T, n, 3)
        same["dftbl-k1"] = np.array_equal(ftbl, lazy)
    detail = ", ".join(f"{k} bit-identical={v}" for k, v in same.items())
    assert report(acceptance_report, 8, all(same.values()), detail, clock.elapsed, 10), detail


def test_criterion_09_ftrl_closed_form(acceptance_report):
    with Clock() as clock:
        results = verify.check_ftrl_exact(instances=1000, tol=2e-3)
    assert report(acceptance_report, 9, all(r.passed for r in results), suite_detail(results),
                  clock.elapsed, 60)


def test_criterion_10_leader_and_stability(acceptance_report):
    with Clock() as clock:
        results = verify.check_ftl(instances=10_000, slack=1e-9) + \
            verify.check_stability(instances=10_000, slack=1e-9)
    assert report(acceptance_report, 10, all(r.passed for r in results), suite_detail(results),
                  clock.elapsed, 30)


def test_criterion_11_determinism(acceptance_report, tmp_path):
    config = ExperimentConfig(n=5, T=5_000, learner="dftbl-convex", environment=LINEAR,
                              delay={"kind": "uniform-random", "d_max": 40})
    with Clock() as clock:
        emit_csv(run_game(config, 4), tmp_path / "a.csv")
        emit_csv(run_game(config, 4), tmp_path / "b.csv")
        traces_equal = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        grid = {"delay.d_max": [1, 16, 64]}
        emit_csv(sweep(config, grid, seeds=range(4), workers=1), tmp_path / "s1.csv")
        emit_csv(sweep(config, grid, seeds=range(4), workers=8), tmp_path / "s8.csv")
        sweeps_equal = (tmp_path / "s1.csv").read_bytes() == (tmp_path / "s8.csv").read_bytes()
    detail = f"trace CSV identical={traces_equal}, sweep workers 1 vs 8 identical={sweeps_equal}"
    assert report(acceptance_report, 11, traces_equal and sweeps_equal, detail, clock.elapsed, 60), detail
