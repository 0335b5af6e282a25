"""Grids of experiments, run cell by cell (optionally across processes)."""

from __future__ import annotations

import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from .config import ExperimentConfig
from .game import run_game

log = logging.getLogger(__name__)


@dataclass
class SweepRow:
    cell_id: int
    params: dict
    regrets: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    error: str | None = None

    @property
    def n_seeds(self) -> int:
        return len(self.regrets)

    @property
    def mean_regret(self) -> float:
        return float(np.mean(self.regrets)) if self.regrets else math.nan

    @property
    def std_regret(self) -> float:
        # sample std; a single seed has no spread estimate and reports 0
        if len(self.regrets) < 2:
            return 0.0 if self.regrets else math.nan
        return float(np.std(self.regrets, ddof=1))

    @property
    def theorem_bound(self) -> float:
        vals = [b for b in self.bounds if b is not None]
        return float(np.mean(vals)) if vals else math.nan

    @property
    def param_json(self) -> str:
        return json.dumps(self.params, sort_keys=True)


def expand_grid(base: ExperimentConfig, grid: dict) -> list[tuple[dict, ExperimentConfig]]:
    """Cartesian product of ``grid`` (dotted key -> list of values) in key order."""
    if not grid:
        return [({}, base)]
    keys = list(grid)
    if any(not isinstance(grid[k], list) or not grid[k] for k in keys):
        raise ConfigError("every grid entry must be a nonempty list")
    cells = []
    for values in itertools.product(*(grid[k] for k in keys)):
        config = base
        params = dict(zip(keys, values))
        for key, value in params.items():
            config = config.with_param(key, value)
        cells.append((params, config))
    return cells


def _run_cell_seed(job):
    config, seed = job
    try:
        trace = run_game(config, seed)
    except Exception as exc:  # recorded per cell; the sweep continues
        return None, None, f"{type(exc).__name__}: {exc}"
    return trace.final_regret, trace.summary.get("theorem_bound"), None


def sweep(base: ExperimentConfig, grid: dict, seeds=None, workers: int = 1) -> list[SweepRow]:
    """Run every (cell, seed); rows come back in grid order regardless of workers."""
    cells = expand_grid(base, grid)
    seeds = list(base.seeds if seeds is None else seeds)
    jobs = [(config, seed) for _, config in cells for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_seed, jobs))
    else:
        results = [_run_cell_seed(job) for job in jobs]
    rows = []
    for i, (params, _) in enumerate(cells):
        row = SweepRow(cell_id=i, params=params)
        for regret, bound, error in results[i * len(seeds):(i + 1) * len(seeds)]:
            if error is not None:
                row.error = error
                log.warning("cell %d failed: %s", i, error)
                continue
            row.regrets.append(regret)
            row.bounds.append(bound)
        if row.error is not None:
            row.regrets, row.bounds = [], []
        rows.append(row)
    return rows


def load_sweep_spec(data: dict) -> tuple[ExperimentConfig, dict]:
    """A sweep file is ``{"base": <experiment config>, "grid": {dotted key: [values]}}``."""
    if "base" not in data:
        raise ConfigError("sweep spec needs a 'base' config")
    return ExperimentConfig.from_dict(data["base"]), data.get("grid", {})
