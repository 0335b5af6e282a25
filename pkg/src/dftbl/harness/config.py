"""Experiment configuration and its JSON form.

Example::

    {
      "schema_version": 1,
      "n": 5, "T": 40000,
      "learner": "dftbl-convex",
      "tuning": {"mode": "auto", "c": 1.0},
      "environment": {"kind": "linear", "G": 1.0, "R": 1.0},
      "delay": {"kind": "fixed", "d": 64},
      "seeds": [0, 1, 2],
      "output": "runs/convex_d64.csv"
    }

``tuning`` may instead be ``{"mode": "explicit", "K": 50, "eta": 0.01,
"delta": 0.1}`` (``eta`` only for the convex regime and the baselines).
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import ConfigError

SCHEMA_VERSION = 1
LEARNERS = (
    "dftbl-convex",
    "dftbl-sc",
    "dftbl-unconstrained",
    "bgd",
    "gold",
    "bistritz",
    "dftbl-doubling",
)


@dataclass
class ExperimentConfig:
    n: int
    T: int
    learner: str
    environment: dict
    delay: dict = field(default_factory=lambda: {"kind": "fixed", "d": 1})
    tuning: dict = field(default_factory=lambda: {"mode": "auto"})
    seeds: list = field(default_factory=lambda: [0])
    output: str | None = None
    gradient_source: str = "all-arrived"
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError("n must be a positive integer")
        if not isinstance(self.T, int) or self.T < 1:
            raise ConfigError("T must be a positive integer")
        if self.learner not in LEARNERS:
            raise ConfigError(f"unknown learner {self.learner!r}; choose from {LEARNERS}")
        env_kind = self.environment.get("kind")
        if env_kind is None:
            raise ConfigError("environment needs a kind")
        quadratic = env_kind in ("quadratic", "strongly-convex-quadratic",
                                 "unconstrained", "sc-smooth-unconstrained")
        unconstrained = env_kind in ("unconstrained", "sc-smooth-unconstrained")
        if self.learner == "dftbl-sc" and not quadratic:
            raise ConfigError("dftbl-sc needs strongly convex (alpha > 0) losses")
        if self.learner == "dftbl-unconstrained" and not unconstrained:
            raise ConfigError("dftbl-unconstrained needs the sc-smooth-unconstrained environment")
        if unconstrained and self.learner != "dftbl-unconstrained":
            raise ConfigError("the unconstrained environment is only played by dftbl-unconstrained")
        if self.learner == "bgd":
            kind = self.delay.get("kind")
            if kind != "fixed" or self.delay.get("d") != 1:
                raise ConfigError("bgd needs non-delayed feedback: delay {kind: fixed, d: 1}")
        mode = self.tuning.get("mode")
        if mode not in ("auto", "explicit"):
            raise ConfigError("tuning.mode must be 'auto' or 'explicit'")
        if self.learner == "dftbl-doubling" and mode != "auto":
            raise ConfigError("dftbl-doubling retunes itself; use tuning.mode = auto")
        if not self.seeds or not all(isinstance(s, int) and s >= 0 for s in self.seeds):
            raise ConfigError("seeds must be a nonempty list of nonnegative integers")

    def to_dict(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        data.setdefault("schema_version", SCHEMA_VERSION)
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **updates) -> "ExperimentConfig":
        data = copy.deepcopy(self.to_dict())
        data.update(updates)
        return ExperimentConfig.from_dict(data)

    def with_param(self, dotted: str, value) -> "ExperimentConfig":
        """Copy with one (possibly nested) field set, e.g. ``"delay.d"``."""
        data = copy.deepcopy(self.to_dict())
        node = data
        *parents, leaf = dotted.split(".")
        for key in parents:
            if not isinstance(node.get(key), dict):
                raise ConfigError(f"cannot set {dotted!r}: {key!r} is not a section")
            node = node[key]
        node[leaf] = value
        return ExperimentConfig.from_dict(data)


def get_param(config: ExperimentConfig, dotted: str):
    node = config.to_dict()
    for key in dotted.split("."):
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"config has no field {dotted!r}")
        node = node[key]
    return node


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
