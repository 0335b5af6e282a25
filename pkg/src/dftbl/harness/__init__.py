from .bounds import cross_check, gamma, theorem1_bound, theorem2_bound, theorem3_bound, theorem_bound
from .config import ExperimentConfig
from .game import RegretTrace, build_learner, run_game

__all__ = [
    "ExperimentConfig",
    "RegretTrace",
    "build_learner",
    "cross_check",
    "gamma",
    "run_game",
    "theorem1_bound",
    "theorem2_bound",
    "theorem3_bound",
    "theorem_bound",
]
