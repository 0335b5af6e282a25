from .accum import CompensatedSum
from .baselines import Bgd, Bistritz, Gold
from .dftbl import Dftbl, DftblConfig, ftrl_objective, ftrl_update
from .doubling import DoublingDftbl
from .tuning import (
    tune_bistritz_refined,
    tune_convex,
    tune_strongly_convex,
    tune_unconstrained,
    unconstrained_radius,
)

__all__ = [
    "Bgd",
    "Bistritz",
    "CompensatedSum",
    "Dftbl",
    "DftblConfig",
    "DoublingDftbl",
    "Gold",
    "ftrl_objective",
    "ftrl_update",
    "tune_bistritz_refined",
    "tune_convex",
    "tune_strongly_convex",
    "tune_unconstrained",
    "unconstrained_radius",
]
