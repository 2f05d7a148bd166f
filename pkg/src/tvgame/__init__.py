"""No-regret learning in time-varying two-player zero-sum matrix games."""

from .environments import AppendixG, FileSchedule, PeriodicDrift, Stationary, TwoPhase, build_schedule
from .learners import DrvuParams, drvu_check, drvu_params_for
from .matrix_game import (
    DimensionError,
    NashSolution,
    PayoffMatrix,
    SolverError,
    duality_gap,
    nash_solve,
    payoff,
    simplex_project,
)
from .meta import MetaLearner, StepSizePool, make_player_pair
from .metrics import MetricsAccumulator, nonstationarity_measures

__version__ = "0.1.0"

__all__ = [
    "AppendixG", "FileSchedule", "PeriodicDrift", "Stationary", "TwoPhase", "build_schedule",
    "DrvuParams", "drvu_check", "drvu_params_for",
    "DimensionError", "NashSolution", "PayoffMatrix", "SolverError",
    "duality_gap", "nash_solve", "payoff", "simplex_project",
    "MetaLearner", "StepSizePool", "make_player_pair",
    "MetricsAccumulator", "nonstationarity_measures",
]
