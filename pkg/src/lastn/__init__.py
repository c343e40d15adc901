"""Analysis and live-play toolkit for the last-N equal-stakes roulette
strategy on wheels with a known bias law."""

__version__ = "0.1.0"

from .analytics import (
    CriticalPoint,
    EnumerationBudgetError,
    EstimatorError,
    GridCell,
    OmegaEstimate,
    StrategyConfig,
    critical_spread,
    exact_omega,
    mc_omega,
    mc_omega_session,
    omega_grid,
)
from .capital import (
    CapitalCell,
    CapitalError,
    CapitalSolution,
    NoCriticalCapitalError,
    avg_distinct,
    capital_grid,
    fluctuation_frequency,
    solve_capital,
)
from .session import (
    DecisionReport,
    Recommendation,
    Session,
    SessionError,
    replay,
)
from .wheel import (
    AMERICAN,
    EUROPEAN,
    FAMILIES,
    BiasModel,
    WheelError,
    WheelSpec,
    make_model,
)

__all__ = [
    "AMERICAN",
    "BiasModel",
    "CapitalCell",
    "CapitalError",
    "CapitalSolution",
    "CriticalPoint",
    "DecisionReport",
    "EnumerationBudgetError",
    "EstimatorError",
    "EUROPEAN",
    "FAMILIES",
    "GridCell",
    "NoCriticalCapitalError",
    "OmegaEstimate",
    "Recommendation",
    "Session",
    "SessionError",
    "StrategyConfig",
    "WheelError",
    "WheelSpec",
    "avg_distinct",
    "capital_grid",
    "critical_spread",
    "exact_omega",
    "fluctuation_frequency",
    "make_model",
    "mc_omega",
    "mc_omega_session",
    "omega_grid",
    "replay",
    "solve_capital",
]
