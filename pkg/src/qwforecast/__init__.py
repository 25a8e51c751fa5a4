"""Time-series forecasting with parameterized discrete-time quantum walks."""

from .closed_form import e2_closed, e3_closed, en_series, v1_closed
from .engine import (
    AmplitudeField,
    Distribution,
    distribution,
    evolve,
    evolve_history,
    expectation,
)
from .estimator import QuantumWalkForecaster
from .families import (
    DomainError,
    WalkFamily,
    WalkSpec,
    build_coin,
    build_coin_angle,
    build_initial_state,
)
from .forecast import (
    ForecastTrace,
    GridSpec,
    Rule,
    Series,
    StepEstimate,
    estimate_next,
    evaluate_v,
    minimize_v,
    rolling_forecast,
)
from .path_oracle import OracleCapError, oracle_distribution, path_sum, split_coin

__all__ = [
    "AmplitudeField",
    "Distribution",
    "DomainError",
    "ForecastTrace",
    "GridSpec",
    "OracleCapError",
    "QuantumWalkForecaster",
    "Rule",
    "Series",
    "StepEstimate",
    "WalkFamily",
    "WalkSpec",
    "build_coin",
    "build_coin_angle",
    "build_initial_state",
    "distribution",
    "e2_closed",
    "e3_closed",
    "en_series",
    "estimate_next",
    "evaluate_v",
    "evolve",
    "evolve_history",
    "expectation",
    "minimize_v",
    "oracle_distribution",
    "path_sum",
    "rolling_forecast",
    "split_coin",
    "v1_closed",
]

__version__ = "0.1.0"
