"""Half-window-on-success CSMA/CA backoff: analytic Markov-chain model and
slot-synchronous Monte-Carlo simulator for the RTS/CTS saturation regime.
"""

from .analytic import (
    FixedPointSolution,
    NumericalError,
    OracleResult,
    ThroughputReport,
    audit_closed_form,
    collision_prob,
    pi_classical,
    pi_proposed,
    solve_fixed_point,
    stationary_oracle,
    sweep,
    throughput,
)
from .core import (
    DEFAULT_PHY,
    MacConfig,
    PhyParameters,
    SlotDurations,
    Strategy,
    compute_timing,
    load_config,
    window,
)
from .simulator import (
    EmptyMeasurementError,
    SimConfig,
    SimMetrics,
    backoff_on_collision,
    backoff_on_success,
    replicate,
    run,
)
from .stats import Ecdf, gain_percent, quantile, relative_error

__all__ = [
    "DEFAULT_PHY", "Ecdf", "EmptyMeasurementError", "FixedPointSolution",
    "MacConfig", "NumericalError", "OracleResult", "PhyParameters",
    "SimConfig", "SimMetrics", "SlotDurations", "Strategy",
    "ThroughputReport", "audit_closed_form", "backoff_on_collision",
    "backoff_on_success", "collision_prob", "compute_timing", "gain_percent",
    "load_config", "pi_classical", "pi_proposed", "quantile",
    "relative_error", "replicate", "run", "solve_fixed_point",
    "stationary_oracle", "sweep", "throughput", "window",
]

__version__ = "0.1.0"
