"""
Monte Carlo oracle: simulated trajectories estimate every exact quantity,
reproducibly from a seed, for cross-validation of the linear solvers.
"""
from .models import (
    Interval,
    SimulationConfig,
    SimulationEstimate,
    StopReason,
    Trajectory,
    TruncationWarning,
    Verdict,
)
from .sampler import sample_path
from .estimators import (
    compare,
    estimate_excursion_events,
    estimate_green,
    estimate_hitting_distribution,
    estimate_hitting_time,
    wilson,
    z_value,
)

__all__ = [
    "Interval",
    "SimulationConfig",
    "SimulationEstimate",
    "StopReason",
    "Trajectory",
    "TruncationWarning",
    "Verdict",
    "compare",
    "estimate_excursion_events",
    "estimate_green",
    "estimate_hitting_distribution",
    "estimate_hitting_time",
    "sample_path",
    "wilson",
    "z_value",
]
