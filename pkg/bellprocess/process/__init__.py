"""
Sampling of the time-inhomogeneous pure jump process.
"""

from .schema import (
    CEMETERY_LABEL,
    INITIAL_MEASURE,
    JumpRecord,
    SamplerConfig,
    Trajectory,
    TrajectoryStatus,
)
from .hazard import NO_JUMP, cumulative_hazard, sample_holding_time
from .sampler import (
    count_jumps,
    sample_destination,
    sample_ensemble,
    sample_trajectory,
    trajectory_rng,
)
from .storage import format_label, read_trajectories_csv, write_trajectories_csv

__all__ = [
    "CEMETERY_LABEL",
    "INITIAL_MEASURE",
    "JumpRecord",
    "SamplerConfig",
    "Trajectory",
    "TrajectoryStatus",
    "NO_JUMP",
    "cumulative_hazard",
    "sample_holding_time",
    "count_jumps",
    "sample_destination",
    "sample_ensemble",
    "sample_trajectory",
    "trajectory_rng",
    "format_label",
    "read_trajectories_csv",
    "write_trajectories_csv",
]
