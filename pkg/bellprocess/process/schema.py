"""
Schema definitions for sampled jump-process trajectories.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from ..config import get_config

# Pseudo-labels used in dumps
CEMETERY_LABEL = "cemetery"
INITIAL_JUMP_INDEX = -1

# Passed instead of a configuration index: draw the start from mu_{t0}
INITIAL_MEASURE = None


class TrajectoryStatus(str, Enum):
    ALIVE = "ALIVE"
    HORIZON = "HORIZON"
    CEMETERY = "CEMETERY"
    NODE_GUARD = "NODE_GUARD"


class JumpRecord(BaseModel):
    """The time and the destination of one jump."""

    time: float = Field(..., description="Jump time T_k")
    source: int = Field(..., ge=0, description="Configuration index before the jump")
    target: int = Field(..., ge=0, description="Configuration index after the jump")

    @model_validator(mode="after")
    def _distinct(self):
        if self.source == self.target:
            raise ValueError("a jump must change the configuration")
        return self


class Trajectory(BaseModel):
    """Piecewise-constant, right-continuous path: Q_t = X_k for T_k <= t < T_{k+1}.

    After ``cemetery_time`` (jump cap exceeded) or ``end_time`` (node guard)
    the path has no configuration.
    """

    trajectory_id: int = 0
    x0: int = Field(..., ge=0)
    t0: float
    horizon: float
    jumps: List[JumpRecord] = Field(default_factory=list)
    status: TrajectoryStatus = TrajectoryStatus.ALIVE
    cemetery_time: Optional[float] = None
    end_time: Optional[float] = None
    diagnostics: Optional[str] = None

    @model_validator(mode="after")
    def _check_path(self):
        if self.horizon < self.t0:
            raise ValueError("horizon precedes t0")
        previous_time, previous_config = self.t0, self.x0
        for jump in self.jumps:
            if jump.time <= previous_time:
                raise ValueError(f"jump times must increase strictly (got {jump.time} after {previous_time})")
            if jump.source != previous_config:
                raise ValueError(f"jump at {jump.time} leaves {jump.source} but path is at {previous_config}")
            previous_time, previous_config = jump.time, jump.target
        if self.status is TrajectoryStatus.CEMETERY and self.cemetery_time is None:
            raise ValueError("a CEMETERY trajectory needs its cemetery time")
        return self

    @property
    def final_config(self) -> int:
        return self.jumps[-1].target if self.jumps else self.x0

    @property
    def jump_times(self) -> List[float]:
        return [jump.time for jump in self.jumps]

    def state_at(self, t: float) -> Optional[int]:
        """Configuration index at time t, or None once the path has ended."""
        if t < self.t0 or t > self.horizon:
            raise ValueError(f"t={t} outside [{self.t0}, {self.horizon}]")
        if self.cemetery_time is not None and t >= self.cemetery_time:
            return None
        if self.end_time is not None and t >= self.end_time:
            return None
        config = self.x0
        for jump in self.jumps:
            if jump.time > t:
                break
            config = jump.target
        return config


class SamplerConfig(BaseModel):
    """Numerical settings of the trajectory sampler."""

    max_jumps: int = Field(default_factory=lambda: get_config()["max_jumps"], ge=1)
    quad_tol: float = Field(default_factory=lambda: get_config()["quad_tol"], gt=0)
    root_tol: float = Field(default_factory=lambda: get_config()["root_tol"], gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    node_eps: float = Field(default_factory=lambda: get_config()["node_eps"], gt=0)
    hazard_cap: float = Field(default_factory=lambda: get_config()["hazard_cap"], gt=0)
    hazard_step: float = Field(default_factory=lambda: get_config()["hazard_step"], gt=0)
