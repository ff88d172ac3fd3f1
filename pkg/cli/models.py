from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, PrivateAttr, ValidationError, ValidationInfo, field_validator, model_validator

from bellprocess.config import get_config
from bellprocess.models import FockInitial
from bellprocess.process import SamplerConfig


class ModelType(str, Enum):
    TWO_LEVEL = "TWO_LEVEL"
    LATTICE_1D = "LATTICE_1D"
    FOCK = "FOCK"
    DIRAC = "DIRAC"


class CheckName(str, Enum):
    STRUCTURAL = "structural"
    ADDITIVITY = "additivity"
    SURVIVAL_KS = "survival_ks"
    EQUIVARIANCE = "equivariance"
    EXPECTED_JUMPS = "expected_jumps"
    RHO_LEQ_MU = "rho_leq_mu"
    NODE_AVOIDANCE = "node_avoidance"
    HAZARD_LOWER_BOUND = "hazard_lower_bound"
    DISTANCE = "distance"
    CONTINUUM_LIMIT = "continuum_limit"
    BOHM_TRAJECTORIES = "bohm_trajectories"
    SPEED_BOUND = "speed_bound"
    LOG_VARIATION = "log_variation"


_JUMP_CHECKS = [
    CheckName.STRUCTURAL,
    CheckName.SURVIVAL_KS,
    CheckName.EQUIVARIANCE,
    CheckName.EXPECTED_JUMPS,
    CheckName.RHO_LEQ_MU,
    CheckName.NODE_AVOIDANCE,
    CheckName.HAZARD_LOWER_BOUND,
    CheckName.DISTANCE,
]

APPLICABLE_CHECKS: Dict[ModelType, List[CheckName]] = {
    ModelType.TWO_LEVEL: _JUMP_CHECKS,
    ModelType.LATTICE_1D: _JUMP_CHECKS + [CheckName.CONTINUUM_LIMIT, CheckName.BOHM_TRAJECTORIES],
    ModelType.FOCK: _JUMP_CHECKS + [CheckName.ADDITIVITY],
    ModelType.DIRAC: [CheckName.SPEED_BOUND, CheckName.LOG_VARIATION],
}


class PacketParams(BaseModel):
    x0: float = 0.0
    s0: float = Field(0.5, gt=0)
    u: float = 0.0


class TwoLevelParams(BaseModel):
    omega: float = Field(1.0, gt=0)
    hbar: Optional[float] = Field(None, gt=0)


class LatticeParams(BaseModel):
    L: int = Field(41, ge=2)
    eps: float = Field(0.25, gt=0)
    mass: float = Field(1.0, gt=0)
    potential: Optional[List[Any]] = None
    origin: Optional[float] = None
    hbar: Optional[float] = Field(None, gt=0)
    packet: PacketParams = Field(default_factory=lambda: PacketParams(x0=0.1, s0=0.5, u=1.0))
    eps_list: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    continuum_time: float = Field(0.5, ge=0)
    x_eval: Optional[float] = None
    bohm_time: float = Field(2.0, gt=0)
    bohm_M: int = Field(10_000, ge=10)


class FockParams(BaseModel):
    L: int = Field(3, ge=1)
    eps: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    n_max: int = Field(2, ge=1)
    sources: List[int] = Field(default_factory=lambda: [1], validate_default=True)
    radius: int = Field(1, ge=0)
    coupling: float = 0.1
    hopping: Optional[float] = None
    mass_ph: Optional[float] = Field(None, gt=0)
    initial: FockInitial = FockInitial.SUPERPOSITION
    hbar: Optional[float] = Field(None, gt=0)

    @field_validator("sources")
    @classmethod
    def _sources_on_lattice(cls, sources: List[int], info: ValidationInfo) -> List[int]:
        if not sources:
            raise ValueError("at least one source site is required")
        L = info.data.get("L")
        bad = [s for s in sources if L is not None and not 0 <= s < L]
        if bad:
            raise ValueError(f"source sites {bad} lie outside 0..{L - 1}")
        return sources


class DiracParams(BaseModel):
    L: int = Field(128, ge=2)
    eps: float = Field(0.1, gt=0)
    mass: float = Field(0.5, ge=0)
    c: float = Field(1.0, gt=0)
    origin: Optional[float] = None
    hbar: Optional[float] = Field(None, gt=0)
    packet: PacketParams = Field(default_factory=lambda: PacketParams(x0=0.0, s0=1.0, u=0.0))
    spinor: List[float] = Field(default_factory=lambda: [1.0, 0.0], min_length=2, max_length=2)


PARAMS_MODELS = {
    ModelType.TWO_LEVEL: TwoLevelParams,
    ModelType.LATTICE_1D: LatticeParams,
    ModelType.FOCK: FockParams,
    ModelType.DIRAC: DiracParams,
}


class EnsembleSettings(BaseModel):
    M: int = Field(1000, ge=1)
    t0: float = 0.0
    horizon: float = 1.0
    checkpoints: List[float] = Field(default_factory=list)
    tv_tolerance: Optional[float] = Field(None, gt=0)
    node_delta: float = Field(1e-3, gt=0)

    @model_validator(mode="after")
    def _check_interval(self):
        if not self.horizon > self.t0:
            raise ValueError(f"horizon ({self.horizon}) must exceed t0 ({self.t0})")
        outside = [t for t in self.checkpoints if not self.t0 <= t <= self.horizon]
        if outside:
            raise ValueError(f"checkpoints {outside} lie outside [t0, horizon]")
        return self

    def times(self) -> List[float]:
        return self.checkpoints or [self.t0, 0.5 * (self.t0 + self.horizon), self.horizon]


class OutputSettings(BaseModel):
    directory: str = Field(default_factory=lambda: get_config()["results_dir"])
    trajectories: str = "trajectories.csv"
    report: str = "report.json"
    convergence: str = "convergence.csv"


class ExperimentConfig(BaseModel):
    model: ModelType
    params: Dict[str, Any] = Field(default_factory=dict)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    ensemble: EnsembleSettings = Field(default_factory=EnsembleSettings)
    checks: List[CheckName] = Field(default_factory=list)
    output: OutputSettings = Field(default_factory=OutputSettings)

    _model_params: BaseModel = PrivateAttr()

    @model_validator(mode="after")
    def _check_model(self):
        try:
            self._model_params = PARAMS_MODELS[self.model].model_validate(self.params)
        except ValidationError as err:
            first = err.errors()[0]
            where = ".".join(str(part) for part in first["loc"])
            raise ValueError(f"params.{where}: {first['msg']}") from None
        allowed = APPLICABLE_CHECKS[self.model]
        wrong = [c.value for c in self.checks if c not in allowed]
        if wrong:
            raise ValueError(f"checks {wrong} do not apply to {self.model.value}")
        return self

    @property
    def model_params(self) -> BaseModel:
        return self._model_params
