"""
Named checks and the runner that turns them into a VerificationReport.

CHECKS maps a check name to a function (context, M) -> BoundReport, the
same way a name -> rule table drives a batch of simulations. Monte Carlo
checks that fail are re-run once with retry_factor * M.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ..bohmian import GaussianPacket
from ..config import get_config
from ..errors import BellProcessError
from ..models.dirac import DiracSystem
from ..models.system import QuantumSystem
from ..process import SamplerConfig, Trajectory, sample_ensemble
from . import continuum_checks, ensemble_checks, structure
from .report import BoundReport, CheckResult, GateKind, VerificationReport

logger = logging.getLogger(__name__)


@dataclass
class CheckContext:
    """Everything a check may need; ensembles are cached per size."""

    system: Union[QuantumSystem, DiracSystem]
    M: int
    t0: float
    horizon: float
    times: Sequence[float]
    sampler: SamplerConfig
    jobs: Optional[int] = None
    progress: bool = False
    sigmas: float = field(default_factory=lambda: get_config()["mc_sigmas"])
    retry_factor: int = field(default_factory=lambda: get_config()["retry_factor"])
    tv_tolerance: Optional[float] = None
    node_config: Optional[object] = None
    node_time: Optional[float] = None
    node_delta: float = 1e-3
    packet: Optional[GaussianPacket] = None
    eps_list: Sequence[float] = (0.2, 0.1, 0.05)
    continuum_time: float = 0.5
    x_eval: Optional[float] = None
    bohm_M: int = 10_000
    bohm_time: float = 2.0
    _ensembles: Dict[int, List[Trajectory]] = field(default_factory=dict, repr=False)

    @property
    def seed(self) -> int:
        return self.sampler.seed

    def ensemble(self, M: int) -> List[Trajectory]:
        if M not in self._ensembles:
            self._ensembles[M] = sample_ensemble(
                self.system, M, self.sampler, self.t0, self.horizon, jobs=self.jobs, progress=self.progress
            )
        return self._ensembles[M]

    def start_config(self) -> int:
        return int(np.argmax(self.system.measure(self.t0)))


def _structural(ctx: CheckContext, M: int) -> BoundReport:
    return structure.structural_check(ctx.system, ctx.times)


def _additivity(ctx: CheckContext, M: int) -> BoundReport:
    deviation = structure.additivity_check(ctx.system, ctx.times)
    return BoundReport.gate(GateKind.UPPER, deviation, 0.0, abs_tol=structure.STRUCTURAL_TOL)


def _survival_ks(ctx: CheckContext, M: int) -> BoundReport:
    return ensemble_checks.survival_ks_check(
        ctx.system, M, ctx.start_config(), ctx.horizon, cfg=ctx.sampler, jobs=ctx.jobs, t_start=ctx.t0
    )


def _equivariance(ctx: CheckContext, M: int) -> BoundReport:
    return ensemble_checks.equivariance_check(
        ctx.system, M, ctx.times, trajectories=ctx.ensemble(M), tv_tolerance=ctx.tv_tolerance, sigmas=ctx.sigmas
    )


def _expected_jumps(ctx: CheckContext, M: int) -> BoundReport:
    identity, bound = ensemble_checks.expected_jumps_check(
        ctx.system, M, ctx.t0, ctx.horizon, cfg=ctx.sampler, trajectories=ctx.ensemble(M), sigmas=ctx.sigmas
    )
    identity.details["bound"] = bound.theoretical
    identity.details["bound_passed"] = bound.passed
    if not bound.passed:
        return identity.model_copy(update={"passed": False})
    return identity


def _rho_leq_mu(ctx: CheckContext, M: int) -> BoundReport:
    return ensemble_checks.rho_leq_mu_check(ctx.system, M, ctx.times, trajectories=ctx.ensemble(M), sigmas=ctx.sigmas)


def _node_avoidance(ctx: CheckContext, M: int) -> BoundReport:
    if ctx.node_config is None or ctx.node_time - ctx.node_delta > ctx.horizon:
        return BoundReport.gate(GateKind.IDENTITY, 0.0, 0.0, applicable=False)
    return ensemble_checks.node_avoidance_check(
        ctx.system,
        M,
        ctx.node_time,
        ctx.node_config,
        ctx.node_delta,
        cfg=ctx.sampler,
        trajectories=ctx.ensemble(M),
        sigmas=ctx.sigmas,
    )


def _hazard_lower_bound(ctx: CheckContext, M: int) -> BoundReport:
    return ensemble_checks.hazard_lower_bound_check(ctx.system, ctx.start_config(), ctx.t0, ctx.horizon, ctx.sampler)


def _distance(ctx: CheckContext, M: int) -> BoundReport:
    return ensemble_checks.jump_distance_check(
        ctx.system, M, ctx.t0, ctx.horizon, cfg=ctx.sampler, trajectories=ctx.ensemble(M), sigmas=ctx.sigmas
    )


def _require_packet(ctx: CheckContext) -> GaussianPacket:
    if ctx.packet is None:
        raise BellProcessError("this check needs a Gaussian packet in the experiment")
    return ctx.packet


def _continuum_limit(ctx: CheckContext, M: int) -> BoundReport:
    return continuum_checks.continuum_limit_check(_require_packet(ctx), ctx.eps_list, ctx.continuum_time, ctx.x_eval)


def _bohm_trajectories(ctx: CheckContext, M: int) -> BoundReport:
    return continuum_checks.bohm_trajectory_check(_require_packet(ctx), M, ctx.bohm_time, seed=ctx.seed)


def _speed_bound(ctx: CheckContext, M: int) -> BoundReport:
    return continuum_checks.speed_bound_check(ctx.system, ctx.times)


def _log_variation(ctx: CheckContext, M: int) -> BoundReport:
    return continuum_checks.log_variation_check(ctx.system, M, ctx.t0, ctx.horizon, seed=ctx.seed, sigmas=ctx.sigmas)


CheckFn = Callable[[CheckContext, int], BoundReport]

CHECKS: Dict[str, CheckFn] = {
    "structural": _structural,
    "additivity": _additivity,
    "survival_ks": _survival_ks,
    "equivariance": _equivariance,
    "expected_jumps": _expected_jumps,
    "rho_leq_mu": _rho_leq_mu,
    "node_avoidance": _node_avoidance,
    "hazard_lower_bound": _hazard_lower_bound,
    "distance": _distance,
    "continuum_limit": _continuum_limit,
    "bohm_trajectories": _bohm_trajectories,
    "speed_bound": _speed_bound,
    "log_variation": _log_variation,
}

MONTE_CARLO_CHECKS = {
    "survival_ks",
    "equivariance",
    "expected_jumps",
    "rho_leq_mu",
    "node_avoidance",
    "distance",
    "bohm_trajectories",
    "log_variation",
}


def _sample_size(ctx: CheckContext, name: str) -> int:
    return ctx.bohm_M if name == "bohm_trajectories" else ctx.M


def run_check(name: str, ctx: CheckContext) -> CheckResult:
    """Run one named check, retrying a failed Monte Carlo gate once with a larger ensemble."""
    fn = CHECKS[name]
    M = _sample_size(ctx, name)
    started = time.perf_counter()
    retried = False
    try:
        report = fn(ctx, M)
        if not report.passed and name in MONTE_CARLO_CHECKS and ctx.retry_factor > 1:
            logger.warning("check %s failed with M=%d; retrying with M=%d", name, M, ctx.retry_factor * M)
            M *= ctx.retry_factor
            report = fn(ctx, M)
            retried = True
    except (BellProcessError, ValueError) as err:
        logger.error("check %s could not run: %s", name, err)
        return CheckResult(
            name=name,
            passed=False,
            seed=ctx.seed,
            M=M,
            retried=retried,
            error=str(err),
            duration_s=time.perf_counter() - started,
        )
    result = CheckResult.from_bound(
        name,
        report,
        seed=ctx.seed,
        M=M if name in MONTE_CARLO_CHECKS else None,
        retried=retried,
        applicable=report.details.get("applicable", True),
        duration_s=time.perf_counter() - started,
    )
    logger.info("check %s: %s", name, "passed" if result.passed else "FAILED")
    return result


def run_suite(ctx: CheckContext, names: Sequence[str], model: str, config_path: Optional[str] = None) -> VerificationReport:
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    started = time.perf_counter()
    report = VerificationReport(model=model, seed=ctx.seed, config_path=config_path)
    for name in names:
        report.checks.append(run_check(name, ctx))
    report.duration_s = time.perf_counter() - started
    return report
