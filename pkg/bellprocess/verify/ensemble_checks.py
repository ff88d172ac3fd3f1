"""
Monte Carlo checks of the jump process against the quantum prediction.

Each check samples its own ensemble unless ``trajectories`` is given; the
ensemble must then cover the times the check looks at.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import kstwo

from ..bohmian.integrate import BohmPath
from ..errors import PreconditionError
from ..models.system import QuantumSystem
from ..quantum import assumption_c_integrand
from ..process import (
    NO_JUMP,
    SamplerConfig,
    Trajectory,
    TrajectoryStatus,
    cumulative_hazard,
    sample_ensemble,
    sample_holding_time,
    trajectory_rng,
)
from .report import BoundReport, GateKind
from .stats import (
    EnsembleStats,
    binomial_stderr,
    integrate,
    jump_counts_between,
    mean_and_stderr,
    total_variation,
)

logger = logging.getLogger(__name__)

MIN_EQUIVARIANCE_M = 100
KS_LEVEL = 0.95


def _sampler(cfg: Optional[SamplerConfig], seed: Optional[int]) -> SamplerConfig:
    cfg = cfg or SamplerConfig()
    return cfg if seed is None else cfg.model_copy(update={"seed": seed})


def _ensemble(
    system: QuantumSystem,
    M: int,
    horizon: float,
    cfg: SamplerConfig,
    jobs: Optional[int],
    trajectories: Optional[Sequence[Trajectory]],
) -> Sequence[Trajectory]:
    if trajectories is not None:
        if not trajectories:
            raise PreconditionError("empty ensemble")
        if min(tr.horizon for tr in trajectories) < horizon:
            raise PreconditionError(f"ensemble ends before t={horizon}")
        return trajectories
    return sample_ensemble(system, M, cfg, horizon=horizon, jobs=jobs)


def equivariance_test(
    system: QuantumSystem,
    M: int,
    times: Sequence[float],
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
) -> np.ndarray:
    """TV(rho_hat_t, mu_t) at every checkpoint."""
    if trajectories is None and M < MIN_EQUIVARIANCE_M:
        raise PreconditionError(f"equivariance needs at least {MIN_EQUIVARIANCE_M} trajectories, got {M}")
    times = np.asarray(times, dtype=float)
    ensemble = _ensemble(system, M, float(times.max()), _sampler(cfg, seed), jobs, trajectories)
    stats = EnsembleStats.from_trajectories(ensemble, times, system.D)
    mu = np.array([system.measure(t) for t in times])
    return total_variation(stats.rho_hat, mu)


def equivariance_check(
    system: QuantumSystem,
    M: int,
    times: Sequence[float],
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
    tv_tolerance: Optional[float] = None,
    sigmas: float = 3.0,
) -> BoundReport:
    """Worst TV over the checkpoints against a fixed tolerance or the sampling-noise gate."""
    tv = equivariance_test(system, M, times, seed, cfg, jobs, trajectories)
    M = len(trajectories) if trajectories is not None else M
    if tv_tolerance is None:
        noise = [0.5 * sigmas * float(np.sum(binomial_stderr(system.measure(t), M))) for t in times]
        tv_tolerance = max(noise)
    return BoundReport.gate(
        GateKind.UPPER,
        float(np.max(tv)),
        0.0,
        abs_tol=tv_tolerance,
        times=[float(t) for t in times],
        tv=[float(v) for v in tv],
    )


def _positive_flux(system: QuantumSystem, t: float) -> float:
    return float(np.sum(np.maximum(system.current(t).J, 0.0)))


def _bound_integrand(system: QuantumSystem, t: float) -> float:
    return (2.0 / system.hbar) * assumption_c_integrand(system.state(t), system.H, system.povm)


def expected_jumps_check(
    system: QuantumSystem,
    M: int,
    t1: float,
    t2: float,
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
    sigmas: float = 3.0,
) -> Tuple[BoundReport, BoundReport]:
    """Empirical E S(t1, t2) against the rate integral (identity) and the assumption-(c) bound."""
    cfg = _sampler(cfg, seed)
    ensemble = _ensemble(system, M, t2, cfg, jobs, trajectories)
    mean, stderr = mean_and_stderr(jump_counts_between(ensemble, t1, t2))
    quad_tol = cfg.quad_tol
    identity_value = integrate(lambda t: _positive_flux(system, t), t1, t2, tol=quad_tol)
    bound_value = integrate(lambda t: _bound_integrand(system, t), t1, t2, tol=quad_tol)
    identity = BoundReport.gate(
        GateKind.IDENTITY, mean, identity_value, stderr, sigmas, abs_tol=1e3 * quad_tol, interval=[t1, t2]
    )
    bound = BoundReport.gate(
        GateKind.UPPER, mean, bound_value, stderr, sigmas, interval=[t1, t2], finite=bool(np.isfinite(bound_value))
    )
    return identity, bound


def rho_leq_mu_check(
    system: QuantumSystem,
    M: int,
    times: Sequence[float],
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
    sigmas: float = 3.0,
) -> BoundReport:
    """Worst excess rho_hat - mu - sigmas * stderr over configurations and checkpoints; passes when <= 0."""
    times = np.asarray(times, dtype=float)
    ensemble = _ensemble(system, M, float(times.max()), _sampler(cfg, seed), jobs, trajectories)
    stats = EnsembleStats.from_trajectories(ensemble, times, system.D)
    mu = np.array([system.measure(t) for t in times])
    excess = stats.rho_hat - mu - sigmas * binomial_stderr(mu, stats.M)
    return BoundReport.gate(
        GateKind.UPPER,
        float(np.max(excess)),
        0.0,
        lost_mass=[float(v) for v in stats.lost],
        statuses=stats.statuses,
    )


def node_avoidance_check(
    system: QuantumSystem,
    M: int,
    node_time: Optional[float],
    node_config,
    delta: float,
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
    sigmas: float = 3.0,
) -> BoundReport:
    """Occupancy of ``node_config`` at node_time - delta against mu there.

    Without a node the check is not applicable and passes.
    """
    if node_config is None or node_time is None:
        return BoundReport.gate(GateKind.IDENTITY, 0.0, 0.0, applicable=False)
    x = system.space.index_of(node_config)
    t = node_time - delta
    ensemble = _ensemble(system, M, t, _sampler(cfg, seed), jobs, trajectories)
    occupancy = float(np.mean([tr.state_at(t) == x for tr in ensemble]))
    expected = float(system.measure(t)[x])
    guarded = sum(1 for tr in ensemble if tr.status is TrajectoryStatus.NODE_GUARD)
    report = BoundReport.gate(
        GateKind.IDENTITY,
        occupancy,
        expected,
        float(binomial_stderr(expected, len(ensemble))),
        sigmas,
        time=t,
        config=str(node_config),
        node_guard=guarded,
    )
    if guarded:
        report = report.model_copy(update={"passed": False})
    return report


def hazard_lower_bound_check(
    system: QuantumSystem,
    x: int,
    t1: float,
    t2: float,
    cfg: Optional[SamplerConfig] = None,
) -> BoundReport:
    """Integrated total rate out of x dominates -log mu_{t2}(x) + log mu_{t1}(x)."""
    cfg = cfg or SamplerConfig()
    hazard = cumulative_hazard(x, t1, t2, system, cfg)
    with np.errstate(divide="ignore"):
        drop = float(np.log(system.mu(x, t1)) - np.log(system.mu(x, t2)))
    return BoundReport.gate(
        GateKind.LOWER,
        hazard,
        drop,
        abs_tol=1e3 * cfg.quad_tol * max(1.0, abs(drop) if np.isfinite(drop) else 1.0),
        config=str(system.space.label_of(x)),
        interval=[t1, t2],
    )


def first_jump_times(
    system: QuantumSystem,
    M: int,
    x: int,
    t_start: float,
    t_end: float,
    cfg: SamplerConfig,
    jobs: Optional[int] = None,
) -> np.ndarray:
    """First holding times out of x; NaN where no jump occurs before t_end."""

    def draw(index: int) -> float:
        t = sample_holding_time(x, t_start, t_end, trajectory_rng(cfg.seed, index), system, cfg)
        return np.nan if t is NO_JUMP else t

    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return np.array(list(ex.map(draw, range(M))), dtype=float)


def survival_ks_check(
    system: QuantumSystem,
    M: int,
    x: int,
    t_end: float,
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    t_start: Optional[float] = None,
) -> BoundReport:
    """Kolmogorov-Smirnov distance of first jump times to 1 - exp(-Lambda), censored at t_end."""
    cfg = _sampler(cfg, seed)
    t_start = system.t0 if t_start is None else t_start
    samples = first_jump_times(system, M, x, t_start, t_end, cfg, jobs)
    jumped = np.sort(samples[~np.isnan(samples)])
    cdf = np.empty(jumped.size)
    hazard, previous = 0.0, t_start
    for i, t in enumerate(jumped):
        if np.isfinite(hazard):
            hazard += cumulative_hazard(x, previous, t, system, cfg)
        cdf[i] = 1.0 - np.exp(-hazard)
        previous = t
    ranks = np.arange(1, jumped.size + 1)
    distance = max(
        float(np.max(ranks / M - cdf, initial=0.0)),
        float(np.max(cdf - (ranks - 1) / M, initial=0.0)),
    )
    if jumped.size < M:
        tail = 1.0 - np.exp(-cumulative_hazard(x, t_start, t_end, system, cfg))
        distance = max(distance, abs(jumped.size / M - tail))
    critical = float(kstwo.ppf(KS_LEVEL, M))
    return BoundReport.gate(
        GateKind.UPPER,
        distance,
        critical,
        pvalue=float(kstwo.sf(distance, M)),
        censored=int(M - jumped.size),
        config=str(system.space.label_of(x)),
    )


def distance_functional(
    path: Union[Trajectory, BohmPath],
    t1: float,
    t2: float,
    system: Optional[QuantumSystem] = None,
):
    """D(t1, t2): summed jump displacements, or arc length of ODE paths (one value per particle)."""
    if t2 < t1:
        raise ValueError(f"t2={t2} precedes t1={t1}")
    if isinstance(path, Trajectory):
        jumps = [j for j in path.jumps if t1 <= j.time <= t2]
        if system is None:
            return float(len(jumps))
        return float(sum(system.distance(j.source, j.target) for j in jumps))
    inside = (path.times >= t1) & (path.times <= t2)
    lengths = BohmPath(path.times[inside], path.positions[:, inside]).arc_length()
    return float(lengths[0]) if lengths.size == 1 else lengths


def jump_distance_check(
    system: QuantumSystem,
    M: int,
    t1: float,
    t2: float,
    seed: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
    jobs: Optional[int] = None,
    trajectories: Optional[Sequence[Trajectory]] = None,
    sigmas: float = 3.0,
) -> BoundReport:
    """E D(t1, t2) against the integral of sum d(q, q') [J(q, q')]^+."""
    cfg = _sampler(cfg, seed)
    ensemble = _ensemble(system, M, t2, cfg, jobs, trajectories)
    mean, stderr = mean_and_stderr([distance_functional(tr, t1, t2, system) for tr in ensemble])
    pos = system.positions
    metric = np.sum(np.abs(pos[:, None, :] - pos[None, :, :]), axis=2)
    theoretical = integrate(
        lambda t: float(np.sum(metric * np.maximum(system.current(t).J, 0.0))), t1, t2, tol=cfg.quad_tol
    )
    return BoundReport.gate(
        GateKind.IDENTITY, mean, theoretical, stderr, sigmas, abs_tol=1e3 * cfg.quad_tol, interval=[t1, t2]
    )

