"""
Trajectory sampling of the minimal-rate jump process.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from ..config import get_config
from ..errors import InconsistentRatesError, NodeGuardError
from ..models.system import QuantumSystem
from .hazard import NO_JUMP, sample_holding_time
from .schema import INITIAL_MEASURE, JumpRecord, SamplerConfig, Trajectory, TrajectoryStatus

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, trajectory index)."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_destination(x: int, t: float, rng: np.random.Generator, system: QuantumSystem) -> int:
    """Destination q drawn with probability sigma_t(q, x) / total_t(x)."""
    sigma, mu_x = system.column_rates(x, t)
    if mu_x <= system.node_eps:
        raise NodeGuardError(system.space.label_of(x), t, mu_x)
    total = float(sigma.sum())
    if total <= 0.0:
        # the root may land on the edge of a rate-free stretch
        t_next = float(np.nextafter(t, np.inf)) + 1e-12 * max(1.0, abs(t))
        sigma, mu_x = system.column_rates(x, t_next)
        total = float(sigma.sum())
        if mu_x <= system.node_eps or not total > 0.0:
            raise InconsistentRatesError(
                f"jump out of {system.space.label_of(x)!r} at t={t:.12g} but all rates vanish"
            )
    return int(rng.choice(system.D, p=sigma / total))


def sample_trajectory(
    x0: Optional[int],
    t0: float,
    horizon: float,
    cfg: SamplerConfig,
    system: QuantumSystem,
    rng: Optional[np.random.Generator] = None,
    trajectory_id: int = 0,
) -> Trajectory:
    """Alternate holding times and destinations until the horizon.

    ``x0 = INITIAL_MEASURE`` draws the start from mu_{t0}. Exceeding
    ``cfg.max_jumps`` sends the path to the cemetery; a path that starts
    on a node ends at once with status NODE_GUARD.
    """
    if horizon < t0:
        raise ValueError(f"horizon {horizon} precedes t0 {t0}")
    rng = rng if rng is not None else trajectory_rng(cfg.seed, trajectory_id)
    if x0 is INITIAL_MEASURE:
        mu = system.measure(t0)
        x0 = int(rng.choice(system.D, p=mu / mu.sum()))

    jumps: List[JumpRecord] = []
    x, t = x0, t0
    status = TrajectoryStatus.ALIVE
    cemetery_time = end_time = diagnostics = None
    while t < horizon:
        try:
            t_next = sample_holding_time(x, t, horizon, rng, system, cfg)
        except NodeGuardError as err:
            logger.warning("trajectory %d: %s", trajectory_id, err)
            status, end_time, diagnostics = TrajectoryStatus.NODE_GUARD, err.time, str(err)
            break
        if t_next is NO_JUMP:
            break
        if len(jumps) >= cfg.max_jumps:
            status, cemetery_time = TrajectoryStatus.CEMETERY, t_next
            logger.debug("trajectory %d exceeded %d jumps at t=%.12g", trajectory_id, cfg.max_jumps, t_next)
            break
        y = sample_destination(x, t_next, rng, system)
        jumps.append(JumpRecord(time=t_next, source=x, target=y))
        x, t = y, t_next
    if status is TrajectoryStatus.ALIVE:
        status = TrajectoryStatus.HORIZON

    return Trajectory(
        trajectory_id=trajectory_id,
        x0=x0,
        t0=t0,
        horizon=horizon,
        jumps=jumps,
        status=status,
        cemetery_time=cemetery_time,
        end_time=end_time,
        diagnostics=diagnostics,
    )


def count_jumps(traj: Trajectory, t1: float, t2: float) -> int:
    """Number of jumps with time in [t1, t2]."""
    if not traj.t0 <= t1 <= t2 <= traj.horizon:
        raise ValueError(f"[{t1}, {t2}] is not inside [{traj.t0}, {traj.horizon}]")
    return sum(1 for jump in traj.jumps if t1 <= jump.time <= t2)


def sample_ensemble(
    system: QuantumSystem,
    M: int,
    cfg: SamplerConfig,
    t0: Optional[float] = None,
    horizon: float = 1.0,
    x0: Optional[int] = INITIAL_MEASURE,
    jobs: Optional[int] = None,
    progress: bool = False,
) -> List[Trajectory]:
    """M independent trajectories, ordered by index and independent of ``jobs``."""
    if M < 1:
        raise ValueError("ensemble size must be at least 1")
    t0 = system.t0 if t0 is None else t0
    workers = jobs or get_config()["jobs"] or os.cpu_count() or 1

    def run(index: int) -> Trajectory:
        return sample_trajectory(x0, t0, horizon, cfg, system, trajectory_rng(cfg.seed, index), index)

    logger.info("sampling %d trajectories of %s on [%g, %g] with %d workers", M, system.name, t0, horizon, workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(
            tqdm(
                ex.map(run, range(M)),
                total=M,
                desc=f"{system.name} trajectories",
                disable=not progress,
                leave=False,
            )
        )
    guarded = sum(1 for tr in results if tr.status is TrajectoryStatus.NODE_GUARD)
    if guarded:
        logger.warning("%d of %d trajectories stopped at a node", guarded, M)
    return results
