"""
Integration of the guidance equation dx/dt = v_t(x).
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import QuadratureError
from ..models.dirac import DiracSystem
from .packets import GaussianPacket
from .velocity import VelocityField, Wavefunction

logger = logging.getLogger(__name__)

DEFAULT_STEP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BohmPath:
    """Positions of one or more particles: ``positions[i, j]`` is particle i at ``times[j]``."""

    times: np.ndarray
    positions: np.ndarray
    dense: Optional[Callable[[float], np.ndarray]] = None

    def at(self, t: float) -> np.ndarray:
        """Positions at any t inside the integrated interval."""
        lo, hi = float(np.min(self.times)), float(np.max(self.times))
        if not lo <= t <= hi:
            raise ValueError(f"t={t} outside the integrated interval [{lo}, {hi}]")
        if self.dense is not None:
            return np.reshape(self.dense(t), -1)
        order = np.argsort(self.times)
        return np.array([np.interp(t, self.times[order], row[order]) for row in self.positions])

    @property
    def final(self) -> np.ndarray:
        return self.positions[:, -1]

    def arc_length(self) -> np.ndarray:
        """Sum of |increments| over the stored times, per particle."""
        return np.sum(np.abs(np.diff(self.positions, axis=1)), axis=1)


def _solve(field: VelocityField, x_start, t0: float, t1: float, step_tol: float, t_eval) -> BohmPath:
    starts = np.atleast_1d(np.asarray(x_start, dtype=float))
    if t_eval is None:
        t_eval = np.array([t0, t1])
    t_eval = np.asarray(t_eval, dtype=float)
    if t1 == t0:
        return BohmPath(t_eval, np.repeat(starts[:, None], len(t_eval), axis=1))
    solution = solve_ivp(
        lambda t, y: field(y, t),
        (t0, t1),
        starts,
        method="DOP853",
        t_eval=t_eval,
        dense_output=True,
        rtol=step_tol,
        atol=step_tol,
    )
    if not solution.success:
        raise QuadratureError(f"trajectory integration on [{t0}, {t1}] failed: {solution.message}")
    logger.debug("integrated %d paths on [%g, %g] with %d field evaluations", starts.size, t0, t1, solution.nfev)
    return BohmPath(solution.t, solution.y, solution.sol)


def integrate_bohm(
    wave: Wavefunction,
    x_start,
    t0: float,
    t1: float,
    step_tol: float = DEFAULT_STEP_TOL,
    t_eval: Optional[Sequence[float]] = None,
    node_eps: Optional[float] = None,
) -> BohmPath:
    """Integrate Bohmian paths from ``x_start`` (scalar or array) over [t0, t1].

    t1 < t0 integrates backwards. Reaching a node raises SingularPointError
    with its location.
    """
    return _solve(VelocityField.bohm(wave, node_eps), x_start, t0, t1, step_tol, t_eval)


def bohm_dirac_trajectories(
    dirac: DiracSystem,
    x_starts,
    t0: float,
    t1: float,
    step_tol: float = 1e-9,
    t_eval: Optional[Sequence[float]] = None,
    node_eps: Optional[float] = None,
) -> BohmPath:
    """Bohm-Dirac paths on the band-limited interpolant of the Dirac state."""
    return _solve(VelocityField.bohm_dirac(dirac, node_eps), x_starts, t0, t1, step_tol, t_eval)


def equivariance_tv(
    packet: GaussianPacket,
    x_starts: Union[np.ndarray, Sequence[float]],
    t: float,
    bins: int = 10,
    step_tol: float = 1e-8,
) -> float:
    """Total variation between pushed-forward starts and |psi_t|^2 on equal-mass bins."""
    if bins < 2:
        raise ValueError("at least two bins are required")
    starts = np.asarray(x_starts, dtype=float)
    moved = integrate_bohm(packet, starts, 0.0, t, step_tol=step_tol).final
    edges = packet.quantile(np.linspace(0.0, 1.0, bins + 1), t)
    counts, _ = np.histogram(moved, bins=np.clip(edges, np.min(moved) - 1.0, np.max(moved) + 1.0))
    empirical = counts / starts.size
    return 0.5 * float(np.sum(np.abs(empirical - 1.0 / bins)))
