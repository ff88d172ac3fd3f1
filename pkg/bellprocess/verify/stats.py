"""
Ensemble statistics and the Monte Carlo error bars used by the gates.
"""

import logging
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import QuadratureError
from ..process import Trajectory, count_jumps

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Occupancies at checkpoint times, jump counts and status tally of an ensemble.

    ``rho_hat[i, q]`` is the fraction of paths at q at ``times[i]``;
    ``lost[i]`` the fraction without a configuration (cemetery or node
    guard), so each row of rho_hat plus lost sums to one.
    """

    times: np.ndarray
    rho_hat: np.ndarray
    lost: np.ndarray
    jump_counts: np.ndarray
    statuses: Dict[str, int] = field(default_factory=dict)

    @property
    def M(self) -> int:
        return int(self.jump_counts.size)

    @classmethod
    def from_trajectories(
        cls, trajectories: Sequence[Trajectory], times: Sequence[float], D: int
    ) -> "EnsembleStats":
        if not trajectories:
            raise ValueError("an ensemble needs at least one trajectory")
        times = np.asarray(times, dtype=float)
        counts = np.zeros((times.size, D))
        lost = np.zeros(times.size)
        for trajectory in trajectories:
            for i, t in enumerate(times):
                q = trajectory.state_at(t)
                if q is None:
                    lost[i] += 1
                else:
                    counts[i, q] += 1
        M = len(trajectories)
        jump_counts = np.array([len(trajectory.jumps) for trajectory in trajectories])
        statuses = Counter(trajectory.status.value for trajectory in trajectories)
        return cls(times, counts / M, lost / M, jump_counts, dict(statuses))


def jump_counts_between(trajectories: Sequence[Trajectory], t1: float, t2: float) -> np.ndarray:
    return np.array([count_jumps(trajectory, t1, t2) for trajectory in trajectories], dtype=float)


def mean_and_stderr(values: Sequence[float]) -> tuple:
    """Sample mean and its standard error, floored at 1/M for discrete resolution."""
    values = np.asarray(values, dtype=float)
    M = values.size
    mean = float(np.mean(values))
    spread = float(np.std(values, ddof=1)) if M > 1 else 0.0
    return mean, max(spread / math.sqrt(M), 1.0 / M)


def binomial_stderr(p, M: int) -> np.ndarray:
    """sqrt(p(1-p)/M) with the variance floored at 1/(4M)."""
    p = np.asarray(p, dtype=float)
    return np.sqrt(np.maximum(p * (1.0 - p), 1.0 / (4.0 * M)) / M)


def total_variation(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return 0.5 * np.sum(np.abs(np.asarray(p) - np.asarray(q)), axis=-1)


def integrate(f: Callable[[float], float], a: float, b: float, tol: float = 1e-9, limit: int = 200) -> float:
    """Adaptive quadrature that raises QuadratureError instead of warning."""
    if b == a:
        return 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(f, a, b, epsabs=tol, epsrel=1e-8, limit=limit)
    if caught or not np.isfinite(value):
        message = "; ".join(str(w.message) for w in caught) or "non-finite value"
        if not np.isfinite(value) or abserr > 1e3 * max(tol, 1e-8 * abs(value)):
            raise QuadratureError(f"integral on [{a}, {b}] did not converge ({message})")
        logger.debug("quadrature on [%g, %g] accepted with error %.2e: %s", a, b, abserr, message)
    return float(value)
