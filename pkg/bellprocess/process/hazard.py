"""
Cumulative hazard of the holding time and its inversion.

The holding time after a jump into x at t_k has survival
P(T > t) = exp(-Lambda(t_k, t)) with Lambda the integral of the total
jump rate out of x. Near a node of mu(x) the rate diverges, so the
integral is marched in segments whose length shrinks as mu(x) decays and
each segment is integrated with scipy's adaptive Gauss-Kronrod rule.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from ..errors import NodeGuardError
from ..models.system import QuantumSystem
from .schema import SamplerConfig

logger = logging.getLogger(__name__)

# A step is refused when mu(x) would fall below this fraction of its value at the step start.
MU_DECAY_LIMIT = 0.25
MAX_STEP_GROWTH = 64.0

NO_JUMP = None


@dataclass
class _MarchResult:
    hazard: float
    time: float
    hit: bool = False
    node: bool = False
    mu: float = 0.0


def _time_scale(system: QuantumSystem) -> float:
    spread = 0.5 * float(np.ptp(system.H.eigenvalues))
    return np.inf if spread == 0.0 else system.hbar / spread


def _segment(system: QuantumSystem, x: int, a: float, b: float, cfg: SamplerConfig) -> float:
    if b <= a:
        return 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(
            lambda s: system.total_rate(x, s), a, b, epsabs=cfg.quad_tol, epsrel=1e-10, limit=200
        )
    for warning in caught:
        logger.debug("hazard quadrature on [%g, %g] for x=%s: %s", a, b, x, warning.message)
    return value


def _march(
    system: QuantumSystem,
    x: int,
    t_a: float,
    t_b: float,
    cfg: SamplerConfig,
    target: float = np.inf,
) -> _MarchResult:
    """Accumulate the hazard from t_a until it reaches ``target``, a node, or t_b."""
    mu_a = system.mu(x, t_a)
    if mu_a <= system.node_eps:
        raise NodeGuardError(system.space.label_of(x), t_a, mu_a)
    max_step = min(cfg.hazard_step * MAX_STEP_GROWTH, 0.25 * _time_scale(system))
    h = min(cfg.hazard_step, max_step)
    a, acc = t_a, 0.0
    while a < t_b:
        b = min(a + h, t_b)
        mu_b = system.mu(x, b)
        mu_mid = system.mu(x, 0.5 * (a + b))
        floor = MU_DECAY_LIMIT * min(mu_a, mu_b)
        # node_eps only stops a falling weight; a rising one right after a jump is fine
        falling_to_node = mu_b <= cfg.node_eps and mu_b < mu_a
        if falling_to_node or mu_b < MU_DECAY_LIMIT * mu_a or mu_mid < floor:
            if b - a <= cfg.root_tol:
                return _MarchResult(acc, a, node=True, mu=mu_a)
            h = 0.5 * (b - a)
            continue
        seg = _segment(system, x, a, b, cfg)
        if acc + seg >= target:
            remaining = target - acc
            t_hit = brentq(
                lambda t: _segment(system, x, a, t, cfg) - remaining, a, b, xtol=cfg.root_tol
            )
            return _MarchResult(target, t_hit, hit=True, mu=mu_b)
        acc += seg
        a, mu_a = b, mu_b
        h = min(2.0 * h, max_step)
    return _MarchResult(acc, t_b, mu=mu_a)


def cumulative_hazard(
    x: int, t_a: float, t_b: float, system: QuantumSystem, cfg: Optional[SamplerConfig] = None
) -> float:
    """Lambda = integral of the total rate out of x over [t_a, t_b].

    Returns +inf when a node of mu(x) lies in the interval.
    """
    if t_b < t_a:
        raise ValueError(f"t_b={t_b} precedes t_a={t_a}")
    cfg = cfg or SamplerConfig()
    result = _march(system, x, t_a, t_b, cfg)
    if result.node:
        logger.debug("hazard of x=%s diverges at t=%.12g", x, result.time)
        return float("inf")
    return result.hazard


def sample_holding_time(
    x: int,
    t_k: float,
    horizon: float,
    rng: np.random.Generator,
    system: QuantumSystem,
    cfg: Optional[SamplerConfig] = None,
) -> Optional[float]:
    """Next jump time after t_k, or NO_JUMP if none occurs before ``horizon``.

    The exponential threshold is capped at ``hazard_cap``; a larger draw
    forces the jump at the capped hazard. The hazard diverges at a node of
    mu(x), so a march that stops short of a node before the threshold is
    reached jumps at the last regular time instead.
    """
    cfg = cfg or SamplerConfig()
    threshold = rng.standard_exponential()
    if threshold > cfg.hazard_cap:
        logger.debug("hazard threshold %.3f capped at %.1f for x=%s", threshold, cfg.hazard_cap, x)
        threshold = cfg.hazard_cap
    result = _march(system, x, t_k, horizon, cfg, target=threshold)
    if result.hit:
        return result.time if result.time > t_k else float(np.nextafter(t_k, np.inf))
    if result.node:
        logger.debug(
            "node of %r ahead at t=%.12g with hazard %.3f below threshold %.3f; jump forced",
            system.space.label_of(x),
            result.time,
            result.hazard,
            threshold,
        )
        return result.time if result.time > t_k else float(np.nextafter(t_k, np.inf))
    return NO_JUMP
