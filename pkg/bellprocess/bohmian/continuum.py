"""
Lattice jump process versus Bohmian motion as the spacing shrinks.
"""

import logging
from typing import Sequence

import numpy as np
import pandas as pd

from ..errors import NodeGuardError
from ..models.lattice import LatticeSpec, build_lattice_particle
from ..models.system import QuantumSystem
from .packets import GaussianPacket
from .velocity import bohm_velocity

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["eps", "drift", "velocity", "abs_error"]


def lattice_drift(system: QuantumSystem, x: int, t: float) -> float:
    """Mean displacement rate sum_q (pos(q) - pos(x)) sigma_t(q, x) along the first coordinate."""
    sigma, mu_x = system.column_rates(x, t)
    if mu_x <= system.node_eps:
        raise NodeGuardError(system.space.label_of(x), t, mu_x)
    displacement = system.positions[:, 0] - system.positions[x, 0]
    return float(displacement @ sigma)


def discretize_packet(packet: GaussianPacket, eps: float, x_eval: float, half_width: float) -> tuple:
    """Lattice with ``x_eval`` on a site, and the packet sampled at t = 0 on it."""
    n = int(np.ceil(half_width / eps))
    spec = LatticeSpec(L=2 * n + 1, eps=eps, mass=packet.mass, origin=x_eval - n * eps, hbar=packet.hbar)
    system = build_lattice_particle(spec, packet.psi(spec.sites(), 0.0))
    return system, n


def continuum_limit_report(
    packet: GaussianPacket,
    eps_list: Sequence[float],
    t: float,
    x_eval: float,
    half_width: float = 8.0,
) -> pd.DataFrame:
    """Drift of the lattice process at ``x_eval`` against the Bohmian velocity, one row per spacing.

    The fitted log-log slope of the error is stored in ``frame.attrs["order"]``.
    """
    eps_list = [float(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    velocity = float(bohm_velocity(packet, x_eval, t))
    rows = []
    for eps in eps_list:
        system, site = discretize_packet(packet, eps, x_eval, half_width)
        drift = lattice_drift(system, site, t)
        rows.append({"eps": eps, "drift": drift, "velocity": velocity, "abs_error": abs(drift - velocity)})
        logger.info("eps=%g: drift %.8f vs velocity %.8f", eps, drift, velocity)
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    errors = frame["abs_error"].to_numpy()
    if len(frame) >= 2 and np.all(errors > 0):
        frame.attrs["order"] = float(np.polyfit(np.log(frame["eps"]), np.log(errors), 1)[0])
    else:
        frame.attrs["order"] = float("nan")
    return frame
