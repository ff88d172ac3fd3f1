"""
Checks on the continuum side: Bohmian paths, distance and log-variation
functionals, the Bohm-Dirac speed bound and the lattice continuum limit.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad_vec
from scipy.stats import norm

from ..bohmian import (
    BohmPath,
    GaussianPacket,
    bohm_dirac_trajectories,
    bohm_dirac_velocity,
    bohm_velocity,
    continuum_limit_report,
    equivariance_tv,
    integrate_bohm,
)
from ..config import get_config
from ..errors import SingularPointError
from ..models.dirac import DiracSystem
from ..process import trajectory_rng
from .ensemble_checks import distance_functional
from .report import BoundReport, GateKind
from .stats import integrate, mean_and_stderr

logger = logging.getLogger(__name__)

PATH_TOL = 1e-6
BOHM_TV_TOL = 0.03
CONTINUUM_REL_TOL = 0.05
LOG_VARIATION_STEP = 1e-5


def _velocity(wave):
    if isinstance(wave, DiracSystem):
        return lambda x, t: bohm_dirac_velocity(wave, x, t)
    return lambda x, t: bohm_velocity(wave, x, t)


def log_variation(path: BohmPath, wave, t1: float, t2: float):
    """L(t1, t2): integral of |d/dt log |psi_t(Q_t)|^2| along each path.

    Along a guided path d/dt log rho = -dv/dx, so the integrand is the
    spatial derivative of the velocity at Q_t. A node on the path gives
    +inf. One value per particle; a float for one.
    """
    if t2 < t1:
        raise ValueError(f"t2={t2} precedes t1={t1}")
    velocity = _velocity(wave)
    h = LOG_VARIATION_STEP

    def rate(t: float) -> np.ndarray:
        x = path.at(t)
        return np.abs(velocity(x + h, t) - velocity(x - h, t)) / (2.0 * h)

    try:
        variation, _ = quad_vec(rate, t1, t2, epsabs=1e-10, epsrel=1e-9)
    except SingularPointError as err:
        logger.warning("log-variation overflow: %s", err)
        variation = np.full(path.positions.shape[0], np.inf)
    variation = np.atleast_1d(np.asarray(variation, dtype=float))
    return float(variation[0]) if variation.size == 1 else variation


def _packet_paths(packet: GaussianPacket, M: int, t1: float, t2: float, seed: int, n_times: int) -> BohmPath:
    starts = packet.sample(M, trajectory_rng(seed, 0))
    t_eval = np.unique(np.concatenate([np.linspace(0.0, t2, n_times), [t1]]))
    return integrate_bohm(packet, starts, 0.0, t2, step_tol=1e-9, t_eval=t_eval)


def _mean_speed(packet: GaussianPacket, t: float) -> float:
    """E|v_t(Q)| for Q ~ |psi_t|^2: a folded normal mean."""
    a = packet.spreading(t)
    slope = packet.hbar / (2.0 * packet.mass * packet.s0**2) * a / (1.0 + a**2)
    spread = abs(slope) * float(packet.width(t))
    if spread == 0.0:
        return abs(packet.u)
    u = packet.u
    return spread * np.sqrt(2.0 / np.pi) * np.exp(-(u**2) / (2.0 * spread**2)) + u * (1.0 - 2.0 * norm.cdf(-u / spread))


def _phase_gradient_mass(packet: GaussianPacket, t: float) -> float:
    """(hbar/m) * integral of |psi* dpsi| over x."""
    center, width = float(packet.center(t)), float(packet.width(t))
    integrand = lambda x: float(np.abs(np.conj(packet.psi(x, t)) * packet.gradient(x, t)))
    return packet.hbar / packet.mass * integrate(integrand, center - 12.0 * width, center + 12.0 * width, tol=1e-11)


def expected_distance_check(
    packet: GaussianPacket,
    M: int,
    t1: float,
    t2: float,
    seed: int = 0,
    n_times: int = 201,
    sigmas: float = 3.0,
) -> Tuple[BoundReport, BoundReport]:
    """E D(t1, t2) of Bohmian paths against the speed integral (identity) and the phase-gradient bound."""
    if not 0.0 <= t1 <= t2:
        raise ValueError("need 0 <= t1 <= t2")
    path = _packet_paths(packet, M, t1, t2, seed, n_times)
    mean, stderr = mean_and_stderr(distance_functional(path, t1, t2))
    identity_value = integrate(lambda t: _mean_speed(packet, t), t1, t2)
    bound_value = integrate(lambda t: _phase_gradient_mass(packet, t), t1, t2, tol=1e-8)
    identity = BoundReport.gate(GateKind.IDENTITY, mean, identity_value, stderr, sigmas, abs_tol=1e-4)
    bound = BoundReport.gate(GateKind.UPPER, mean, bound_value, stderr, sigmas)
    return identity, bound


def bohm_trajectory_check(
    packet: GaussianPacket,
    M: int,
    t_end: float = 2.0,
    seed: int = 0,
    tv_tol: float = BOHM_TV_TOL,
    bins: int = 10,
) -> BoundReport:
    """Integrated paths follow the scaling law and push |psi_0|^2 forward to |psi_t|^2."""
    starts = packet.sample(M, trajectory_rng(seed, 0))
    quantile_starts = np.quantile(starts, [0.05, 0.5, 0.95])
    times = np.linspace(0.0, t_end, 21)
    path = integrate_bohm(packet, quantile_starts, 0.0, t_end, t_eval=times)
    exact = np.array([packet.trajectory(quantile_starts, t) for t in times]).T
    path_error = float(np.max(np.abs(path.positions - exact)))
    tv = equivariance_tv(packet, starts, t_end, bins=bins)
    report = BoundReport.gate(GateKind.UPPER, tv, 0.0, abs_tol=tv_tol, path_error=path_error, bins=bins)
    if path_error > PATH_TOL:
        report = report.model_copy(update={"passed": False})
    return report


def _grid_gradient_mass(dirac: DiracSystem, t: float) -> float:
    """Integral over x of |psi_t| |d_x psi_t| (spinor norms) on the periodic grid."""
    hat = dirac.hat(t)
    psi = np.fft.ifft(hat, axis=0)
    dpsi = np.fft.ifft(1j * dirac.k[:, None] * hat, axis=0)
    return float(np.sum(np.linalg.norm(psi, axis=1) * np.linalg.norm(dpsi, axis=1)) * dirac.spec.eps)


def log_variation_bound(dirac: DiracSystem, t1: float, t2: float) -> float:
    """(2/hbar) m c^2 (t2 - t1) + 4c * integral of |psi||d_x psi| over [t1, t2] x space."""
    mass_term = 2.0 / dirac.hbar * dirac.rest_energy * (t2 - t1)
    return mass_term + 4.0 * dirac.c * integrate(lambda t: _grid_gradient_mass(dirac, t), t1, t2, tol=1e-8)


def sample_dirac_starts(dirac: DiracSystem, M: int, t: float, rng: np.random.Generator) -> np.ndarray:
    """Grid cells drawn with weight |psi_t|^2 eps, jittered uniformly inside the cell."""
    weights = np.sum(np.abs(dirac.spinor_grid(t)) ** 2, axis=1)
    cells = rng.choice(dirac.spec.L, size=M, p=weights / weights.sum())
    return dirac.x[cells] + dirac.spec.eps * rng.uniform(-0.5, 0.5, size=M)


def speed_bound_check(dirac: DiracSystem, times: Sequence[float], refine: int = 4) -> BoundReport:
    """max |v| over a refined grid and ``times`` stays below c(1 + 1e-12)."""
    node_eps = get_config()["node_eps"]
    grid = dirac.spec.x0 + dirac.spec.period * np.arange(refine * dirac.spec.L) / (refine * dirac.spec.L)
    fastest = 0.0
    for t in times:
        density = dirac.density_at(grid, t)
        usable = grid[density > node_eps]
        if usable.size:
            fastest = max(fastest, float(np.max(np.abs(bohm_dirac_velocity(dirac, usable, t)))))
    return BoundReport.gate(GateKind.UPPER, fastest, dirac.c, abs_tol=1e-12 * dirac.c, points=int(grid.size))


def log_variation_check(
    dirac: DiracSystem,
    M: int,
    t1: float,
    t2: float,
    seed: int = 0,
    n_times: int = 101,
    sigmas: float = 3.0,
) -> BoundReport:
    """Mean L(t1, t2) along Bohm-Dirac paths against the gradient bound."""
    starts = sample_dirac_starts(dirac, M, t1, trajectory_rng(seed, 0))
    path = bohm_dirac_trajectories(dirac, starts, t1, t2, t_eval=np.linspace(t1, t2, n_times))
    values = np.atleast_1d(log_variation(path, dirac, t1, t2))
    if not np.all(np.isfinite(values)):
        return BoundReport.gate(GateKind.UPPER, float("inf"), log_variation_bound(dirac, t1, t2), overflow=True)
    mean, stderr = mean_and_stderr(values)
    return BoundReport.gate(GateKind.UPPER, mean, log_variation_bound(dirac, t1, t2), stderr, sigmas, overflow=False)


def continuum_limit_check(
    packet: GaussianPacket,
    eps_list: Sequence[float],
    t: float,
    x_eval: Optional[float] = None,
    rel_tol: float = CONTINUUM_REL_TOL,
    half_width: float = 8.0,
) -> BoundReport:
    """Drift errors fall strictly with eps and the finest relative error stays below ``rel_tol``."""
    x_eval = float(packet.center(t)) if x_eval is None else x_eval
    frame = continuum_limit_report(packet, eps_list, t, x_eval, half_width)
    errors = frame["abs_error"].to_numpy()
    velocity = float(frame["velocity"].iloc[0])
    final = errors[-1] / abs(velocity) if velocity != 0.0 else errors[-1]
    decreasing = bool(np.all(np.diff(errors) < 0))
    report = BoundReport.gate(
        GateKind.UPPER,
        final,
        rel_tol,
        decreasing=decreasing,
        order=frame.attrs["order"],
        table=frame.to_dict(orient="records"),
    )
    if not decreasing:
        report = report.model_copy(update={"passed": False})
    return report
