"""
Schrodinger evolution and the one-time quantities derived from it:
the configuration measure, the probability current and the minimal
jump rates.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import get_config
from ..errors import DimensionMismatchError, ModelConfigurationError
from .kinematics import HermitianOperator, Povm, StateVector

logger = logging.getLogger(__name__)

NEGATIVE_MEASURE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class CurrentMatrix:
    """J_t(q, q'): net probability flow per unit time from q' to q."""

    t: float
    J: np.ndarray

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.J + self.J.T), initial=0.0))


@dataclass(frozen=True, eq=False)
class RateKernel:
    """Minimal jump rates sigma_t(q, q') from q' to q at a fixed time.

    Columns whose weight is at or below the node threshold are flagged in
    ``singular`` and hold NaN off the diagonal, never zero.
    """

    t: float
    sigma: np.ndarray
    total: np.ndarray
    singular: np.ndarray

    def rate_to(self, x: int) -> np.ndarray:
        """Rates out of configuration x, indexed by destination."""
        return self.sigma[:, x]

    @property
    def regular(self) -> np.ndarray:
        return ~self.singular


def _check_dims(psi: StateVector, H: HermitianOperator, povm: Optional[Povm] = None):
    if psi.dim != H.dim:
        raise DimensionMismatchError(f"state dimension {psi.dim} != Hamiltonian dimension {H.dim}")
    if povm is not None and povm.dim != H.dim:
        raise DimensionMismatchError(f"POVM dimension {povm.dim} != Hamiltonian dimension {H.dim}")


def spectral_coefficients(psi0: StateVector, H: HermitianOperator) -> np.ndarray:
    """c = V^dagger psi0, the coordinates of psi0 in the eigenbasis of H."""
    _check_dims(psi0, H)
    return H.eigenvectors.conj().T @ psi0.amps


def evolve(psi0: StateVector, H: HermitianOperator, t: float) -> StateVector:
    """Exact propagation V exp(-i lambda t / hbar) V^dagger psi0."""
    coeffs = spectral_coefficients(psi0, H)
    amps = H.eigenvectors @ (np.exp(-1j * H.eigenvalues * t / psi0.hbar) * coeffs)
    return StateVector(amps, psi0.hbar)


def measure(psi: StateVector, povm: Povm) -> np.ndarray:
    """mu(q) = <psi, P(q) psi>; roundoff negatives are clamped to zero."""
    if psi.dim != povm.dim:
        raise DimensionMismatchError(f"state dimension {psi.dim} != POVM dimension {povm.dim}")
    mu = np.real(povm.apply(psi.amps) @ psi.amps.conj())
    if np.min(mu, initial=0.0) < -NEGATIVE_MEASURE_TOL:
        raise ModelConfigurationError(
            f"negative configuration weight {np.min(mu):.3e}: POVM element is not positive"
        )
    return np.clip(mu, 0.0, None)


def sandwich(psi: StateVector, H: HermitianOperator, povm: Povm) -> np.ndarray:
    """K(q, q') = <psi, P(q) H P(q') psi> for all pairs of configurations."""
    _check_dims(psi, H, povm)
    phi = povm.apply(psi.amps)
    return phi.conj() @ H.matrix @ phi.T


def _current_from_sandwich(K: np.ndarray, hbar: float) -> np.ndarray:
    J = (2.0 / hbar) * np.imag(K)
    J = 0.5 * (J - J.T)
    np.fill_diagonal(J, 0.0)
    return J


def current(psi: StateVector, H: HermitianOperator, povm: Povm, t: float) -> CurrentMatrix:
    """J(q, q') = (2/hbar) Im <psi, P(q) H P(q') psi>."""
    return CurrentMatrix(t, _current_from_sandwich(sandwich(psi, H, povm), psi.hbar))


def rates_from_current(J: np.ndarray, mu: np.ndarray, t: float, node_eps: Optional[float] = None) -> RateKernel:
    """[J]^+ / mu column-wise; columns at or below node_eps are flagged singular."""
    node_eps = get_config()["node_eps"] if node_eps is None else node_eps
    if not node_eps > 0:
        raise ValueError(f"node_eps must be positive, got {node_eps}")
    singular = mu <= node_eps
    sigma = np.full(J.shape, np.nan)
    regular = ~singular
    sigma[:, regular] = np.maximum(J[:, regular], 0.0) / mu[regular]
    np.fill_diagonal(sigma, 0.0)
    total = np.full(mu.shape, np.nan)
    total[regular] = sigma[:, regular].sum(axis=0)
    return RateKernel(t, sigma, total, singular)


def minimal_rates(
    psi: StateVector,
    H: HermitianOperator,
    povm: Povm,
    t: float,
    node_eps: Optional[float] = None,
) -> RateKernel:
    """Minimal jump rates sigma(q, q') = [J(q, q')]^+ / mu(q')."""
    J = current(psi, H, povm, t).J
    return rates_from_current(J, measure(psi, povm), t, node_eps)


def measure_derivative(psi: StateVector, H: HermitianOperator, povm: Povm, t: float) -> np.ndarray:
    """d mu(q)/dt = (2/hbar) Im <psi, P(q) H psi>, cross-checked against the row sums of J."""
    _check_dims(psi, H, povm)
    phi = povm.apply(psi.amps)
    direct = (2.0 / psi.hbar) * np.imag(phi.conj() @ (H.matrix @ psi.amps))
    via_current = current(psi, H, povm, t).J.sum(axis=1)
    gap = float(np.max(np.abs(direct - via_current), initial=0.0))
    if gap > 1e-10:
        logger.warning("measure derivative forms disagree by %.3e at t=%g", gap, t)
    return direct


def assumption_c_integrand(psi: StateVector, H: HermitianOperator, povm: Povm) -> float:
    """sum over q, q' of |<psi, P(q) H P(q') psi>|, diagonal terms included."""
    return float(np.sum(np.abs(sandwich(psi, H, povm))))


def flux_matched_rates(kernel: RateKernel, mu: np.ndarray, S: np.ndarray, s: float) -> np.ndarray:
    """Non-minimal rates sigma + s * S(q, q') / mu(q') with the same net current.

    S must be symmetric, nonnegative and zero on the diagonal; the added
    flux s*S cancels in sigma(q,q')mu(q') - sigma(q',q)mu(q).
    """
    S = np.asarray(S, dtype=float)
    if S.shape != kernel.sigma.shape:
        raise DimensionMismatchError(f"perturbation shape {S.shape} != kernel shape {kernel.sigma.shape}")
    if np.any(S < 0) or np.max(np.abs(S - S.T), initial=0.0) > 0 or np.any(np.diag(S) != 0):
        raise ValueError("flux perturbation must be symmetric, nonnegative and zero on the diagonal")
    if s < 0:
        raise ValueError("perturbation strength must be nonnegative")
    alt = np.array(kernel.sigma, dtype=float)
    regular = kernel.regular
    alt[:, regular] += s * S[:, regular] / mu[regular]
    return alt
