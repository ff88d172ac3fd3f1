"""
QuantumSystem: the read-only bundle every jump-process consumer works on.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..config import get_config
from ..errors import DimensionMismatchError
from ..quantum import (
    ConfigSpace,
    CurrentMatrix,
    HermitianOperator,
    Povm,
    PovmKind,
    RateKernel,
    StateVector,
    current,
    measure,
    measure_derivative,
    minimal_rates,
    spectral_coefficients,
)


@dataclass(frozen=True, eq=False)
class QuantumSystem:
    """Configuration space, Hamiltonian, POVM and initial state at time t0.

    ``positions`` holds one coordinate row per configuration; the distance
    between two configurations is the L1 distance of their rows.
    ``parts`` optionally names summands of H (e.g. H0 and HI).
    """

    name: str
    space: ConfigSpace
    H: HermitianOperator
    povm: Povm
    psi0: StateVector
    t0: float = 0.0
    positions: Optional[np.ndarray] = None
    parts: Mapping[str, HermitianOperator] = field(default_factory=dict)
    node_eps: Optional[float] = None
    info: Dict[str, Any] = field(default_factory=dict)
    coeffs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.space.D != self.povm.D:
            raise DimensionMismatchError(
                f"configuration space has {self.space.D} entries but POVM has {self.povm.D}"
            )
        if self.psi0.dim != self.H.dim or self.povm.dim != self.H.dim:
            raise DimensionMismatchError("state, Hamiltonian and POVM dimensions must agree")
        coeffs = spectral_coefficients(self.psi0, self.H)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.node_eps is None:
            object.__setattr__(self, "node_eps", get_config()["node_eps"])
        positions = (
            np.arange(self.space.D, dtype=float).reshape(-1, 1)
            if self.positions is None
            else np.asarray(self.positions, dtype=float).reshape(self.space.D, -1)
        )
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def D(self) -> int:
        return self.space.D

    @property
    def hbar(self) -> float:
        return self.psi0.hbar

    # --- one-time quantities ---

    def amps(self, t: float) -> np.ndarray:
        """Amplitudes of psi_t without re-validation (hot path)."""
        phases = np.exp(-1j * self.H.eigenvalues * (t - self.t0) / self.hbar)
        return self.H.eigenvectors @ (phases * self.coeffs)

    def state(self, t: float) -> StateVector:
        return StateVector(self.amps(t), self.hbar)

    def measure(self, t: float) -> np.ndarray:
        return measure(self.state(t), self.povm)

    def current(self, t: float) -> CurrentMatrix:
        return current(self.state(t), self.H, self.povm, t)

    def rates(self, t: float, H: Optional[HermitianOperator] = None) -> RateKernel:
        """Minimal rates at t; ``H`` substitutes the generator while psi_t still evolves under the full H."""
        return minimal_rates(self.state(t), self.H if H is None else H, self.povm, t, self.node_eps)

    def measure_derivative(self, t: float) -> np.ndarray:
        return measure_derivative(self.state(t), self.H, self.povm, t)

    # --- single-configuration fast paths used by the sampler ---

    def mu(self, x: int, t: float, amps: Optional[np.ndarray] = None) -> float:
        a = self.amps(t) if amps is None else amps
        if self.povm.kind is PovmKind.PARTITION:
            block = self.povm.blocks[x]
            return float(np.sum(np.abs(a[block]) ** 2))
        return max(float(np.real(a.conj() @ self.povm.elements[x] @ a)), 0.0)

    def column_rates(self, x: int, t: float) -> Tuple[np.ndarray, float]:
        """Rates out of x at time t and the weight mu_t(x).

        For a singular column the rates are NaN; callers check the weight.
        """
        a = self.amps(t)
        mu_x = self.mu(x, t, a)
        if mu_x <= self.node_eps:
            return np.full(self.D, np.nan), mu_x
        if self.povm.kind is PovmKind.PARTITION:
            block = self.povm.blocks[x]
            v = self.H.matrix[:, block] @ a[block]
            flux = np.bincount(self.povm.owner, weights=np.imag(a.conj() * v), minlength=self.D)
        else:
            phi = self.povm.elements @ a
            flux = np.imag(phi.conj() @ (self.H.matrix @ phi[x]))
        J_col = (2.0 / self.hbar) * flux
        J_col[x] = 0.0
        return np.maximum(J_col, 0.0) / mu_x, mu_x

    def total_rate(self, x: int, t: float) -> float:
        sigma, mu_x = self.column_rates(x, t)
        if mu_x <= self.node_eps:
            return float("inf")
        return float(sigma.sum())

    def distance(self, q: int, q2: int) -> float:
        return float(np.sum(np.abs(self.positions[q] - self.positions[q2])))

    def initial_measure(self) -> np.ndarray:
        return self.measure(self.t0)
