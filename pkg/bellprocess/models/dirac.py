"""
Free Dirac equation in 1+1 dimensions on a periodic grid.

alpha = sigma_x, beta = sigma_z. Each Fourier mode k evolves under the 2x2
matrix c*hbar*k*sigma_x + m*c^2*sigma_z, which is propagated exactly:
U_k(t) = cos(E t/hbar) I - i sin(E t/hbar) H_k / E, E = sqrt((c hbar k)^2 + (m c^2)^2).
Grid spinors are normalized so that sum |psi_j|^2 * eps = 1.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..config import get_config
from ..errors import ModelConfigurationError
from ..quantum import StateVector


class DiracSpec(BaseModel):
    L: int = Field(..., ge=2, description="Grid points (periodic)")
    eps: float = Field(..., gt=0)
    mass: float = Field(0.0, ge=0)
    c: float = Field(1.0, gt=0, description="Speed of light")
    origin: Optional[float] = None
    hbar: Optional[float] = Field(None, gt=0)

    @field_validator("L")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("L must be even")
        return value

    @property
    def x0(self) -> float:
        return -(self.L // 2) * self.eps if self.origin is None else self.origin

    @property
    def period(self) -> float:
        return self.L * self.eps


@dataclass(frozen=True, eq=False)
class DiracSystem:
    spec: DiracSpec
    hbar: float
    x: np.ndarray
    k: np.ndarray
    psi0: np.ndarray
    hat0: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        hat0 = np.fft.fft(self.psi0, axis=0)
        for array in (self.x, self.k, self.psi0, hat0):
            array.setflags(write=False)
        object.__setattr__(self, "hat0", hat0)

    @property
    def c(self) -> float:
        return self.spec.c

    @property
    def rest_energy(self) -> float:
        return self.spec.mass * self.spec.c**2

    def hat(self, t: float) -> np.ndarray:
        """Fourier coefficients of the spinor at time t, shape (L, 2)."""
        ck = self.spec.c * self.hbar * self.k
        mc2 = self.rest_energy
        energy = np.hypot(ck, mc2)
        phase = energy * t / self.hbar
        a, b = self.hat0[:, 0], self.hat0[:, 1]
        Ha = mc2 * a + ck * b
        Hb = ck * a - mc2 * b
        with np.errstate(invalid="ignore", divide="ignore"):
            sinc = np.where(energy > 0, np.sin(phase) / np.where(energy > 0, energy, 1.0), 0.0)
        cos = np.cos(phase)
        return np.stack([cos * a - 1j * sinc * Ha, cos * b - 1j * sinc * Hb], axis=1)

    def spinor_grid(self, t: float) -> np.ndarray:
        return np.fft.ifft(self.hat(t), axis=0)

    def _modes(self, x) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        return np.exp(1j * np.outer(xs - self.spec.x0, self.k)) / self.spec.L

    def spinor_at(self, x, t: float) -> np.ndarray:
        """Band-limited interpolation of the spinor at arbitrary points, shape (n, 2)."""
        return self._modes(x) @ self.hat(t)

    def gradient_at(self, x, t: float) -> np.ndarray:
        return self._modes(x) @ (1j * self.k[:, None] * self.hat(t))

    def density_at(self, x, t: float) -> np.ndarray:
        return np.sum(np.abs(self.spinor_at(x, t)) ** 2, axis=1)

    def state(self, t: float) -> StateVector:
        amps = self.spinor_grid(t).reshape(-1) * np.sqrt(self.spec.eps)
        return StateVector(amps / np.linalg.norm(amps), self.hbar)


def build_dirac(spec: DiracSpec, psi0_profile) -> DiracSystem:
    """Free Dirac system from grid values; a 1D profile fills the upper component."""
    hbar = spec.hbar or get_config()["hbar"]
    profile = np.asarray(psi0_profile, dtype=np.complex128)
    if profile.shape == (spec.L,):
        profile = np.stack([profile, np.zeros_like(profile)], axis=1)
    if profile.shape != (spec.L, 2):
        raise ModelConfigurationError(f"Dirac profile must have shape ({spec.L}, 2), got {profile.shape}")
    norm = np.sqrt(np.sum(np.abs(profile) ** 2) * spec.eps)
    if not np.isfinite(norm) or norm == 0.0:
        raise ModelConfigurationError("initial spinor profile is not normalizable")
    x = spec.x0 + spec.eps * np.arange(spec.L)
    k = 2.0 * np.pi * np.fft.fftfreq(spec.L, d=spec.eps)
    return DiracSystem(spec, hbar, x, k, profile / norm)
