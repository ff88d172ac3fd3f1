"""
Closed-form free wavefunctions in one dimension.

A free Gaussian with initial center x0, spread s0 and mean velocity u
keeps a Gaussian density with center x0 + u t and width
s_t = s0 sqrt(1 + a^2), a = hbar t / (2 m s0^2). Its Bohmian trajectories
are the scaling law x(t) = x0 + u t + (x - x0) sqrt(1 + a^2).
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import norm

from ..config import get_config


class GaussianPacket(BaseModel):
    """Free Gaussian packet defined at t = 0."""

    model_config = ConfigDict(frozen=True)

    x0: float = 0.0
    s0: float = Field(..., gt=0, description="Initial position spread")
    u: float = Field(0.0, description="Mean velocity")
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(default_factory=lambda: get_config()["hbar"], gt=0)

    @property
    def k0(self) -> float:
        return self.mass * self.u / self.hbar

    def spreading(self, t) -> np.ndarray:
        return self.hbar * np.asarray(t, dtype=float) / (2.0 * self.mass * self.s0**2)

    def center(self, t) -> np.ndarray:
        return self.x0 + self.u * np.asarray(t, dtype=float)

    def width(self, t) -> np.ndarray:
        return self.s0 * np.sqrt(1.0 + self.spreading(t) ** 2)

    def psi(self, x, t: float) -> np.ndarray:
        a = self.spreading(t)
        y = np.asarray(x, dtype=float) - self.center(t)
        z = 1.0 + 1j * a
        envelope = (2.0 * np.pi * self.s0**2) ** -0.25 / np.sqrt(z)
        return envelope * np.exp(-(y**2) / (4.0 * self.s0**2 * z)) * np.exp(
            1j * self.k0 * (np.asarray(x, dtype=float) - 0.5 * self.u * t)
        )

    def gradient(self, x, t: float) -> np.ndarray:
        a = self.spreading(t)
        y = np.asarray(x, dtype=float) - self.center(t)
        z = 1.0 + 1j * a
        return self.psi(x, t) * (-y / (2.0 * self.s0**2 * z) + 1j * self.k0)

    def density(self, x, t: float) -> np.ndarray:
        return norm.pdf(x, loc=self.center(t), scale=self.width(t))

    def cdf(self, x, t: float) -> np.ndarray:
        return norm.cdf(x, loc=self.center(t), scale=self.width(t))

    def quantile(self, p, t: float) -> np.ndarray:
        return norm.ppf(p, loc=self.center(t), scale=self.width(t))

    def velocity(self, x, t: float) -> np.ndarray:
        """Exact Bohmian velocity u + (x - x0 - u t) * (hbar/(2 m s0^2)) * a / (1 + a^2)."""
        a = self.spreading(t)
        rate = self.hbar / (2.0 * self.mass * self.s0**2)
        return self.u + (np.asarray(x, dtype=float) - self.center(t)) * rate * a / (1.0 + a**2)

    def trajectory(self, x_start, t) -> np.ndarray:
        """Position at time t of the Bohmian path that starts at ``x_start`` at t = 0."""
        return self.center(t) + (np.asarray(x_start, dtype=float) - self.x0) * np.sqrt(
            1.0 + self.spreading(t) ** 2
        )

    def sample(self, n: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """n starting points distributed according to |psi_0|^2."""
        rng = rng or np.random.default_rng()
        return rng.normal(self.x0, self.s0, size=n)


class PlaneWave(BaseModel):
    """exp(i (k x - hbar k^2 t / 2m)); unit density everywhere."""

    model_config = ConfigDict(frozen=True)

    k: float
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(default_factory=lambda: get_config()["hbar"], gt=0)

    def psi(self, x, t: float) -> np.ndarray:
        omega = self.hbar * self.k**2 / (2.0 * self.mass)
        return np.exp(1j * (self.k * np.asarray(x, dtype=float) - omega * t))

    def gradient(self, x, t: float) -> np.ndarray:
        return 1j * self.k * self.psi(x, t)

    def density(self, x, t: float) -> np.ndarray:
        return np.ones_like(np.asarray(x, dtype=float))


class GridWavefunction:
    """A single-time snapshot sampled on a uniform grid.

    Values and derivative are linearly interpolated from the grid; the
    derivative is taken by centred differences. ``t`` is ignored.
    """

    def __init__(self, x: np.ndarray, values: np.ndarray, mass: float = 1.0, hbar: Optional[float] = None):
        self.x = np.asarray(x, dtype=float)
        self.values = np.asarray(values, dtype=np.complex128)
        if self.x.shape != self.values.shape or self.x.size < 3:
            raise ValueError("grid and values must be 1D arrays of the same length (at least 3)")
        self.mass = mass
        self.hbar = get_config()["hbar"] if hbar is None else hbar
        self._derivative = np.gradient(self.values, self.x)

    @staticmethod
    def _interp(x, grid, values):
        return np.interp(x, grid, values.real) + 1j * np.interp(x, grid, values.imag)

    def psi(self, x, t: float = 0.0) -> np.ndarray:
        return self._interp(np.asarray(x, dtype=float), self.x, self.values)

    def gradient(self, x, t: float = 0.0) -> np.ndarray:
        return self._interp(np.asarray(x, dtype=float), self.x, self._derivative)

    def density(self, x, t: float = 0.0) -> np.ndarray:
        return np.abs(self.psi(x, t)) ** 2
