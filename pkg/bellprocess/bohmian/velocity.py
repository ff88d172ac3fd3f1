"""
Bohmian and Bohm-Dirac velocity fields.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Protocol

import numpy as np

from ..config import get_config
from ..errors import SingularPointError
from ..models.dirac import DiracSystem


class Wavefunction(Protocol):
    mass: float
    hbar: float

    def psi(self, x, t: float) -> np.ndarray: ...

    def gradient(self, x, t: float) -> np.ndarray: ...


class VelocityKind(str, Enum):
    BOHM = "BOHM"
    BOHM_DIRAC = "BOHM_DIRAC"


def _guard(x: np.ndarray, t: float, density: np.ndarray, node_eps: float):
    low = density <= node_eps
    if np.any(low):
        i = int(np.argmax(low))
        raise SingularPointError(float(x.reshape(-1)[i]), t, float(density.reshape(-1)[i]))


def bohm_velocity(wave: Wavefunction, x, t: float, node_eps: Optional[float] = None) -> np.ndarray:
    """v = (hbar/m) Im(psi* dpsi / psi* psi), elementwise in x."""
    node_eps = get_config()["node_eps"] if node_eps is None else node_eps
    xs = np.asarray(x, dtype=float)
    psi = wave.psi(xs, t)
    density = np.abs(psi) ** 2
    _guard(np.atleast_1d(xs), t, np.atleast_1d(density), node_eps)
    return (wave.hbar / wave.mass) * np.imag(np.conj(psi) * wave.gradient(xs, t)) / density


def bohm_dirac_velocity(dirac: DiracSystem, x, t: float, node_eps: Optional[float] = None) -> np.ndarray:
    """v = c (psi* sigma_x psi) / (psi* psi); bounded by c in magnitude."""
    node_eps = get_config()["node_eps"] if node_eps is None else node_eps
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    spinor = dirac.spinor_at(xs, t)
    density = np.sum(np.abs(spinor) ** 2, axis=1)
    _guard(xs, t, density, node_eps)
    flux = 2.0 * np.real(np.conj(spinor[:, 0]) * spinor[:, 1])
    return (dirac.c * flux / density).reshape(np.shape(x))


@dataclass(frozen=True)
class VelocityField:
    """A velocity field (x, t) -> v together with its kind."""

    kind: VelocityKind
    evaluate: Callable[[np.ndarray, float], np.ndarray]
    c: Optional[float] = None

    def __call__(self, x, t: float) -> np.ndarray:
        return self.evaluate(x, t)

    @classmethod
    def bohm(cls, wave: Wavefunction, node_eps: Optional[float] = None) -> "VelocityField":
        return cls(VelocityKind.BOHM, lambda x, t: bohm_velocity(wave, x, t, node_eps))

    @classmethod
    def bohm_dirac(cls, dirac: DiracSystem, node_eps: Optional[float] = None) -> "VelocityField":
        return cls(
            VelocityKind.BOHM_DIRAC,
            lambda x, t: bohm_dirac_velocity(dirac, x, t, node_eps),
            c=dirac.c,
        )
