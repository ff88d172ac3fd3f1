"""
Two-level Rabi fixture: H = omega * sigma_x, psi0 = (1, 0).

Closed forms (hbar = 1): mu_t = (cos^2 wt, sin^2 wt), J_t(2, 1) = w sin 2wt,
sigma_t(2, 1) = 2w tan wt on (0, pi/(2w)). Configuration 1 is a node at
t = pi/(2w).
"""

import math
from typing import Optional

import numpy as np

from ..config import get_config
from ..errors import ModelConfigurationError
from ..quantum import ConfigSpace, HermitianOperator, Povm, StateVector
from .system import QuantumSystem


def build_two_level(omega: float = 1.0, hbar: Optional[float] = None, t0: float = 0.0) -> QuantumSystem:
    if not omega > 0:
        raise ModelConfigurationError(f"omega must be positive, got {omega}")
    hbar = get_config()["hbar"] if hbar is None else hbar
    H = HermitianOperator.from_matrix(omega * np.array([[0.0, 1.0], [1.0, 0.0]]))
    return QuantumSystem(
        name="two_level",
        space=ConfigSpace((1, 2)),
        H=H,
        povm=Povm.singletons(2),
        psi0=StateVector(np.array([1.0, 0.0]), hbar),
        t0=t0,
        positions=np.array([[0.0], [1.0]]),
        info={
            "omega": omega,
            "hamiltonian": "omega * sigma_x",
            "nodes": [{"config": 1, "time": t0 + math.pi * hbar / (2.0 * omega)}],
        },
    )
