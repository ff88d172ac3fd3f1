"""
Model cards: human-readable facts about a built system.
"""

from typing import Any, Dict, Union

import numpy as np

from .dirac import DiracSystem
from .system import QuantumSystem


def describe_system(system: Union[QuantumSystem, DiracSystem]) -> Dict[str, Any]:
    """Dimensions, Hamiltonian structure and analytically known nodes."""
    if isinstance(system, DiracSystem):
        spec = system.spec
        return {
            "model": "dirac",
            "dimension": 2 * spec.L,
            "grid_points": spec.L,
            "spacing": spec.eps,
            "mass": spec.mass,
            "speed_of_light": spec.c,
            "hamiltonian": "c*hbar*k*sigma_x + m*c^2*sigma_z per Fourier mode",
            "boundary": "periodic",
            "nodes": "not known in closed form",
        }
    card = {
        "model": system.name,
        "dimension": system.D,
        "hilbert_dimension": system.H.dim,
        "hbar": system.hbar,
        "spectrum": [float(np.min(system.H.eigenvalues)), float(np.max(system.H.eigenvalues))],
    }
    for key, value in system.info.items():
        if key == "basis":
            continue
        card[key] = value
    if system.parts:
        card["parts"] = sorted(system.parts)
    return card
