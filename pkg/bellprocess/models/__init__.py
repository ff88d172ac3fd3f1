"""
Builders for the concrete systems: Rabi fixture, lattice particle, lattice
Fock model with sources, and the free 1+1D Dirac field.
"""

from .system import QuantumSystem
from .two_level import build_two_level
from .lattice import LatticeSpec, build_lattice_particle, laplacian
from .fock import FockBasis, FockInitial, FockSpec, build_fock, fock_dimension
from .dirac import DiracSpec, DiracSystem, build_dirac
from .catalog import describe_system

__all__ = [
    "QuantumSystem",
    "build_two_level",
    "LatticeSpec",
    "build_lattice_particle",
    "laplacian",
    "FockBasis",
    "FockInitial",
    "FockSpec",
    "build_fock",
    "fock_dimension",
    "DiracSpec",
    "DiracSystem",
    "build_dirac",
    "describe_system",
]
