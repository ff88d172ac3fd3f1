"""
Single particle on a 1D lattice: H = -hbar^2/(2m) Laplacian_eps + V.

The Laplacian is the second difference with Dirichlet ends. The potential
is either one real value per site or one real symmetric k x k block per
site, in which case every site owns k basis indices.
"""

from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..config import get_config
from ..errors import ModelConfigurationError
from ..quantum import ConfigSpace, HermitianOperator, Povm, StateVector
from .system import QuantumSystem


class LatticeSpec(BaseModel):
    """Lattice geometry, particle mass and on-site potential."""

    L: int = Field(..., ge=2, description="Number of sites")
    eps: float = Field(..., gt=0, description="Lattice spacing")
    mass: float = Field(1.0, gt=0, description="Particle mass")
    potential: Optional[Union[List[float], List[List[List[float]]]]] = Field(
        None, description="Per-site value or per-site real symmetric k x k block"
    )
    origin: Optional[float] = Field(None, description="Coordinate of site 0; default puts 0 on a site")
    hbar: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _check_potential(self):
        if self.potential is not None and len(self.potential) != self.L:
            raise ValueError(f"potential has {len(self.potential)} entries for {self.L} sites")
        return self

    @property
    def x0(self) -> float:
        return -(self.L // 2) * self.eps if self.origin is None else self.origin

    def sites(self) -> np.ndarray:
        return self.x0 + self.eps * np.arange(self.L)

    def spin_dim(self) -> int:
        if self.potential is None or not isinstance(self.potential[0], list):
            return 1
        return len(self.potential[0])

    def potential_blocks(self) -> np.ndarray:
        k = self.spin_dim()
        if self.potential is None:
            return np.zeros((self.L, k, k))
        if k == 1 and not isinstance(self.potential[0], list):
            return np.asarray(self.potential, dtype=float).reshape(self.L, 1, 1)
        blocks = np.asarray(self.potential, dtype=float)
        if blocks.shape != (self.L, k, k):
            raise ModelConfigurationError(f"potential blocks must have shape ({self.L}, {k}, {k})")
        if np.max(np.abs(blocks - np.transpose(blocks, (0, 2, 1)))) > 1e-12:
            raise ModelConfigurationError("potential blocks must be symmetric")
        return blocks


def laplacian(L: int, eps: float) -> np.ndarray:
    """(f(x+eps) - 2 f(x) + f(x-eps)) / eps^2 with f = 0 beyond both ends."""
    lap = np.diag(np.full(L, -2.0)) + np.diag(np.ones(L - 1), 1) + np.diag(np.ones(L - 1), -1)
    return lap / eps**2


def lattice_hamiltonian(spec: LatticeSpec, hbar: float) -> np.ndarray:
    k = spec.spin_dim()
    kinetic = -(hbar**2) / (2.0 * spec.mass) * laplacian(spec.L, spec.eps)
    H = np.kron(kinetic, np.eye(k)).astype(np.complex128)
    blocks = spec.potential_blocks()
    for j in range(spec.L):
        H[j * k:(j + 1) * k, j * k:(j + 1) * k] += blocks[j]
    return H


def build_lattice_particle(spec: LatticeSpec, psi0_profile, t0: float = 0.0) -> QuantumSystem:
    """Lattice system with initial amplitudes proportional to ``psi0_profile``.

    The profile has one value per site, or shape (L, k) for spinor potentials.
    """
    hbar = spec.hbar or get_config()["hbar"]
    k = spec.spin_dim()
    profile = np.asarray(psi0_profile, dtype=np.complex128)
    if profile.shape not in ((spec.L,), (spec.L, k)) or (profile.ndim == 1 and k != 1):
        raise ModelConfigurationError(f"profile shape {profile.shape} does not fit {spec.L} sites x {k} components")
    amps = profile.reshape(-1)
    norm = np.linalg.norm(amps)
    if not np.isfinite(norm) or norm == 0.0:
        raise ModelConfigurationError("initial profile is not normalizable")
    sites = spec.sites()
    return QuantumSystem(
        name="lattice_1d",
        space=ConfigSpace(tuple(range(spec.L))),
        H=HermitianOperator.from_matrix(lattice_hamiltonian(spec, hbar)),
        povm=Povm.partition([range(j * k, (j + 1) * k) for j in range(spec.L)], spec.L * k),
        psi0=StateVector(amps / norm, hbar),
        t0=t0,
        positions=sites.reshape(-1, 1),
        info={
            "hamiltonian": "-hbar^2/(2m) Laplacian_eps + V (Dirichlet ends)",
            "sites": spec.L,
            "spacing": spec.eps,
            "spin_components": k,
            "boundary": "dirichlet",
            "nodes": [],
        },
    )
