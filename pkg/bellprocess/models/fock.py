"""
Bosonic lattice Fock model with creation and annihilation near fixed sources.

Configurations are occupation lists q over the lattice with total number at
most n_max. H = H0 + HI where H0 is the second-quantized lattice Laplacian
(particle-number preserving hopping) and HI links q and q + e_x with
amplitude sqrt(#q + 1) * sum_{y in sources} phi(x - y).
"""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..config import get_config
from ..errors import ModelConfigurationError
from ..quantum import ConfigSpace, HermitianOperator, Povm, StateVector
from .lattice import LatticeSpec
from .system import QuantumSystem

Occupation = Tuple[int, ...]


class FockInitial(str, Enum):
    VACUUM = "vacuum"
    SINGLE = "single"
    SUPERPOSITION = "superposition"


class FockSpec(BaseModel):
    """Lattice, particle-number cutoff, sources and form factor."""

    lattice: LatticeSpec
    n_max: int = Field(2, ge=1)
    sources: List[int] = Field(default_factory=lambda: [1])
    radius: int = Field(1, ge=0, description="Form factor radius delta in sites")
    coupling: float = Field(0.1, description="Form factor amplitude g")
    hopping: Optional[float] = Field(None, description="Override of hbar^2/(2 m_ph eps^2)")
    mass_ph: Optional[float] = Field(None, gt=0, description="Boson mass; defaults to the lattice mass")
    initial: FockInitial = FockInitial.SUPERPOSITION

    @model_validator(mode="after")
    def _check_sources(self):
        if not self.sources:
            raise ValueError("at least one source site is required")
        bad = [s for s in self.sources if not 0 <= s < self.lattice.L]
        if bad:
            raise ValueError(f"source sites {bad} lie outside 0..{self.lattice.L - 1}")
        if self.lattice.spin_dim() != 1:
            raise ValueError("the Fock model takes a scalar on-site potential")
        return self

    def form_factor(self, d: int) -> float:
        """Truncated triangular bump of radius ``radius`` and height ``coupling``."""
        if abs(d) > self.radius:
            return 0.0
        return self.coupling * (1.0 - abs(d) / (self.radius + 1.0))

    def source_profile(self) -> np.ndarray:
        """Phi(x) = sum over sources y of phi(x - y)."""
        return np.array(
            [sum(self.form_factor(x - y) for y in self.sources) for x in range(self.lattice.L)]
        )

    def hopping_amplitude(self, hbar: float) -> float:
        if self.hopping is not None:
            return self.hopping
        mass = self.mass_ph or self.lattice.mass
        return hbar**2 / (2.0 * mass * self.lattice.eps**2)


def fock_dimension(L: int, n_max: int) -> int:
    """Number of multisets of size at most n_max over L sites."""
    return math.comb(L + n_max, n_max)


@dataclass(frozen=True, eq=False)
class FockBasis:
    configs: Tuple[Occupation, ...]
    lookup: Dict[Occupation, int] = field(repr=False)

    @classmethod
    def enumerate(cls, L: int, n_max: int) -> "FockBasis":
        configs = []
        for n in range(n_max + 1):
            for sites in itertools.combinations_with_replacement(range(L), n):
                occ = [0] * L
                for s in sites:
                    occ[s] += 1
                configs.append(tuple(occ))
        return cls(tuple(configs), {q: i for i, q in enumerate(configs)})

    def __len__(self) -> int:
        return len(self.configs)

    def number(self, i: int) -> int:
        return sum(self.configs[i])


def free_hamiltonian(basis: FockBasis, spec: FockSpec, hbar: float) -> np.ndarray:
    """Bosonic hopping -t (a^dag_y a_x + h.c.) plus 2t N and the on-site potential."""
    t_hop = spec.hopping_amplitude(hbar)
    L = spec.lattice.L
    V = spec.lattice.potential_blocks().reshape(L)
    H0 = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for i, q in enumerate(basis.configs):
        H0[i, i] = 2.0 * t_hop * sum(q) + float(np.dot(V, q))
        for x in range(L):
            if q[x] == 0:
                continue
            for y in (x - 1, x + 1):
                if not 0 <= y < L:
                    continue
                q2 = list(q)
                q2[x] -= 1
                q2[y] += 1
                j = basis.lookup[tuple(q2)]
                H0[j, i] += -t_hop * math.sqrt(q[x]) * math.sqrt(q[y] + 1)
    return H0


def interaction_hamiltonian(basis: FockBasis, spec: FockSpec) -> np.ndarray:
    """Creation elements <q + e_x|HI|q> = sqrt(#q + 1) Phi(x) and their Hermitian conjugates."""
    profile = spec.source_profile()
    HI = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for i, q in enumerate(basis.configs):
        n = sum(q)
        if n >= spec.n_max:
            continue
        for x, phi_x in enumerate(profile):
            if phi_x == 0.0:
                continue
            q2 = list(q)
            q2[x] += 1
            j = basis.lookup[tuple(q2)]
            HI[j, i] = math.sqrt(n + 1) * phi_x
            HI[i, j] = np.conj(HI[j, i])
    return HI


def _initial_amplitudes(basis: FockBasis, spec: FockSpec) -> np.ndarray:
    L = spec.lattice.L
    vacuum = basis.lookup[(0,) * L]
    single = list((0,) * L)
    single[spec.sources[0]] = 1
    amps = np.zeros(len(basis), dtype=np.complex128)
    if spec.initial is FockInitial.VACUUM:
        amps[vacuum] = 1.0
    elif spec.initial is FockInitial.SINGLE:
        amps[basis.lookup[tuple(single)]] = 1.0
    else:
        amps[vacuum] = 1.0
        amps[basis.lookup[tuple(single)]] = 1.0
    return amps / np.linalg.norm(amps)


def build_fock(spec: FockSpec, psi0_amplitudes=None, t0: float = 0.0) -> QuantumSystem:
    """Fock system with parts H0 and HI; ``psi0_amplitudes`` overrides ``spec.initial``."""
    hbar = spec.lattice.hbar or get_config()["hbar"]
    cap = get_config()["dimension_cap"]
    dim = fock_dimension(spec.lattice.L, spec.n_max)
    if dim > cap:
        raise ModelConfigurationError(
            f"Fock dimension {dim} (L={spec.lattice.L}, n_max={spec.n_max}) exceeds cap {cap}"
        )
    basis = FockBasis.enumerate(spec.lattice.L, spec.n_max)
    H0 = HermitianOperator.from_matrix(free_hamiltonian(basis, spec, hbar))
    HI = HermitianOperator.from_matrix(interaction_hamiltonian(basis, spec))
    if psi0_amplitudes is None:
        psi0 = StateVector(_initial_amplitudes(basis, spec), hbar)
    else:
        psi0 = StateVector.from_amplitudes(psi0_amplitudes, hbar)
    occupations = np.array(basis.configs, dtype=float) * spec.lattice.eps
    return QuantumSystem(
        name="fock",
        space=ConfigSpace(basis.configs),
        H=H0 + HI,
        povm=Povm.singletons(len(basis)),
        psi0=psi0,
        t0=t0,
        positions=occupations,
        parts={"H0": H0, "HI": HI},
        info={
            "hamiltonian": "H0 (bosonic hopping) + HI (creation/annihilation near sources)",
            "sites": spec.lattice.L,
            "n_max": spec.n_max,
            "sources": list(spec.sources),
            "form_factor": spec.source_profile().tolist(),
            "statistics": "bosonic",
            "boundary": "dirichlet",
            "basis": basis,
            "nodes": [],
        },
    )
