"""
Finite-dimensional quantum kinematics: configuration spaces, state vectors,
Hamiltonians with cached spectral data, and POVMs over configurations.

All containers are frozen dataclasses holding read-only numpy arrays, so
they can be shared between worker threads without copying.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Hashable, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..config import get_config
from ..errors import DimensionMismatchError, ModelConfigurationError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ConfigSpace:
    """Enumerated configuration space: opaque hashable labels <-> 0..D-1."""

    labels: Tuple[Hashable, ...]
    index: Dict[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ModelConfigurationError("configuration space must contain at least one configuration")
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != len(labels):
            raise ModelConfigurationError("configuration labels must be distinct")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "index", index)

    @property
    def D(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index_of(self, label: Hashable) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise KeyError(f"unknown configuration {label!r}") from None

    def label_of(self, i: int) -> Hashable:
        return self.labels[i]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitudes together with the value of hbar."""

    amps: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size == 0 or not np.all(np.isfinite(amps)):
            raise ModelConfigurationError("state amplitudes must be finite and non-empty")
        if not self.hbar > 0:
            raise ModelConfigurationError(f"hbar must be positive, got {self.hbar}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ModelConfigurationError(f"state is not normalized (norm={norm:.15g})")
        object.__setattr__(self, "amps", _frozen(amps))

    @classmethod
    def from_amplitudes(cls, values: Iterable[complex], hbar: Optional[float] = None) -> "StateVector":
        """Normalize arbitrary amplitudes; zero or non-finite input is rejected."""
        amps = np.asarray(values, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps) if amps.size else 0.0
        if not np.isfinite(norm) or norm == 0.0:
            raise ModelConfigurationError("amplitudes are not normalizable")
        return cls(amps / norm, get_config()["hbar"] if hbar is None else hbar)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense self-adjoint matrix with its eigendecomposition cached."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_matrix(cls, matrix, dimension_cap: Optional[int] = None) -> "HermitianOperator":
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"Hamiltonian must be square, got shape {m.shape}")
        cap = get_config()["dimension_cap"] if dimension_cap is None else dimension_cap
        if m.shape[0] > cap:
            raise ModelConfigurationError(f"dimension {m.shape[0]} exceeds cap {cap}")
        if not np.all(np.isfinite(m)):
            raise ModelConfigurationError("Hamiltonian entries must be finite")
        m = 0.5 * (m + m.conj().T)
        eigenvalues, eigenvectors = np.linalg.eigh(m)
        return cls(_frozen(m), _frozen(eigenvalues), _frozen(eigenvectors))

    @classmethod
    def zeros(cls, n: int) -> "HermitianOperator":
        return cls.from_matrix(np.zeros((n, n)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def reconstruction_defect(self) -> float:
        """Relative max-norm error of V diag(lambda) V^dagger against the stored matrix."""
        v = self.eigenvectors
        rebuilt = (v * self.eigenvalues) @ v.conj().T
        scale = max(float(np.max(np.abs(self.matrix), initial=0.0)), 1.0)
        return float(np.max(np.abs(rebuilt - self.matrix), initial=0.0)) / scale

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if self.dim != other.dim:
            raise DimensionMismatchError(f"cannot add operators of dimension {self.dim} and {other.dim}")
        return HermitianOperator.from_matrix(self.matrix + other.matrix)


class PovmKind(str, Enum):
    PARTITION = "partition"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive-operator-valued measure over an enumerated configuration space.

    PARTITION stores, for each configuration, the basis indices it owns;
    GENERAL stores explicit positive matrices, one per configuration.
    """

    kind: PovmKind
    dim: int
    blocks: Optional[Tuple[np.ndarray, ...]] = None
    elements: Optional[np.ndarray] = None
    owner: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def partition(cls, blocks: Sequence[Sequence[int]], dim: int) -> "Povm":
        owner = np.full(dim, -1, dtype=np.int64)
        frozen_blocks = []
        for q, block in enumerate(blocks):
            idx = np.asarray(block, dtype=np.int64).reshape(-1)
            if idx.size == 0:
                raise ModelConfigurationError(f"configuration {q} owns no basis index")
            if np.any(idx < 0) or np.any(idx >= dim):
                raise ModelConfigurationError(f"configuration {q} owns an index outside 0..{dim - 1}")
            if np.any(owner[idx] != -1) or len(np.unique(idx)) != idx.size:
                raise ModelConfigurationError("partition blocks must be disjoint")
            owner[idx] = q
            frozen_blocks.append(_frozen(idx))
        if np.any(owner == -1):
            raise ModelConfigurationError("partition blocks must cover every basis index")
        return cls(PovmKind.PARTITION, dim, blocks=tuple(frozen_blocks), owner=_frozen(owner))

    @classmethod
    def singletons(cls, dim: int) -> "Povm":
        """Each basis vector is its own configuration."""
        return cls.partition([[i] for i in range(dim)], dim)

    @classmethod
    def general(cls, elements, tol: float = NORM_TOL) -> "Povm":
        ops = np.array(elements, dtype=np.complex128)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise DimensionMismatchError(f"POVM elements must have shape (D, n, n), got {ops.shape}")
        ops = 0.5 * (ops + np.conj(np.transpose(ops, (0, 2, 1))))
        n = ops.shape[1]
        for q, op in enumerate(ops):
            if np.min(np.linalg.eigvalsh(op)) < -tol:
                raise ModelConfigurationError(f"POVM element {q} is not positive semidefinite")
        if np.max(np.abs(ops.sum(axis=0) - np.eye(n))) > tol:
            raise ModelConfigurationError("POVM elements do not sum to the identity")
        return cls(PovmKind.GENERAL, n, elements=_frozen(ops))

    @property
    def D(self) -> int:
        return len(self.blocks) if self.kind is PovmKind.PARTITION else self.elements.shape[0]

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """Rows are P(q) psi for every configuration q, shape (D, n)."""
        if amps.shape[0] != self.dim:
            raise DimensionMismatchError(f"state dimension {amps.shape[0]} != POVM dimension {self.dim}")
        if self.kind is PovmKind.PARTITION:
            phi = np.zeros((self.D, self.dim), dtype=np.complex128)
            phi[self.owner, np.arange(self.dim)] = amps
            return phi
        return self.elements @ amps

    def identity_defect(self) -> float:
        if self.kind is PovmKind.PARTITION:
            return 0.0
        return float(np.max(np.abs(self.elements.sum(axis=0) - np.eye(self.dim))))
