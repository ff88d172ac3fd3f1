"""
Deterministic identities of the minimal rates, checked at a set of times.
"""

import logging
from typing import Dict, Iterable, Sequence

import numpy as np

from ..errors import PreconditionError
from ..models.system import QuantumSystem
from ..quantum import PovmKind, sandwich
from .report import BoundReport, GateKind

logger = logging.getLogger(__name__)

STRUCTURAL_TOL = 1e-10


def _block_support(system: QuantumSystem, matrix: np.ndarray) -> np.ndarray:
    """Boolean (D, D): True where the block P(q) H P(q') is non-zero, diagonal excluded."""
    blocks = system.povm.blocks
    support = np.zeros((system.D, system.D), dtype=bool)
    for q, rows in enumerate(blocks):
        for q2, cols in enumerate(blocks):
            if q != q2:
                support[q, q2] = np.max(np.abs(matrix[np.ix_(rows, cols)])) > 0.0
    return support


def check_disjoint_supports(system: QuantumSystem) -> None:
    if len(system.parts) < 2:
        raise PreconditionError(f"{system.name} does not name the parts of its Hamiltonian")
    if system.povm.kind is not PovmKind.PARTITION:
        raise PreconditionError("support comparison needs a partition POVM")
    supports = [_block_support(system, part.matrix) for part in system.parts.values()]
    overlap = np.sum(supports, axis=0) > 1
    if np.any(overlap):
        q, q2 = np.argwhere(overlap)[0]
        raise PreconditionError(
            f"parts overlap off the diagonal at ({system.space.label_of(q)!r}, {system.space.label_of(q2)!r})"
        )


def additivity_check(system: QuantumSystem, times: Iterable[float] = (0.5,)) -> float:
    """max |sigma(sum of parts) - sum of sigma(part)| over regular columns, psi_t evolved under the full H."""
    check_disjoint_supports(system)
    deviation = 0.0
    for t in times:
        full = system.rates(t)
        summed = sum(system.rates(t, H=part).sigma for part in system.parts.values())
        regular = full.regular
        if np.any(regular):
            deviation = max(deviation, float(np.max(np.abs(full.sigma[:, regular] - summed[:, regular]))))
    return deviation


def _defects_at(system: QuantumSystem, t: float) -> Dict[str, float]:
    psi = system.state(t)
    raw = (2.0 / system.hbar) * np.imag(sandwich(psi, system.H, system.povm))
    np.fill_diagonal(raw, 0.0)
    J = system.current(t).J
    mu = system.measure(t)
    kernel = system.rates(t)
    regular = kernel.regular
    pair = np.outer(regular, regular)
    np.fill_diagonal(pair, False)
    sigma = np.where(pair, kernel.sigma, 0.0)
    detailed = sigma * mu[None, :] - sigma.T * mu[:, None] - J
    # gain from regular sources minus loss at rate total; node columns carry no mass
    gain = np.where(regular[None, :], np.nan_to_num(kernel.sigma), 0.0) @ mu
    loss = np.where(regular, kernel.total, 0.0) * mu
    balance = np.where(regular, system.measure_derivative(t) - (gain - loss), 0.0)
    # sampler fast path against the kernel, compared as fluxes sigma * mu
    fast_path = [
        mu[x] * np.max(np.abs(system.column_rates(x, t)[0] - kernel.rate_to(x)), initial=0.0)
        for x in np.flatnonzero(regular)
    ]
    return {
        "antisymmetry": float(np.max(np.abs(raw + raw.T), initial=0.0)),
        "detailed_current": float(np.max(np.abs(np.where(pair, detailed, 0.0)), initial=0.0)),
        "minimality": float(np.max(np.abs(sigma * sigma.T), initial=0.0)),
        "master_equation": float(np.max(np.abs(balance), initial=0.0)),
        "column_rates": float(max(fast_path, default=0.0)),
        "norm": abs(float(np.linalg.norm(system.amps(t))) - 1.0),
    }


def structural_check(system: QuantumSystem, times: Sequence[float], tol: float = STRUCTURAL_TOL) -> BoundReport:
    """Worst relative defect of the current/rate identities over ``times``.

    Defects are divided by max(1, max|J|) except the norm defect.
    """
    worst: Dict[str, float] = {}
    for t in times:
        scale = max(1.0, float(np.max(np.abs(system.current(t).J), initial=0.0)))
        for name, value in _defects_at(system, t).items():
            scaled = value if name == "norm" else value / scale
            worst[name] = max(worst.get(name, 0.0), scaled)
    if len(system.parts) >= 2:
        worst["additivity"] = additivity_check(system, times)
    logger.debug("structural defects of %s: %s", system.name, worst)
    return BoundReport.gate(GateKind.UPPER, max(worst.values()), 0.0, abs_tol=tol, **worst)
