"""
Exception hierarchy for the bellprocess package.
"""

from typing import Any, Optional


class BellProcessError(Exception):
    """Base class for all errors raised by bellprocess."""


class DimensionMismatchError(BellProcessError, ValueError):
    """Operator, state and POVM dimensions do not agree."""


class ModelConfigurationError(BellProcessError, ValueError):
    """Model parameters that cannot be turned into a system."""


class PreconditionError(BellProcessError):
    """A diagnostic was asked to run outside its preconditions."""


class InconsistentRatesError(BellProcessError):
    """The hazard signalled a jump but no destination carries a positive rate."""


class QuadratureError(BellProcessError):
    """A diagnostic integral did not converge."""


class NodeGuardError(BellProcessError):
    """The sampled process sits on a configuration whose weight fell below the node threshold."""

    def __init__(self, config: Any, time: float, mu: float, message: Optional[str] = None):
        self.config = config
        self.time = time
        self.mu = mu
        super().__init__(
            message
            or f"configuration {config!r} reached node threshold at t={time:.12g} (mu={mu:.3e})"
        )


class SingularPointError(BellProcessError):
    """A Bohmian velocity was requested at a node of the wavefunction."""

    def __init__(self, position: float, time: float, density: float):
        self.position = position
        self.time = time
        self.density = density
        super().__init__(
            f"velocity field is singular at x={position:.12g}, t={time:.12g} (density={density:.3e})"
        )
