"""Typed errors raised by the simulation library.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical failures with 3, and I/O failures with 4.
"""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class SingularAttitude(SimulationError):
    """Pitch is inside the guard band around +-pi/2 where the Euler-angle
    rate transform loses rank. Raised instead of returning Inf."""


class NotPositiveDefinite(SimulationError):
    """Symmetric factorization of the generalized mass matrix failed,
    which signals an unphysical parameter set (for example m_p = 0)."""


class SingularMatrix(SimulationError):
    """A linear solve failed outright, or its residual check failed."""


class NotNeutrallyBuoyant(SimulationError):
    """Restoring-force expressions here assume weight equals buoyancy."""


class GridMismatch(SimulationError):
    """Two trajectories were compared on different time grids."""


class ConfigError(SimulationError):
    """Base class for configuration-file problems."""


class ParseError(ConfigError):
    """The configuration text is not well formed."""


class ValidationError(ConfigError):
    """The configuration parsed but violates a physical or structural
    invariant; the message names the invariant."""


class OutputError(SimulationError):
    """Trajectory or metadata output could not be written or read."""
