"""Exception types raised by dickestat."""


class DickestatError(Exception):
    """Base class for all package errors."""


class ConfigError(DickestatError, ValueError):
    """An invalid physical configuration or run configuration."""


class ParityMismatch(ConfigError):
    """2J and 2M do not have the same parity."""


class RangeError(ConfigError):
    """A quantum number or count lies outside its allowed range."""


class DimensionError(ConfigError):
    """The requested problem is too large for the brute-force model."""


class CoefficientOverflow(DickestatError, OverflowError):
    """A Hamiltonian coefficient cannot be represented as a float."""


class ConvergenceFailure(DickestatError, RuntimeError):
    """The tridiagonal eigensolver did not converge."""

    def __init__(self, dimension, info, message=""):
        self.dimension = dimension
        self.info = info
        super().__init__(
            f"eigensolver failed for dimension {dimension} (LAPACK info={info})"
            + (f": {message}" if message else "")
        )


class StepFailure(DickestatError, RuntimeError):
    """The adaptive integrator step size underflowed."""


class AllUndefined(DickestatError, ValueError):
    """Mandel-Q was undefined at every time point (no emission possible)."""
