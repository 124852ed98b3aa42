"""Exception hierarchy shared by all sgqpt modules."""


class SGQPTError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(SGQPTError, ValueError):
    """A numeric parameter is non-finite or outside its allowed range."""


class InvalidInputError(SGQPTError, ValueError):
    """An array argument violates a structural invariant (shape, unitarity, ...)."""


class IllConditionedError(SGQPTError, ValueError):
    """A matrix is too degenerate for the requested operation."""


class DecompositionError(SGQPTError, RuntimeError):
    """Waveplate solver failed to reach the requested residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class BudgetError(SGQPTError, ValueError):
    """Photon budget too small for the requested measurement settings."""


class ReconstructionError(SGQPTError, ValueError):
    """Tomographic data cannot be inverted to a process estimate."""


class FitDomainError(SGQPTError, ValueError):
    """Power-law fit requested on data outside its domain."""


class ConfigError(SGQPTError, ValueError):
    """Experiment configuration is incomplete or inconsistent."""
