"""Exception hierarchy shared by all ferrimagnon modules."""


class FerrimagnonError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(FerrimagnonError, ValueError):
    """Matrix has the wrong shape for the requested operation."""


class ConvergenceError(FerrimagnonError, ArithmeticError):
    """A numerical kernel failed to converge."""


class SingularSystemError(FerrimagnonError, ArithmeticError):
    """A linear system that must be regular turned out singular."""


class ModelError(FerrimagnonError, ValueError):
    """Physical parameters fall outside the model's validity range."""


class SingularTransformError(ModelError):
    """The two-mode squeezing (Bogoliubov) transform does not exist."""


class InstabilityError(FerrimagnonError):
    """The drift matrix has an eigenvalue with non-negative real part."""


class MarginalStabilityError(InstabilityError):
    """The stability margin is too small for a reliable steady state."""


class UnphysicalStateError(FerrimagnonError, ValueError):
    """A covariance matrix violates the uncertainty principle."""


class DegenerateSpectrumError(FerrimagnonError):
    """Fewer distinct eigenfrequencies than modes."""


class ConfigError(FerrimagnonError, ValueError):
    """A sweep configuration could not be parsed or validated."""
