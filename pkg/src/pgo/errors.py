"""Exception hierarchy for the pgo package."""


class PgoError(Exception):
    """Base class for all pgo-specific errors."""


class ConfigError(PgoError):
    """A run configuration is structurally or semantically invalid."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + message)


class ComputationError(PgoError):
    """Base class for failures of the numerical pipeline on a valid config."""


class TailNotPositive(ComputationError):
    """The truncated Taylor tail coefficient of r^(2(2s+1)) is not positive.

    No real decaying exponent polynomial exists at this truncation; the caller
    must change the truncation order or the potential parameters.
    """


class WrongTruncation(ComputationError):
    """The exponent system only closes for n_trunc = 2s+1."""


class MethodMismatch(ComputationError):
    """A level was found by one spectral method and not the other."""


class NotAnEigenvalue(ComputationError):
    """The requested energy is not a root of the quantization determinant."""


class NonNormalizable(ComputationError):
    """The norm integral diverges at the origin for this indicial branch."""


class NoBarrier(ComputationError):
    """The energy is at or above the potential maximum: transmission is 1."""


class StepTooLarge(ComputationError):
    """Fewer than two potential steps fit between the turning points."""


class NoSignChange(ComputationError):
    """The shooting discriminant does not change sign over the bracket."""


class GridTooCoarse(ComputationError):
    """Richardson extrapolation disagreement above tolerance."""
