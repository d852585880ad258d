"""Domain errors for the surrogate toolkit."""
from typing import Optional


class SurrogateError(ValueError):
    """Root of all domain errors raised by the toolkit."""


class DataError(SurrogateError):
    """Input data, model file or numerical problem (CLI exit code 2)."""


class ZeroVariance(DataError):
    """Response values are all identical, so the relative error is undefined."""


class LengthMismatch(DataError):
    """Two sequences that must be paired have different lengths."""


class InsufficientData(DataError):
    """Requested split counts exceed the dataset size."""


class DimensionMismatch(DataError):
    """Point dimension does not match the dimension a model was built for."""


class NonFiniteInput(DataError):
    """NaN or Inf found in numerical input."""


class SingularSystem(DataError):
    """Normal equations cannot be factorized (unregularized rank-deficient system)."""


class DegenerateKernel(DataError):
    """No kernel eigenvalue survives the eigen floor."""


class NonFiniteLoss(DataError):
    """A loss value handed to the swarm is NaN or otherwise not usable."""


class AllParticlesFailed(DataError):
    """Every particle of one swarm iteration produced a failed evaluation."""


class AllDimensionsFailed(DataError):
    """No candidate latent dimension produced a surrogate."""


class DomainViolation(DataError):
    """G-function input outside the unit cube."""


class DimTooSmall(DataError):
    """Requested dimension is too small for the operation."""


class UnsupportedDimension(DataError):
    """Dimension outside the range of the Sobol direction-number table."""


class ParseError(DataError):
    """CSV cell could not be parsed as a finite number."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = f" (row {row}, column {column})" if row is not None else ""
        super().__init__(f"{message}{location}")
        self.row = row
        self.column = column


class MissingResponseColumn(DataError):
    """CSV has no final `y` column."""


class VersionMismatch(DataError):
    """Model file was written by an incompatible format version."""


class CorruptFile(DataError):
    """Model file is truncated, malformed or fails its checksum."""
