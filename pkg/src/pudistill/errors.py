"""Exception types shared across the package.

The CLI maps these onto its stable exit codes: ConfigError -> 2,
DivergenceError -> 3, ShapeError -> 4, BudgetError -> 5.
"""


class PudistillError(Exception):
    pass


class ShapeError(PudistillError):
    """Tensor/layer extents are inconsistent with the declared contract."""


class ParameterError(PudistillError):
    """A scalar argument is outside its valid range (e.g. T <= 0)."""


class FormatError(PudistillError):
    """A binary file does not follow its declared layout."""


class CapacityError(PudistillError):
    """A draw was requested that the source set cannot supply."""


class BatchError(PudistillError):
    """An operation received an empty batch."""


class DivergenceError(PudistillError):
    """Training produced a non-finite loss or parameter."""


class BoundsError(PudistillError):
    """An index is outside the addressed collection."""


class BudgetError(PudistillError):
    """A subsample budget exceeds the available examples."""


class EvaluationError(PudistillError):
    """An evaluation was requested on unusable data (e.g. empty test set)."""


class GradCheckError(PudistillError):
    """The gradient checker hit non-finite values; carries the coordinate."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class ConfigError(PudistillError):
    """Configuration is invalid; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
