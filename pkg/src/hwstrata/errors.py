"""Exception taxonomy shared across the package.

Every error raised by the library is a subclass of HwstrataError, so callers
(the service layer, the CLI) can map failures to exit codes / HTTP statuses
without string matching.
"""


class HwstrataError(Exception):
    """Base class for all library errors."""


class InvalidCharacteristic(HwstrataError):
    """Field characteristic is not an odd prime."""


class InvalidDegree(HwstrataError):
    """Extension degree must be a positive integer."""


class DivisionByZero(HwstrataError):
    """Inversion or division by the zero element."""


class FieldMismatch(HwstrataError):
    """Operands live in different field contexts."""


class InvalidInput(HwstrataError):
    """Operation applied to a value outside its domain (e.g. the zero polynomial)."""


class SingularTransform(HwstrataError):
    """A 2x2 substitution matrix with zero determinant."""


class SingularCurve(HwstrataError):
    """y^2 = f(x) with f not squarefree: the model is not smooth."""


class ShapeError(HwstrataError):
    """Matrix dimensions do not match the operation."""


class MethodUnavailable(HwstrataError):
    """Sampling method inapplicable for these parameters (e.g. p | 2g+1)."""


class FieldTooSmall(HwstrataError):
    """q too small to host the requested branch configuration."""


class OracleTooLarge(HwstrataError):
    """Brute-force oracle asked to run outside its exhaustive-search regime."""


class InvalidPRank(HwstrataError):
    """A p-rank value outside [0, g]."""


class EmptySample(HwstrataError):
    """Statistics requested over an empty collection."""


class MissingData(HwstrataError):
    """A report lacks the threshold/column needed for the requested output."""


class NothingToDo(HwstrataError):
    """No admissible prime in the requested range."""


class InvalidRange(HwstrataError):
    """Malformed numeric range (lo > hi, etc.)."""
