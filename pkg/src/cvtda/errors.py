"""Exception types raised across the package."""


class CvtdaError(Exception):
    """Base class for all package errors."""


class FormatError(CvtdaError, ValueError):
    """Input file could not be parsed."""


class DimensionMismatchError(CvtdaError, ValueError):
    """Rows of a point cloud have different lengths."""


class DegeneratePointError(CvtdaError, ValueError):
    """A point cannot be projected onto the unit sphere."""


class InvalidSimplexError(CvtdaError, ValueError):
    pass


class SimplexIndexError(CvtdaError, IndexError):
    pass


class DimensionError(CvtdaError, IndexError):
    """Requested chain dimension is outside the complex."""


class SizeError(CvtdaError, ValueError):
    """Problem size exceeds what the simulator supports."""


class IncompleteComplexError(CvtdaError, ValueError):
    """A dimension was requested that the complex was not enumerated up to."""


class ConsistencyError(CvtdaError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class EmptyTargetError(CvtdaError, ValueError):
    """Grover search was asked to amplify an empty marked set."""


class NonSymmetricError(CvtdaError, ValueError):
    """Operator handed to the eigensolver is not symmetric."""


class OrderingError(CvtdaError, ValueError):
    """A state does not live on the basis of the operator it is paired with."""


class StateError(CvtdaError, ValueError):
    """A matrix is not a valid density matrix."""


class RegularizationError(CvtdaError, ValueError):
    """Operator exponentiation needs a generator with non-zero trace."""


class AliasingError(CvtdaError, ValueError):
    """Two logical qubits were assigned overlapping bosonic modes."""


class PreconditionError(CvtdaError, ValueError):
    pass


class ResolutionWarning(UserWarning):
    """Integration window reaches into a neighbouring spectral peak."""


class ConfigError(CvtdaError, ValueError):
    """Run configuration is inconsistent or incomplete."""
