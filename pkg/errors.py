# pylint: disable=too-few-public-methods

"""
Exceptions raised by the compression toolkit.

Every failure the library can report derives from `CompressionError`, which is a `ValueError`
so callers that only care about "bad input" can keep catching that. The `exit_code` attribute
is what the command line surface returns when the error escapes a command:
    - 1: generic error (bad input, numerical failure)
    - 2: a definitive negative mathematical answer (e.g. lambda is not in the range)
    - 3: a resource cap was hit
"""


class CompressionError(ValueError):
    """Base class for all toolkit errors."""
    exit_code = 1


class NotHermitian(CompressionError):
    """The matrix handed to a Hermitian-only routine is not Hermitian within tolerance."""


class NotNormal(CompressionError):
    """The matrix handed to a normal-only routine does not commute with its adjoint."""


class NoConvergence(CompressionError):
    """The Jacobi eigensolver exhausted its sweep budget."""


class NotIsometry(CompressionError):
    """A frame does not satisfy V*V = I."""


class ShapeMismatch(CompressionError):
    """Operand dimensions are incompatible."""


class EmptySpan(CompressionError):
    """Every input vector is numerically zero."""


class BadRank(CompressionError):
    """The rank k is outside [1, N] (or the operation's stricter range)."""


class RankHypothesisViolated(CompressionError):
    """An operation that needs a relation between k and N (2k > N, 4k - 3 <= N) got the wrong k."""


class MultiplicityTooSmall(CompressionError):
    """A verified large-k witness sits on an eigenvalue with too small a kernel.

    This cannot happen for a correct witness, so it points to a broken verifier upstream.
    """


class LambdaOutOfRange(CompressionError):
    """The requested compression value is not in the rank-k numerical range."""
    exit_code = 2


class BadPairing(CompressionError):
    """A custom eigenvalue pairing is not disjoint or does not bracket lambda."""


class InfeasibleSplit(CompressionError):
    """No (k1, k2) split fits the kernel / positive / negative eigenspace dimensions."""


class InvalidParameters(CompressionError):
    """Construction parameters are malformed or do not live in the eigenspaces they are declared for."""


class NotACompression(CompressionError):
    """The projection does not compress the matrix to a scalar within tolerance."""


class DegenerateRecovery(CompressionError):
    """Parameter recovery lost numerical rank or the isometry property."""


class FrameNotOrthonormal(CompressionError):
    """A projection frame does not have orthonormal columns."""


class TooManySubsets(CompressionError):
    """The subset enumeration for the hull intersection is over the configured cap."""
    exit_code = 3


class MalformedFile(CompressionError):
    """A matrix, projection, spectrum or error-model file failed validation."""


class InvalidConfig(CompressionError):
    """Search settings or a scan grid are out of range (non-positive restarts, tolerances, grid sizes)."""
