# pylint: disable=logging-fstring-interpolation, too-many-arguments

"""
Rank-k numerical ranges of Hermitian matrices.

For a Hermitian A with eigenvalues a_1 <= ... <= a_N (counting multiplicities) the rank-k
numerical range is the closed interval [a_k, a_{N-k+1}], which may be a proper interval, a single
point or empty. This module computes it, the nested chain over all k, membership, and the
kernel-dimension check that any witness must pass when 2k > N.

Usage:
```
    from hermitian_range import hermitian_range, range_chain
    rng = hermitian_range(np.diag([1, 2, 3, 4, 5, 6]), 2)   # Interval(2, 5)
    chain = range_chain(np.diag([1, 2, 3, 4]))               # [1,4], [2,3], Empty, Empty
```
"""

import logging
from enum import Enum, IntEnum
from typing import List, Optional, Sequence

import numpy as np

from compression import CompressionProjection, verify_compression
from errors import BadRank, MultiplicityTooSmall, NotACompression, RankHypothesisViolated
from linalg_core import (ComplexMatrix, HermitianEigenSystem, as_matrix, compress, hermitian_eig,
                         numerical_rank, scale_of)

logger = logging.getLogger(__name__)

ENDPOINT_RTOL = 1e-12
MEMBERSHIP_RTOL = 1e-10
KERNEL_RTOL = 1e-9
WITNESS_RTOL = 1e-9


class RangeKind(IntEnum):
    """Shape of a rank-k numerical range."""
    EMPTY = 0
    SINGLETON = 1
    INTERVAL = 2
    REGION = 3


class RegionStatus(Enum):
    """Whether a planar region is the range itself or only contains it."""
    EXACT = "Exact"
    OUTER_BOUND = "OuterBound"


class RankKRange():
    """Computed or bounded description of a rank-k numerical range.

    Use the `empty`, `singleton`, `interval` and `region` constructors rather than `__init__`.
    """
    def __init__(self, kind: RangeKind, value: complex = 0.0, lo: float = 0.0, hi: float = 0.0,
                 polygon: Optional[Sequence[complex]] = None, status: Optional[RegionStatus] = None) -> None:
        self.kind = kind
        self.value = complex(value)
        self.lo = float(lo)
        self.hi = float(hi)
        self.polygon = np.array(polygon if polygon is not None else [], dtype=complex)
        self.status = status

    @classmethod
    def empty(cls) -> "RankKRange":
        """The empty range."""
        return cls(RangeKind.EMPTY)

    @classmethod
    def singleton(cls, value: complex) -> "RankKRange":
        """The single point {value}."""
        return cls(RangeKind.SINGLETON, value=value)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "RankKRange":
        """A proper real interval [lo, hi]; lo must be strictly below hi."""
        if not lo < hi:
            raise ValueError(f"Interval needs lo < hi, got [{lo}, {hi}]; use singleton for lo == hi.")
        return cls(RangeKind.INTERVAL, lo=lo, hi=hi)

    @classmethod
    def region(cls, polygon: Sequence[complex], status: RegionStatus) -> "RankKRange":
        """A convex planar region given by its counterclockwise vertices."""
        return cls(RangeKind.REGION, polygon=polygon, status=status)

    def __repr__(self) -> str:
        return f"RankKRange<{self.describe()}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankKRange) or self.kind != other.kind:
            return False
        if self.kind == RangeKind.SINGLETON:
            return self.value == other.value
        if self.kind == RangeKind.INTERVAL:
            return (self.lo, self.hi) == (other.lo, other.hi)
        if self.kind == RangeKind.REGION:
            return self.status == other.status and np.array_equal(self.polygon, other.polygon)
        return True

    def __hash__(self) -> int:
        return hash((self.kind, self.value, self.lo, self.hi))

    def is_empty(self) -> bool:
        """Whether the range has no points."""
        return self.kind == RangeKind.EMPTY

    def bounds(self):
        """(lo, hi) for real ranges: the interval ends, or (v, v) for a real singleton."""
        if self.kind == RangeKind.INTERVAL:
            return self.lo, self.hi
        if self.kind == RangeKind.SINGLETON:
            return self.value.real, self.value.real
        raise ValueError(f"{self.describe()} has no real bounds.")

    def contains(self, lam: complex, tol: float = 0.0) -> bool:
        """Closed membership test with absolute tolerance `tol`.

        Regions are tested against their polygon edges (a segment when only two vertices).
        """
        lam = complex(lam)
        if self.kind == RangeKind.EMPTY:
            return False
        if self.kind == RangeKind.SINGLETON:
            return abs(lam - self.value) <= tol
        if self.kind == RangeKind.INTERVAL:
            return abs(lam.imag) <= tol and self.lo - tol <= lam.real <= self.hi + tol
        return polygon_contains(self.polygon, lam, tol)

    def contains_range(self, other: "RankKRange", tol: float = 0.0) -> bool:
        """Whether `other` is a subset of this range (checked on its extreme points)."""
        if other.kind == RangeKind.EMPTY:
            return True
        if other.kind == RangeKind.SINGLETON:
            return self.contains(other.value, tol)
        if other.kind == RangeKind.INTERVAL:
            return self.contains(other.lo, tol) and self.contains(other.hi, tol)
        return all(self.contains(z, tol) for z in other.polygon)

    def describe(self) -> str:
        """Human form with 15 significant digits, e.g. `Interval 2 5`, `Singleton 1`, `Empty`."""
        if self.kind == RangeKind.EMPTY:
            return "Empty"
        if self.kind == RangeKind.SINGLETON:
            return f"Singleton {format_complex(self.value)}"
        if self.kind == RangeKind.INTERVAL:
            return f"Interval {format_real(self.lo)} {format_real(self.hi)}"
        vertices = " ".join(format_complex(z) for z in self.polygon)
        return f"Region {self.status.value} {vertices}"


def format_real(x: float, digits: int = 15) -> str:
    """Format a real with `digits` significant digits, never printing -0."""
    return f"{float(x) + 0.0:.{digits}g}"


def format_complex(z: complex, digits: int = 15) -> str:
    """Format as `re`, or `re+imi` when the imaginary part is nonzero."""
    z = complex(z)
    if z.imag == 0.0:
        return format_real(z.real, digits)
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_real(z.real, digits)}{sign}{format_real(abs(z.imag), digits)}i"


def polygon_contains(polygon: np.ndarray, lam: complex, tol: float) -> bool:
    """Closed membership in a convex polygon given counterclockwise (a point or segment for one or two vertices)."""
    if polygon.size == 0:
        return False
    if polygon.size == 1:
        return abs(lam - polygon[0]) <= tol
    if polygon.size == 2:
        return segment_distance(polygon[0], polygon[1], lam) <= tol
    for start, end in zip(polygon, np.roll(polygon, -1)):
        edge = end - start
        length = abs(edge)
        if length == 0.0:
            continue
        # Counterclockwise order: the interior lies to the left of every edge.
        cross = (edge.real * (lam - start).imag - edge.imag * (lam - start).real) / length
        if cross < -tol:
            return False
    return True


def segment_distance(p: complex, q: complex, z: complex) -> float:
    d = q - p
    if d == 0:
        return abs(z - p)
    t = min(1.0, max(0.0, ((z - p) * np.conj(d)).real / abs(d) ** 2))
    return abs(z - (p + t * d))


def _check_rank(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise BadRank(f"Rank k={k} is outside [1, {n}].")


def range_from_spectrum(values: Sequence[float], k: int, scale: float) -> RankKRange:
    """[a_k, a_{N-k+1}] from an ascending spectrum, classified at 1e-12 * scale.

    Args:
        values (Sequence[float]): Ascending eigenvalues with multiplicities.
        k (int): Rank, 1 <= k <= N.
        scale (float): max(1, ||A||_F).

    Returns:
        RankKRange: Interval, Singleton or Empty.
    """
    n = len(values)
    _check_rank(k, n)
    lo = float(values[k - 1])
    hi = float(values[n - k])
    if abs(hi - lo) <= ENDPOINT_RTOL * scale:
        return RankKRange.singleton(lo)
    if lo < hi:
        return RankKRange.interval(lo, hi)
    return RankKRange.empty()


def hermitian_range(a: ComplexMatrix, k: int, eig: Optional[HermitianEigenSystem] = None) -> RankKRange:
    """Rank-k numerical range [a_k, a_{N-k+1}] of a Hermitian matrix.

    Args:
        a (ComplexMatrix): Hermitian N x N matrix.
        k (int): Rank, 1 <= k <= N.
        eig (Optional[HermitianEigenSystem]): Precomputed eigensystem of `a`.

    Raises:
        BadRank: If k is outside [1, N].
        NotHermitian: If `a` is not Hermitian.

    Returns:
        RankKRange: Interval(a_k, a_{N-k+1}), Singleton(a_k) or Empty.
    """
    a = as_matrix(a)
    _check_rank(k, a.shape[0])
    if eig is None:
        eig = hermitian_eig(a)
    return range_from_spectrum(eig.values, k, eig.get_scale())


def membership_hermitian(a: ComplexMatrix, k: int, lam: complex, eig: Optional[HermitianEigenSystem] = None) -> bool:
    """Whether lam lies in the closed rank-k range of a Hermitian matrix (tolerance
    1e-10 * max(1, ||A||_F) at the endpoints).
    """
    a = as_matrix(a)
    _check_rank(k, a.shape[0])
    if eig is None:
        eig = hermitian_eig(a)
    rank_k_range = range_from_spectrum(eig.values, k, eig.get_scale())
    return rank_k_range.contains(lam, MEMBERSHIP_RTOL * eig.get_scale())


def range_chain(a: ComplexMatrix) -> List[RankKRange]:
    """The nested chain W(A) = L_1(A) >= L_2(A) >= ... >= L_N(A) from one eigendecomposition."""
    eig = hermitian_eig(a)
    return [range_from_spectrum(eig.values, k, eig.get_scale()) for k in range(1, eig.size() + 1)]


def is_nested(chain: Sequence[RankKRange], tol: float = 0.0) -> bool:
    """Whether every nonempty element of `chain` is contained in its predecessor."""
    for outer, inner in zip(chain, chain[1:]):
        if not inner.is_empty() and not outer.contains_range(inner, tol):
            return False
    return True


def compressed_numerical_range(a: ComplexMatrix, v: ComplexMatrix) -> RankKRange:
    """W(V*AV) for an isometry V, i.e. [min, max] of the compressed spectrum.

    With V running over all isometries C^{N-k+1} -> C^N, the intersection of these intervals is the
    rank-k range of A, so every such interval contains `hermitian_range(a, k)`.
    """
    compressed = compress(as_matrix(a), v)
    eig = hermitian_eig((compressed + compressed.conj().T) / 2.0)
    return range_from_spectrum(eig.values, 1, eig.get_scale())


class LargeKReport():
    """Outcome of the kernel-dimension check for a witness with 2k > N."""
    def __init__(self, kernel_dim: int, required_dim: int, residual: float, scalar_confirmed: Optional[bool]) -> None:
        self.kernel_dim = kernel_dim
        self.required_dim = required_dim
        self.residual = residual
        self.scalar_confirmed = scalar_confirmed

    def __repr__(self) -> str:
        return (f"LargeKReport: dim ker = {self.kernel_dim} >= {self.required_dim}, residual={self.residual:.3e}, "
                f"scalar={self.scalar_confirmed}")


def large_k_check(t: ComplexMatrix, k: int, lam: complex, projection: CompressionProjection) -> LargeKReport:
    """Check that a verified witness lam for 2k > N is an eigenvalue of geometric multiplicity at
    least 2k - N, and for k = N that T = lam I.

    Args:
        t (ComplexMatrix): N x N matrix.
        k (int): Rank with 2k > N.
        lam (complex): The compression value.
        projection (CompressionProjection): A witness with PTP = lam P.

    Raises:
        RankHypothesisViolated: If 2k <= N.
        NotACompression: If the projection does not certify lam for T.
        MultiplicityTooSmall: If dim ker(T - lam I) < 2k - N.

    Returns:
        LargeKReport: The kernel dimension found and the bound it satisfies.
    """
    t = as_matrix(t)
    n = t.shape[0]
    _check_rank(k, n)
    if 2 * k <= n:
        raise RankHypothesisViolated(f"Large-k check needs 2k > N, got k={k}, N={n}.")
    if projection.rank != k:
        raise BadRank(f"Witness has rank {projection.rank}, expected {k}.")
    scale = scale_of(t)
    residual = verify_compression(t, projection, lam)
    if residual > WITNESS_RTOL * scale:
        raise NotACompression(f"Witness residual {residual:.3e} exceeds {WITNESS_RTOL * scale:.3e}.")
    shifted = t - complex(lam) * np.eye(n)
    singular_values = np.linalg.svd(shifted, compute_uv=False)
    kernel_dim = int(np.sum(singular_values <= KERNEL_RTOL * scale))
    required = 2 * k - n
    if kernel_dim < required:
        raise MultiplicityTooSmall(f"dim ker(T - {lam} I) = {kernel_dim} < 2k - N = {required}.")
    scalar_confirmed = None
    if k == n:
        scalar_confirmed = numerical_rank(shifted, KERNEL_RTOL) == 0
        if not scalar_confirmed:
            raise MultiplicityTooSmall(f"Rank-N witness but T is not {lam} I.")
    logger.debug(f"Large-k check passed: dim ker = {kernel_dim} >= {required}")
    return LargeKReport(kernel_dim, required, residual, scalar_confirmed)
