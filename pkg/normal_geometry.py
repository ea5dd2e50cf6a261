# pylint: disable=logging-fstring-interpolation, too-many-locals

"""
Convex geometry of rank-k numerical ranges of normal matrices.

For a normal T with eigenvalues z_1, ..., z_N (with multiplicities), the rank-k range is contained
in the intersection of co(Gamma) over every (N+1-k)-point sub-multiset Gamma of the spectrum. The
intersection is computed by clipping the convex hull of the whole spectrum against each subset hull
in turn (Sutherland-Hodgman). Collinear spectra are handled as 1-D interval intersections.

Fixtures for experiments live here too: cyclic shifts, roots of unity and random normal matrices.
"""

import itertools
import logging
import math
from enum import IntEnum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from errors import BadRank, NotNormal, RankHypothesisViolated, ShapeMismatch, TooManySubsets
from hermitian_range import (RankKRange, RegionStatus, hermitian_range, polygon_contains, segment_distance)
from linalg_core import (ComplexMatrix, adjoint, as_matrix, frobenius_norm, haar_isometry, hermitian_eig,
                         hermitian_parts, scale_of)

logger = logging.getLogger(__name__)

SpectrumList = np.ndarray

MAX_SUBSETS = 1_000_000
DEGENERATE_RTOL = 1e-12
COLLINEAR_RTOL = 1e-10
MEMBERSHIP_RTOL = 1e-10
CLUSTER_RTOL = 1e-9
NORMALITY_RTOL = 1e-10

# Half-plane {x : normal . x <= offset}, with the normal as a complex number.
HalfPlane = Tuple[complex, float]


class RegionKind(IntEnum):
    """Shape of a convex planar region."""
    EMPTY = 0
    POINT = 1
    SEGMENT = 2
    POLYGON = 3


class ConvexRegion():
    """Closed convex subset of the complex plane: empty, a point, a segment or a polygon whose
    vertices are stored counterclockwise.
    """
    def __init__(self, kind: RegionKind, vertices: Sequence[complex] = ()) -> None:
        self.kind = kind
        self.vertices = np.array(vertices, dtype=complex).ravel()

    def __repr__(self) -> str:
        return f"ConvexRegion<{self.kind.name}: {self.vertices}>"

    def get_vertices(self) -> np.ndarray:
        """Vertices: none, the point, the two endpoints, or the polygon counterclockwise."""
        return self.vertices

    def is_empty(self) -> bool:
        """Whether the region has no points."""
        return self.kind == RegionKind.EMPTY

    def area(self) -> float:
        """Shoelace area (0 for degenerate regions)."""
        if self.kind != RegionKind.POLYGON:
            return 0.0
        x, y = self.vertices.real, self.vertices.imag
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def contains(self, lam: complex, tol: float = 0.0) -> bool:
        """Closed membership with absolute tolerance `tol`."""
        if self.kind == RegionKind.EMPTY:
            return False
        return polygon_contains(self.vertices, complex(lam), tol)


def as_spectrum(points) -> SpectrumList:
    """Coerce eigenvalues to a flat complex array with at least one entry."""
    spectrum = np.array(points, dtype=complex).ravel()
    if spectrum.size == 0:
        raise ShapeMismatch("A spectrum needs at least one eigenvalue.")
    return spectrum


def spectral_diameter(spec: SpectrumList) -> float:
    """max |z_i - z_j| over the spectrum."""
    return float(np.max(np.abs(spec[:, None] - spec[None, :])))


def _snap(z: complex, tol: float) -> complex:
    re = 0.0 if abs(z.real) <= tol else z.real + 0.0
    im = 0.0 if abs(z.imag) <= tol else z.imag + 0.0
    return complex(re, im)


def _principal_direction(points: np.ndarray) -> Tuple[complex, float]:
    """Unit direction of the best-fit line and the second singular value of the centered cloud."""
    centered = points - points.mean()
    if points.size < 2:
        return 1.0 + 0.0j, 0.0
    _, singular, vh = np.linalg.svd(np.column_stack([centered.real, centered.imag]), full_matrices=False)
    second = float(singular[1]) if singular.size > 1 else 0.0
    return complex(vh[0, 0], vh[0, 1]), second


def _is_collinear(points: np.ndarray, diameter: float) -> bool:
    _, second = _principal_direction(points)
    return second <= COLLINEAR_RTOL * max(diameter, np.finfo(float).tiny)


def _ordered_along_line(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Points sorted along their common line (ties broken by input order), with their positions."""
    direction, _ = _principal_direction(points)
    # Real lines run left to right and vertical lines bottom to top.
    if direction.real < 0 or (direction.real == 0 and direction.imag < 0):
        direction = -direction
    param = ((points - points.mean()) * np.conj(direction)).real
    order = np.argsort(param, kind="stable")
    return points[order], param[order]


def _subset_halfplanes(points: np.ndarray, diameter: float) -> List[HalfPlane]:
    """Half-planes whose intersection is co(points)."""
    if _is_collinear(points, diameter):
        ordered, _ = _ordered_along_line(points)
        start, end = ordered[0], ordered[-1]
        if abs(end - start) <= DEGENERATE_RTOL * diameter:
            return [(1.0, start.real), (-1.0, -start.real), (1j, start.imag), (-1j, -start.imag)]
        direction = (end - start) / abs(end - start)
        normal = direction * 1j
        offset = (np.conj(normal) * start).real
        return [(normal, offset), (-normal, -offset), (direction, (np.conj(direction) * end).real),
                (-direction, -(np.conj(direction) * start).real)]
    hull = ConvexHull(np.column_stack([points.real, points.imag]))
    return [(complex(eq[0], eq[1]), float(-eq[2])) for eq in hull.equations]


def _hull_vertices(points: np.ndarray) -> np.ndarray:
    hull = ConvexHull(np.column_stack([points.real, points.imag]))
    # 2-D qhull vertices are already counterclockwise.
    return points[hull.vertices]


def _clip(polygon: List[complex], plane: HalfPlane, tol: float) -> List[complex]:
    """Sutherland-Hodgman step: keep the part of `polygon` with normal . x <= offset + tol."""
    normal, offset = plane

    def excess(z: complex) -> float:
        return (np.conj(normal) * z).real - offset

    output: List[complex] = []
    if not polygon:
        return output
    start = polygon[-1]
    for end in polygon:
        e_start, e_end = excess(start), excess(end)
        if e_end <= tol:
            if e_start > tol:
                output.append(start + (end - start) * (e_start / (e_start - e_end)))
            output.append(end)
        elif e_start <= tol:
            output.append(start + (end - start) * (e_start / (e_start - e_end)))
        start = end
    return output


def _classify(vertices: List[complex], diameter: float) -> ConvexRegion:
    tol = DEGENERATE_RTOL * diameter
    merge = COLLINEAR_RTOL * diameter
    unique: List[complex] = []
    for z in vertices:
        if not unique or abs(z - unique[-1]) > merge:
            unique.append(z)
    while len(unique) > 1 and abs(unique[0] - unique[-1]) <= merge:
        unique.pop()
    if not unique:
        return ConvexRegion(RegionKind.EMPTY)
    points = np.array(unique, dtype=complex)
    if len(unique) == 1 or float(np.max(np.abs(points - points[0]))) <= merge:
        return ConvexRegion(RegionKind.POINT, [_snap(complex(points.mean()), tol)])
    if _is_collinear(points, diameter):
        ordered, _ = _ordered_along_line(points)
        return ConvexRegion(RegionKind.SEGMENT, [_snap(ordered[0], tol), _snap(ordered[-1], tol)])
    # Drop vertices lying on the edge between their neighbours.
    corners = []
    count = len(unique)
    for idx in range(count):
        prev, cur, nxt = unique[idx - 1], unique[idx], unique[(idx + 1) % count]
        edge = nxt - prev
        cross = (edge.real * (cur - prev).imag - edge.imag * (cur - prev).real) / abs(edge)
        if abs(cross) > merge:
            corners.append(_snap(cur, tol))
    return ConvexRegion(RegionKind.POLYGON, corners)


def _check_rank(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise BadRank(f"Rank k={k} is outside [1, {n}].")


def _check_subset_count(n: int, k: int, max_subsets: int) -> int:
    count = math.comb(n, n + 1 - k)
    if count > max_subsets:
        raise TooManySubsets(f"C({n}, {n + 1 - k}) = {count} subsets exceeds the cap of {max_subsets}.")
    return count


def _collinear_region(spec: SpectrumList, k: int, diameter: float) -> ConvexRegion:
    """Exact 1-D intersection [t_k, t_(N+1-k)] along the common line."""
    ordered, param = _ordered_along_line(spec)
    n = spec.size
    if param[k - 1] > param[n - k] + DEGENERATE_RTOL * diameter:
        return ConvexRegion(RegionKind.EMPTY)
    return _classify([ordered[k - 1], ordered[n - k]], diameter)


def hull_intersection_region(spec: SpectrumList, k: int, max_subsets: int = MAX_SUBSETS) -> ConvexRegion:
    """Intersection of co(Gamma) over all (N+1-k)-point sub-multisets Gamma of the spectrum.

    Args:
        spec (SpectrumList): Eigenvalues with multiplicities.
        k (int): Rank, 1 <= k <= N.
        max_subsets (int): Cap on C(N, N+1-k).

    Raises:
        BadRank: If k is outside [1, N].
        TooManySubsets: If the subset count exceeds `max_subsets`.

    Returns:
        ConvexRegion: Empty, Point, Segment or counterclockwise Polygon.
    """
    spec = as_spectrum(spec)
    n = spec.size
    _check_rank(k, n)
    count = _check_subset_count(n, k, max_subsets)
    diameter = spectral_diameter(spec)
    if diameter == 0.0:
        return ConvexRegion(RegionKind.POINT, [spec[0]])
    if _is_collinear(spec, diameter):
        return _collinear_region(spec, k, diameter)
    tol = DEGENERATE_RTOL * diameter
    region = list(_hull_vertices(spec))
    for subset in itertools.combinations(range(n), n + 1 - k):
        for plane in _subset_halfplanes(spec[list(subset)], diameter):
            region = _clip(region, plane, tol)
        if not region:
            logger.debug(f"Hull intersection for k={k} emptied at subset {subset}")
            return ConvexRegion(RegionKind.EMPTY)
    logger.debug(f"Clipped by {count} subset hulls, {len(region)} raw vertices left")
    return _classify(region, diameter)


def _in_hull(points: np.ndarray, lam: complex, diameter: float, tol: float) -> bool:
    if _is_collinear(points, diameter):
        ordered, _ = _ordered_along_line(points)
        return segment_distance(ordered[0], ordered[-1], lam) <= tol
    hull = ConvexHull(np.column_stack([points.real, points.imag]))
    return bool(np.all(hull.equations @ np.array([lam.real, lam.imag, 1.0]) <= tol))


def point_in_region(spec: SpectrumList, k: int, lam: complex, max_subsets: int = MAX_SUBSETS) -> bool:
    """Brute-force membership: lam in co(Gamma) for every (N+1-k)-point sub-multiset Gamma,
    with boundary tolerance 1e-10 times the spectral diameter.
    """
    spec = as_spectrum(spec)
    n = spec.size
    _check_rank(k, n)
    _check_subset_count(n, k, max_subsets)
    lam = complex(lam)
    diameter = spectral_diameter(spec)
    tol = MEMBERSHIP_RTOL * (diameter if diameter > 0.0 else max(1.0, abs(spec[0])))
    for subset in itertools.combinations(range(n), n + 1 - k):
        if not _in_hull(spec[list(subset)], lam, diameter, tol):
            return False
    return True


def rectangle_bound(t: ComplexMatrix, k: int) -> ConvexRegion:
    """Rectangle L_k(Re T) x L_k(Im T), which contains the rank-k range of any square T.

    Raises:
        BadRank: If k is outside [1, N].

    Returns:
        ConvexRegion: Empty if either factor is empty, else a point, segment or rectangle.
    """
    re_t, im_t = hermitian_parts(as_matrix(t))
    x_range = hermitian_range(re_t, k)
    y_range = hermitian_range(im_t, k)
    if x_range.is_empty() or y_range.is_empty():
        return ConvexRegion(RegionKind.EMPTY)
    x_lo, x_hi = x_range.bounds()
    y_lo, y_hi = y_range.bounds()
    corners = [complex(x_lo, y_lo), complex(x_hi, y_lo), complex(x_hi, y_hi), complex(x_lo, y_hi)]
    if x_lo == x_hi and y_lo == y_hi:
        return ConvexRegion(RegionKind.POINT, corners[:1])
    if x_lo == x_hi or y_lo == y_hi:
        return ConvexRegion(RegionKind.SEGMENT, [corners[0], corners[2]])
    return ConvexRegion(RegionKind.POLYGON, corners)


def _clusters(spec: SpectrumList, tol: float) -> List[List[int]]:
    """Group indices whose eigenvalues lie within `tol` of a cluster's first member."""
    groups: List[List[int]] = []
    for idx, z in enumerate(spec):
        for group in groups:
            if abs(z - spec[group[0]]) <= tol:
                group.append(idx)
                break
        else:
            groups.append([idx])
    return groups


def normal_large_k_check(spec: SpectrumList, k: int, max_subsets: int = MAX_SUBSETS) -> RankKRange:
    """Decide the rank-k range of a normal matrix when 2k > N: it is {lambda_0} for an eigenvalue
    of multiplicity at least 2k - N that, after removing 2k - N copies, lies in the rank-(N-k) hull
    intersection of the remaining spectrum; otherwise it is empty.

    Raises:
        RankHypothesisViolated: If 2k <= N.

    Returns:
        RankKRange: Singleton(lambda_0) or Empty.
    """
    spec = as_spectrum(spec)
    n = spec.size
    _check_rank(k, n)
    if 2 * k <= n:
        raise RankHypothesisViolated(f"Large-k normal check needs 2k > N, got k={k}, N={n}.")
    diameter = spectral_diameter(spec)
    required = 2 * k - n
    passing = []
    for group in _clusters(spec, CLUSTER_RTOL * diameter):
        if len(group) < required:
            continue
        candidate = spec[group[0]]
        removed = set(group[:required])
        remainder = np.array([z for idx, z in enumerate(spec) if idx not in removed], dtype=complex)
        if remainder.size == 0 or point_in_region(remainder, n - k, candidate, max_subsets):
            passing.append(candidate)
    if not passing:
        return RankKRange.empty()
    if len(passing) > 1:
        logger.warning(f"{len(passing)} eigenvalues pass the large-k check for k={k}: {passing}; keeping the first")
    return RankKRange.singleton(passing[0])


def region_status(spec: SpectrumList) -> RegionStatus:
    """Exact for real spectra and N <= 4, where the hull intersection is known to be the range."""
    spec = as_spectrum(spec)
    if spec.size <= 4 or np.all(spec.imag == 0.0):
        return RegionStatus.EXACT
    return RegionStatus.OUTER_BOUND


def hull_range(spec: SpectrumList, k: int, max_subsets: int = MAX_SUBSETS) -> RankKRange:
    """The hull intersection as a RankKRange, labelled Exact or OuterBound by `region_status`.

    Real spectra give an Interval (or Singleton/Empty) directly.
    """
    spec = as_spectrum(spec)
    region = hull_intersection_region(spec, k, max_subsets)
    if region.kind == RegionKind.EMPTY:
        return RankKRange.empty()
    vertices = region.get_vertices()
    if region.kind == RegionKind.POINT:
        return RankKRange.singleton(vertices[0])
    if np.all(spec.imag == 0.0) and region.kind == RegionKind.SEGMENT:
        return RankKRange.interval(float(vertices[0].real), float(vertices[1].real))
    return RankKRange.region(vertices, region_status(spec))


def cyclic_shift(n: int) -> ComplexMatrix:
    """Permutation unitary with U e_j = e_(j+1 mod N)."""
    if n < 1:
        raise ShapeMismatch(f"Cyclic shift needs N >= 1, got {n}.")
    shift = np.zeros((n, n), dtype=complex)
    shift[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return shift


def roots_of_unity(n: int) -> SpectrumList:
    """exp(2 pi i j / N) for j = 0..N-1, with rounding noise in zero coordinates removed."""
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    roots.real[np.abs(roots.real) < 1e-15] = 0.0
    roots.imag[np.abs(roots.imag) < 1e-15] = 0.0
    return roots


def random_normal(spec: SpectrumList, seed=None) -> ComplexMatrix:
    """W diag(spec) W* for a Haar unitary W."""
    spec = as_spectrum(spec)
    unitary = haar_isometry(spec.size, spec.size, seed)
    return (unitary * spec) @ adjoint(unitary)


def normal_spectrum(t: ComplexMatrix, mixing: Optional[float] = None) -> SpectrumList:
    """Eigenvalues of a normal matrix through the Hermitian eigensolver.

    Re T and Im T commute, so eigenvectors of the Hermitian combination Re T + gamma Im T for a
    generic real gamma diagonalise T; the eigenvalues are read off as psi* T psi.

    Raises:
        NotNormal: If ||TT* - T*T||_F > 1e-10 * max(1, ||T||_F)^2.

    Returns:
        SpectrumList: Eigenvalues ordered by the Hermitian combination.
    """
    t = as_matrix(t)
    scale = scale_of(t)
    if frobenius_norm(t @ adjoint(t) - adjoint(t) @ t) > NORMALITY_RTOL * scale * scale:
        raise NotNormal("Matrix does not commute with its adjoint.")
    gamma = (np.sqrt(5.0) - 1.0) / 2.0 if mixing is None else mixing
    re_t, im_t = hermitian_parts(t)
    combined = re_t + gamma * im_t
    eig = hermitian_eig((combined + adjoint(combined)) / 2.0)
    vectors = eig.vectors
    return np.einsum("ij,ik,kj->j", np.conj(vectors), t, vectors)
