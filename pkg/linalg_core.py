# pylint: disable=logging-fstring-interpolation, invalid-name

"""
Dense complex linear algebra underpinning every other module.

Matrices are plain `numpy.ndarray` objects of dtype complex128 (the `ComplexMatrix` carrier).
The module provides:
    - hermitian_eig: cyclic complex Jacobi eigensolver returning a `HermitianEigenSystem`.
    - compress: V*TV for an isometry V.
    - orthonormalize: rank-revealing modified Gram-Schmidt.
    - haar_isometry: Haar-distributed N x k isometries, deterministic per seed.
    - principal_angles, hermitian_parts, direct_sum, numerical_rank: small helpers.

All tolerances are relative to max(1, ||.||_F).
"""

import logging
from typing import List, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from errors import EmptySpan, NoConvergence, NotHermitian, NotIsometry, ShapeMismatch

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray

HERMITIAN_RTOL = 1e-12
ISOMETRY_TOL = 1e-10
JACOBI_OFF_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
RANK_RTOL = 1e-10


def as_matrix(m) -> ComplexMatrix:
    """Coerce array-likes to a 2-D complex128 array."""
    arr = np.array(m, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ShapeMismatch(f"Expected a matrix, got an array with {arr.ndim} dimensions.")
    return arr


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return np.conj(m).T


def frobenius_norm(m: ComplexMatrix) -> float:
    """Frobenius norm of a matrix (0 for empty matrices)."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m))


def scale_of(m: ComplexMatrix) -> float:
    """Operator-scale reference max(1, ||m||_F) used by every relative tolerance."""
    return max(1.0, frobenius_norm(m))


def is_square(m: ComplexMatrix) -> bool:
    """Whether `m` is a square 2-D array."""
    return m.ndim == 2 and m.shape[0] == m.shape[1]


def is_hermitian(m: ComplexMatrix, rtol: float = HERMITIAN_RTOL) -> bool:
    """Whether ||m - m*||_F <= rtol * max(1, ||m||_F)."""
    if not is_square(m):
        return False
    return frobenius_norm(m - adjoint(m)) <= rtol * scale_of(m)


def hermitian_parts(t: ComplexMatrix) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """Split T = Re T + i Im T with Re T = (T + T*)/2 and Im T = (T - T*)/(2i).

    Args:
        t (ComplexMatrix): A square matrix.

    Returns:
        Tuple[ComplexMatrix, ComplexMatrix]: The Hermitian parts (Re T, Im T).
    """
    t = as_matrix(t)
    t_star = adjoint(t)
    return (t + t_star) / 2.0, (t - t_star) / 2.0j


def direct_sum(*blocks: ComplexMatrix) -> ComplexMatrix:
    """Block-diagonal direct sum of the given matrices."""
    return scipy.linalg.block_diag(*[as_matrix(b) for b in blocks]).astype(complex)


def numerical_rank(m: ComplexMatrix, rtol: float) -> int:
    """Number of singular values above rtol * max(1, ||m||_F)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0
    singular_values = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(singular_values > rtol * scale_of(m)))


class HermitianEigenSystem():
    """Ascending eigenvalues a_1 <= ... <= a_N and orthonormal eigenvector columns of a Hermitian
    matrix, plus the Frobenius norm of the matrix they came from.

    Instances are read-only; `values` and `vectors` are non-writeable arrays.
    """
    def __init__(self, values: np.ndarray, vectors: ComplexMatrix, source_norm: float) -> None:
        values = np.array(values, dtype=float)
        vectors = np.array(vectors, dtype=complex)
        if vectors.shape != (values.size, values.size):
            raise ShapeMismatch(f"Eigenvector matrix {vectors.shape} does not match {values.size} eigenvalues.")
        values.flags.writeable = False
        vectors.flags.writeable = False
        self.values = values
        self.vectors = vectors
        self.source_norm = float(source_norm)

    def __repr__(self) -> str:
        return f"HermitianEigenSystem: N={self.size()}, values={self.values}, source_norm={self.source_norm:.6g}"

    def size(self) -> int:
        """Dimension N of the underlying matrix."""
        return self.values.size

    def get_scale(self) -> float:
        """max(1, ||A||_F) for the matrix this system decomposes."""
        return max(1.0, self.source_norm)

    def reconstruct(self) -> ComplexMatrix:
        """Sum_i a_i |psi_i><psi_i|."""
        return (self.vectors * self.values) @ adjoint(self.vectors)

    def shifted(self, lam: float) -> "HermitianEigenSystem":
        """Eigensystem of A - lam*I, obtained without re-diagonalising.

        Args:
            lam (float): The real shift.

        Returns:
            HermitianEigenSystem: Same eigenvectors, eigenvalues a_i - lam.
        """
        values = self.values - float(lam)
        return HermitianEigenSystem(values, self.vectors, float(np.linalg.norm(values)))

    def apply_function(self, values: np.ndarray) -> ComplexMatrix:
        """Build f(A) = Sum_i f(a_i)|psi_i><psi_i| from precomputed f(a_i) values."""
        return (self.vectors * np.asarray(values)) @ adjoint(self.vectors)


def _jacobi_rotation(a: ComplexMatrix, p: int, q: int) -> ComplexMatrix:
    """2x2 unitary J with (J* A J)[p, q] = 0 on the (p, q) plane of a Hermitian A."""
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # diag(1, conj(phase)) makes the pair real symmetric, then a real Givens rotation.
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(a: ComplexMatrix, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermitianEigenSystem:
    """Diagonalise a Hermitian matrix by cyclic complex Jacobi rotations.

    Pairs are swept in fixed row-major order, so the result is deterministic for a given input.
    Convergence is declared when the off-diagonal Frobenius mass drops to 1e-13 * ||A||_F.
    Eigenvalues are returned ascending; ties keep the Jacobi output order.

    Args:
        a (ComplexMatrix): A square Hermitian matrix.
        max_sweeps (int): Number of full sweeps before giving up.

    Raises:
        NotHermitian: If ||A - A*||_F > 1e-12 * max(1, ||A||_F).
        NoConvergence: If the sweep budget is exhausted.

    Returns:
        HermitianEigenSystem: The eigen decomposition of `a`.
    """
    a = as_matrix(a)
    if not is_square(a):
        raise ShapeMismatch(f"Eigendecomposition needs a square matrix, got {a.shape}.")
    if not is_hermitian(a):
        raise NotHermitian(f"Matrix is not Hermitian: ||A - A*||_F = {frobenius_norm(a - adjoint(a)):.3e}")
    n = a.shape[0]
    source_norm = frobenius_norm(a)
    work = (a + adjoint(a)) / 2.0
    vectors = np.eye(n, dtype=complex)
    threshold = JACOBI_OFF_RTOL * source_norm
    skip_below = 1e-18 * source_norm
    sweeps = 0
    while _off_diagonal_norm(work) > threshold:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (N={n}).")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(work[p, q]) <= skip_below:
                    continue
                rot = _jacobi_rotation(work, p, q)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ rot
                work[idx, :] = adjoint(rot) @ work[idx, :]
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vectors[:, idx] = vectors[:, idx] @ rot
        sweeps += 1
    logger.debug(f"Jacobi converged after {sweeps} sweeps (N={n})")
    diagonal = np.real(np.diag(work))
    order = np.argsort(diagonal, kind="stable")
    return HermitianEigenSystem(diagonal[order], vectors[:, order], source_norm)


def isometry_defect(v: ComplexMatrix) -> float:
    """||V*V - I_k||_F."""
    v = as_matrix(v)
    return frobenius_norm(adjoint(v) @ v - np.eye(v.shape[1]))


def compress(t: ComplexMatrix, v: ComplexMatrix) -> ComplexMatrix:
    """Compression V*TV of an N x N matrix to the range of an N x k isometry.

    Args:
        t (ComplexMatrix): N x N matrix.
        v (ComplexMatrix): N x k isometry.

    Raises:
        ShapeMismatch: On incompatible dimensions.
        NotIsometry: If ||V*V - I_k||_F > 1e-10.

    Returns:
        ComplexMatrix: The k x k compression.
    """
    t = as_matrix(t)
    v = as_matrix(v)
    if not is_square(t) or t.shape[0] != v.shape[0]:
        raise ShapeMismatch(f"Cannot compress a {t.shape} matrix with a {v.shape} frame.")
    defect = isometry_defect(v)
    if defect > ISOMETRY_TOL:
        raise NotIsometry(f"Frame is not an isometry: ||V*V - I||_F = {defect:.3e}")
    return adjoint(v) @ t @ v


def orthonormalize(vectors: Union[ComplexMatrix, Sequence[Sequence[complex]]]) -> ComplexMatrix:
    """Orthonormal basis of the span of `vectors`, by modified Gram-Schmidt with one round of
    re-orthogonalisation.

    Directions whose residual norm falls to 1e-10 times the largest input norm are dropped, so the
    number of returned columns is the numerical rank. Column order follows input order.

    Args:
        vectors: Either an N x m matrix whose columns are the vectors, or a list of N-vectors.

    Raises:
        EmptySpan: If every input vector is numerically zero.

    Returns:
        ComplexMatrix: N x r matrix with orthonormal columns.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        columns = [vectors[:, j] for j in range(vectors.shape[1])]
    else:
        columns = [np.asarray(vec, dtype=complex).ravel() for vec in vectors]
    if not columns:
        raise EmptySpan("No vectors to orthonormalize.")
    input_scale = max(float(np.linalg.norm(col)) for col in columns)
    if input_scale == 0.0:
        raise EmptySpan("All input vectors are zero.")
    basis: List[np.ndarray] = []
    for col in columns:
        residual = np.array(col, dtype=complex)
        for _ in range(2):
            for q in basis:
                residual = residual - q * np.vdot(q, residual)
        norm = float(np.linalg.norm(residual))
        if norm <= RANK_RTOL * input_scale:
            continue
        basis.append(residual / norm)
    if not basis:
        raise EmptySpan("All input vectors are numerically zero.")
    return np.column_stack(basis)


def haar_isometry(n: int, k: int, seed) -> ComplexMatrix:
    """Haar-random n x k isometry: QR of a complex Gaussian matrix with the phases of R's diagonal
    pushed into Q.

    Args:
        n (int): Ambient dimension.
        k (int): Number of columns (k <= n).
        seed: Anything `numpy.random.default_rng` accepts (int, SeedSequence, Generator).

    Raises:
        ShapeMismatch: If k > n.

    Returns:
        ComplexMatrix: n x k matrix with orthonormal columns.
    """
    if k > n or k < 0:
        raise ShapeMismatch(f"Cannot draw a {n} x {k} isometry.")
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def principal_angles(a: ComplexMatrix, b: ComplexMatrix) -> np.ndarray:
    """Principal angles (radians, descending) between the column spans of `a` and `b`."""
    return scipy.linalg.subspace_angles(as_matrix(a), as_matrix(b))


def subspace_distance(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Largest principal angle between two column spans; pi/2 when dimensions differ."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        return float(np.pi / 2)
    return float(np.max(principal_angles(a, b)))
