# pylint: disable=logging-fstring-interpolation, too-many-arguments, too-many-locals, too-many-instance-attributes

"""
Explicit construction of rank-k compression projections.

Three builders live here:
    - pairing_projection: pair eigenvalues below lambda with eigenvalues above it and mix each pair
      coherently so the expectation hits lambda (one phase per pair is free).
    - construct_projection_general: the complete construction for Hermitian A. With A shifted so
      lambda = 0, pick V = V_0 + {v + Xv + Uv : v in V_+} and scale it by f(A) = |A|^(-1/2) (1 on the
      kernel); the span W = f(A)V satisfies P_W A P_W = 0. `recover_parameters` inverts it.
    - general_matrix_projection: a rank-k witness for an arbitrary T when 4k - 3 <= N, built from a
      rank-(2k-1) witness for Im T followed by a rank-k witness for the compressed Re T.

Eigenvalue indices exposed to callers (pairings) are 1-based, matching a_1 <= ... <= a_N.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from compression import CompressionProjection, certify, verify_compression
from errors import (BadPairing, BadRank, DegenerateRecovery, EmptySpan, InfeasibleSplit, InvalidParameters,
                    LambdaOutOfRange, NotACompression, RankHypothesisViolated)
from hermitian_range import MEMBERSHIP_RTOL, range_from_spectrum
from linalg_core import (ComplexMatrix, HermitianEigenSystem, adjoint, as_matrix, frobenius_norm, haar_isometry,
                         hermitian_eig, hermitian_parts, isometry_defect, orthonormalize, scale_of)

logger = logging.getLogger(__name__)

CLUSTER_RTOL = 1e-9
PARAMETER_RTOL = 1e-8
RECOVERY_RTOL = 1e-8
RECOVERY_SINGULAR_TOL = 1e-6
RECOVERY_ISOMETRY_TOL = 1e-6

Pair = Tuple[int, int]


class PairingParams():
    """Parameters of a pairing construction.

    `pairs` holds 1-based (low, high) eigenvalue indices with a_low <= lambda <= a_high. A pair with
    low == high is an eigenvector a_i = lambda taken as is. `cos2_beta[j]` is the weight of the low
    eigenvector in pair j and `thetas[j]` its free relative phase.
    """
    def __init__(self, lam: float, pairs: Sequence[Pair], cos2_beta: Sequence[float], thetas: Sequence[float]) -> None:
        self.lam = float(lam)
        self.pairs = [(int(i), int(j)) for i, j in pairs]
        self.cos2_beta = np.array(cos2_beta, dtype=float)
        self.thetas = np.array(thetas, dtype=float)

    def __repr__(self) -> str:
        return f"PairingParams: lambda={self.lam}, pairs={self.pairs}, cos^2 beta={self.cos2_beta}, theta={self.thetas}"

    def get_betas(self) -> np.ndarray:
        """Mixing angles beta_j in radians."""
        return np.arccos(np.sqrt(self.cos2_beta))

    def free_parameter_count(self) -> int:
        """Number of free real parameters: one phase per genuinely mixed pair."""
        return sum(1 for (i, j), c2 in zip(self.pairs, self.cos2_beta) if i != j and 0.0 < c2 < 1.0)


class GeneralParams():
    """Parameters (k1, k2), V_0, V_+, U, X of the complete construction, as N-dimensional images.

    Attributes:
        split: (k1, k2) with k1 + k2 = k.
        v_zero: N x k1 orthonormal columns in ker(A - lam I).
        v_plus: N x k2 orthonormal columns in the positive eigenspace.
        u_image: N x k2, U applied to the columns of v_plus; lies in the negative eigenspace.
        x_image: N x k2, X applied to the columns of v_plus; lies in the kernel, orthogonal to v_zero.
        isometry_defect: ||U*U - I|| measured during recovery (0 for sampled parameters).
    """
    def __init__(self, split: Tuple[int, int], v_zero: ComplexMatrix, v_plus: ComplexMatrix, u_image: ComplexMatrix,
                 x_image: ComplexMatrix, isometry_defect: float = 0.0) -> None:
        self.split = (int(split[0]), int(split[1]))
        self.v_zero = np.asarray(v_zero, dtype=complex)
        self.v_plus = np.asarray(v_plus, dtype=complex)
        self.u_image = np.asarray(u_image, dtype=complex)
        self.x_image = np.asarray(x_image, dtype=complex)
        self.isometry_defect = float(isometry_defect)

    def __repr__(self) -> str:
        return f"GeneralParams: split={self.split}, N={self.v_zero.shape[0]}, isometry defect={self.isometry_defect:.3e}"

    def get_rank(self) -> int:
        """k = k1 + k2."""
        return self.split[0] + self.split[1]


def _check_rank(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise BadRank(f"Rank k={k} is outside [1, {n}].")


def _real_lambda(lam, tol: float) -> float:
    lam = complex(lam)
    if abs(lam.imag) > tol:
        raise LambdaOutOfRange(f"lambda={lam} is not real; the range of a Hermitian matrix is real.")
    return lam.real


def _checked_lambda(eig: HermitianEigenSystem, k: int, lam) -> float:
    """Membership check with clamping into [a_k, a_{N-k+1}]."""
    _check_rank(k, eig.size())
    tol = MEMBERSHIP_RTOL * eig.get_scale()
    lam = _real_lambda(lam, tol)
    rank_k_range = range_from_spectrum(eig.values, k, eig.get_scale())
    if not rank_k_range.contains(lam, tol):
        raise LambdaOutOfRange(f"lambda={lam} is not in the rank-{k} range {rank_k_range.describe()}.")
    lo, hi = sorted((eig.values[k - 1], eig.values[eig.size() - k]))
    return float(min(max(lam, lo), hi))


def default_pairing(n: int, k: int) -> List[Pair]:
    """The pairing {a_(k+1-j), a_(N-k+j)}, with the 2k - N middle eigenvalues peeled off as
    self-pairs when 2k > N.

    Args:
        n (int): Dimension N.
        k (int): Rank.

    Returns:
        List[Pair]: 1-based (low, high) pairs.
    """
    _check_rank(k, n)
    middle = max(0, 2 * k - n)
    pairs = [(i, i) for i in range(n - k + 1, n - k + 1 + middle)]
    pairs += [(k - middle + 1 - j, n - k + middle + j) for j in range(1, k - middle + 1)]
    return pairs


def _validate_pairing(eig: HermitianEigenSystem, k: int, lam: float, pairing: Sequence[Pair], tol: float) -> List[Pair]:
    n = eig.size()
    if len(pairing) != k:
        raise BadPairing(f"A rank-{k} pairing needs {k} pairs, got {len(pairing)}.")
    used = set()
    oriented: List[Pair] = []
    for pair in pairing:
        i, j = int(pair[0]), int(pair[1])
        if not (1 <= i <= n and 1 <= j <= n):
            raise BadPairing(f"Pair {pair} has an index outside [1, {n}].")
        indices = {i, j}
        if used & indices:
            raise BadPairing(f"Pair {pair} reuses an eigenvalue index.")
        used |= indices
        a_i, a_j = eig.values[i - 1], eig.values[j - 1]
        if a_i > a_j:
            i, j = j, i
            a_i, a_j = a_j, a_i
        if not a_i - tol <= lam <= a_j + tol:
            raise BadPairing(f"Pair ({i}, {j}) with eigenvalues ({a_i}, {a_j}) does not bracket lambda={lam}.")
        oriented.append((i, j))
    return oriented


def pairing_params(eig: HermitianEigenSystem, k: int, lam: float, phases_theta: Optional[Sequence[float]] = None,
                   pairing: Optional[Sequence[Pair]] = None) -> PairingParams:
    """Solve cos^2(beta_j) = (lambda - a_high)/(a_low - a_high) for each pair.

    Args:
        eig (HermitianEigenSystem): Eigensystem of A.
        k (int): Rank.
        lam (float): Target compression value, in [a_k, a_{N-k+1}].
        phases_theta (Optional[Sequence[float]]): One phase per pair, zero by default.
        pairing (Optional[Sequence[Pair]]): 1-based pairs; `default_pairing` if omitted.

    Raises:
        LambdaOutOfRange: If lambda is not in the rank-k range.
        BadPairing: If the pairing is not k disjoint bracketing pairs.

    Returns:
        PairingParams: Pairs, weights and phases.
    """
    lam = _checked_lambda(eig, k, lam)
    tol = MEMBERSHIP_RTOL * eig.get_scale()
    pairs = _validate_pairing(eig, k, lam, default_pairing(eig.size(), k) if pairing is None else pairing, tol)
    thetas = np.zeros(len(pairs)) if phases_theta is None else np.asarray(phases_theta, dtype=float)
    if thetas.shape != (len(pairs),):
        raise InvalidParameters(f"Expected {len(pairs)} phases, got {thetas.size}.")
    cos2 = []
    for low, high in pairs:
        a_low, a_high = eig.values[low - 1], eig.values[high - 1]
        if a_high - a_low <= tol:
            cos2.append(1.0)
        else:
            cos2.append(float(np.clip((lam - a_high) / (a_low - a_high), 0.0, 1.0)))
    return PairingParams(lam, pairs, cos2, thetas)


def pairing_frame(eig: HermitianEigenSystem, params: PairingParams) -> ComplexMatrix:
    """Columns cos(beta_j) psi_low + e^(i theta_j) sin(beta_j) psi_high."""
    columns = []
    for (low, high), c2, theta in zip(params.pairs, params.cos2_beta, params.thetas):
        if low == high:
            columns.append(eig.vectors[:, low - 1])
            continue
        c, s = np.sqrt(c2), np.sqrt(max(0.0, 1.0 - c2))
        columns.append(c * eig.vectors[:, low - 1] + np.exp(1j * theta) * s * eig.vectors[:, high - 1])
    return np.column_stack(columns)


def pairing_projection(eig: HermitianEigenSystem, k: int, lam: float, phases_theta: Optional[Sequence[float]] = None,
                       pairing: Optional[Sequence[Pair]] = None) -> CompressionProjection:
    """Rank-k projection P with PAP = lambda P built by pairing eigenvalues around lambda.

    Usage:
    ```
        eig = hermitian_eig(np.diag([0, 1, 2, 3]))
        p = pairing_projection(eig, 2, 1.5, pairing=[(1, 3), (2, 4)])
    ```

    Returns:
        CompressionProjection: Certified against the reconstruction of `eig`.
    """
    params = pairing_params(eig, k, lam, phases_theta, pairing)
    logger.debug(f"Pairing construction: {params}")
    projection = CompressionProjection(pairing_frame(eig, params), params.lam)
    return certify(eig.reconstruct(), projection)


def enumerate_pairings(eig: HermitianEigenSystem, k: int, lam: float, limit: int = 1000) -> List[List[Pair]]:
    """All sets of k disjoint pairs bracketing lambda, up to `limit` of them.

    Self-pairs (i, i) only appear for eigenvalues equal to lambda. Output order is deterministic:
    pairs are chosen by increasing lowest free index.

    Returns:
        List[List[Pair]]: Each entry is usable as `pairing` for `pairing_projection`.
    """
    lam = _checked_lambda(eig, k, lam)
    tol = MEMBERSHIP_RTOL * eig.get_scale()
    n = eig.size()
    values = eig.values
    below = [i for i in range(1, n + 1) if values[i - 1] <= lam + tol]
    above = [i for i in range(1, n + 1) if values[i - 1] >= lam - tol]
    found: List[List[Pair]] = []
    seen = set()

    def orient(i: int, j: int) -> Pair:
        return tuple(sorted((i, j), key=lambda idx: (values[idx - 1], idx)))

    def extend(chosen: List[Pair], used: frozenset, min_low: int) -> None:
        if len(found) >= limit:
            return
        if len(chosen) == k:
            key = frozenset(chosen)
            if key not in seen:
                seen.add(key)
                found.append(list(chosen))
            return
        for low in below:
            if low < min_low or low in used:
                continue
            for high in above:
                if high in used or (high == low and abs(values[low - 1] - lam) > tol):
                    continue
                extend(chosen + [orient(low, high)], used | {low, high}, low + 1)

    extend([], frozenset(), 1)
    return found


def rank_one_projection(eig: HermitianEigenSystem, coefficients: Sequence[float],
                        phases: Optional[Sequence[float]] = None) -> Tuple[float, CompressionProjection]:
    """Rank-one witness phi = sum_j e^(i theta_j) c_j psi_j for lambda = sum_j a_j c_j^2.

    Every point of W(A) arises this way; the real coefficients are normalised onto the unit sphere.

    Args:
        eig (HermitianEigenSystem): Eigensystem of A.
        coefficients (Sequence[float]): Real c_j, one per eigenvalue.
        phases (Optional[Sequence[float]]): theta_j, zero by default.

    Raises:
        InvalidParameters: On a zero or wrongly sized coefficient vector.

    Returns:
        Tuple[float, CompressionProjection]: (lambda, certified projection).
    """
    c = np.asarray(coefficients, dtype=float)
    theta = np.zeros(eig.size()) if phases is None else np.asarray(phases, dtype=float)
    if c.shape != (eig.size(),) or theta.shape != (eig.size(),):
        raise InvalidParameters(f"Need {eig.size()} coefficients and phases.")
    norm = float(np.linalg.norm(c))
    if norm == 0.0:
        raise InvalidParameters("Coefficient vector is zero.")
    c = c / norm
    lam = float(np.dot(eig.values, c * c))
    phi = eig.vectors @ (c * np.exp(1j * theta))
    projection = CompressionProjection(phi.reshape(-1, 1), lam)
    return lam, certify(eig.reconstruct(), projection)


class _Eigenspaces():
    """Kernel, positive and negative eigenvector blocks of a shifted eigensystem."""
    def __init__(self, eig: HermitianEigenSystem) -> None:
        tol = CLUSTER_RTOL * eig.get_scale()
        values = eig.values
        in_kernel = np.abs(values) <= tol
        self.kernel = eig.vectors[:, in_kernel]
        self.plus = eig.vectors[:, values > tol]
        self.minus = eig.vectors[:, values < -tol]
        # f(x) = |x|^(-1/2) off the kernel and f(0) = 1.
        magnitude = np.where(in_kernel, 1.0, np.abs(values))
        self.f_values = magnitude ** -0.5
        self.f_inverse = magnitude ** 0.5

    def dims(self) -> Tuple[int, int, int]:
        """(dim kernel, dim positive, dim negative)."""
        return self.kernel.shape[1], self.plus.shape[1], self.minus.shape[1]


def feasible_splits(eig_shifted: HermitianEigenSystem, k: int) -> List[Tuple[int, int]]:
    """All (k1, k2) with k1 + k2 = k, k1 <= dim ker and k2 <= min(dim P_+, dim P_-)."""
    _check_rank(k, eig_shifted.size())
    d0, dp, dm = _Eigenspaces(eig_shifted).dims()
    return [(k1, k - k1) for k1 in range(max(0, k - min(dp, dm)), min(k, d0) + 1)]


def sample_general_params(eig_shifted: HermitianEigenSystem, k: int, split: Optional[Tuple[int, int]] = None,
                          seed=None, random_x: bool = False) -> GeneralParams:
    """Draw parameters for the complete construction.

    V_0 takes the first k1 kernel eigenvectors, V_+ and U are Haar isometries into the positive and
    negative eigenspaces, and X is zero unless `random_x` asks for a Gaussian map into the rest of
    the kernel.

    Args:
        eig_shifted (HermitianEigenSystem): Eigensystem of A - lambda I.
        k (int): Rank.
        split (Optional[Tuple[int, int]]): (k1, k2); defaults to k1 = min(k, dim ker).
        seed: Seed for every random draw.
        random_x (bool): Draw a random X instead of zero.

    Raises:
        InfeasibleSplit: If the split does not fit the eigenspace dimensions.

    Returns:
        GeneralParams: Sampled parameters.
    """
    _check_rank(k, eig_shifted.size())
    spaces = _Eigenspaces(eig_shifted)
    d0, dp, dm = spaces.dims()
    if split is None:
        split = (min(k, d0), k - min(k, d0))
    k1, k2 = split
    if k1 < 0 or k2 < 0 or k1 + k2 != k or k1 > d0 or k2 > min(dp, dm):
        raise InfeasibleSplit(f"Split {split} for k={k} does not fit dim ker={d0}, dim P+={dp}, dim P-={dm}.")
    logger.debug(f"Sampling split (k1, k2)={split} with dim ker={d0}, dim P+={dp}, dim P-={dm}")
    plus_seed, minus_seed, x_seed = np.random.SeedSequence(seed).spawn(3)
    n = eig_shifted.size()
    v_zero = spaces.kernel[:, :k1]
    v_plus = spaces.plus @ haar_isometry(dp, k2, plus_seed)
    u_image = spaces.minus @ haar_isometry(dm, k2, minus_seed)
    x_image = np.zeros((n, k2), dtype=complex)
    if random_x and d0 > k1 and k2 > 0:
        rng = np.random.default_rng(x_seed)
        x_map = rng.standard_normal((d0 - k1, k2)) + 1j * rng.standard_normal((d0 - k1, k2))
        x_image = spaces.kernel[:, k1:] @ x_map
    return GeneralParams((k1, k2), v_zero, v_plus, u_image, x_image)


def _outside(block: ComplexMatrix, basis: ComplexMatrix) -> float:
    """Norm of the part of `block` outside span(basis)."""
    if block.size == 0:
        return 0.0
    return frobenius_norm(block - basis @ (adjoint(basis) @ block))


def _validate_params(spaces: _Eigenspaces, k: int, params: GeneralParams) -> None:
    n = spaces.kernel.shape[0]
    k1, k2 = params.split
    d0, dp, dm = spaces.dims()
    if k1 + k2 != k or k1 > d0 or k2 > min(dp, dm):
        raise InfeasibleSplit(f"Split {params.split} for k={k} does not fit dim ker={d0}, dim P+={dp}, dim P-={dm}.")
    for name, block, cols in (("V_0", params.v_zero, k1), ("V_+", params.v_plus, k2), ("U", params.u_image, k2),
                              ("X", params.x_image, k2)):
        if block.shape != (n, cols):
            raise InvalidParameters(f"{name} has shape {block.shape}, expected {(n, cols)}.")
    for name, block, basis in (("V_0", params.v_zero, spaces.kernel), ("V_+", params.v_plus, spaces.plus),
                               ("U", params.u_image, spaces.minus), ("X", params.x_image, spaces.kernel)):
        if _outside(block, basis) > PARAMETER_RTOL * max(1.0, frobenius_norm(block)):
            raise InvalidParameters(f"{name} leaves its eigenspace.")
    for name, block in (("V_0", params.v_zero), ("V_+", params.v_plus), ("U", params.u_image)):
        if block.shape[1] and isometry_defect(block) > PARAMETER_RTOL:
            raise InvalidParameters(f"{name} columns are not orthonormal.")
    if k1 and k2 and frobenius_norm(adjoint(params.v_zero) @ params.x_image) > PARAMETER_RTOL * max(1.0, frobenius_norm(params.x_image)):
        raise InvalidParameters("X must map into the kernel orthogonally to V_0.")


def construct_projection_general(eig_shifted: HermitianEigenSystem, k: int, params: Optional[GeneralParams] = None,
                                 seed=None, lam: float = 0.0) -> CompressionProjection:
    """Rank-k projection onto W = f(A - lambda I) V with P (A - lambda I) P = 0.

    Args:
        eig_shifted (HermitianEigenSystem): Eigensystem of A - lambda I (see `HermitianEigenSystem.shifted`).
        k (int): Rank.
        params (Optional[GeneralParams]): Construction parameters; sampled from `seed` when omitted.
        seed: Seed used when sampling.
        lam (float): The shift lambda, recorded as the compression value of the result.

    Raises:
        LambdaOutOfRange: If 0 is not in the rank-k range of A - lambda I.
        InfeasibleSplit: If no split fits the eigenspace dimensions.
        InvalidParameters: If `params` leave their eigenspaces or lose rank.

    Returns:
        CompressionProjection: Frame of W, compression value `lam`, residual ||P(A - lambda I)P||_F.
    """
    _checked_lambda(eig_shifted, k, 0.0)
    spaces = _Eigenspaces(eig_shifted)
    if params is None:
        params = sample_general_params(eig_shifted, k, seed=seed)
    _validate_params(spaces, k, params)
    v = np.hstack([params.v_zero, params.v_plus + params.x_image + params.u_image])
    w = eig_shifted.apply_function(spaces.f_values) @ v
    try:
        frame = orthonormalize(w)
    except EmptySpan as exc:
        raise InvalidParameters("Construction produced an empty span.") from exc
    if frame.shape[1] != k:
        raise InvalidParameters(f"Construction lost rank: dim W = {frame.shape[1]} < {k}.")
    residual = verify_compression(eig_shifted.reconstruct(), CompressionProjection(frame, 0.0), 0.0)
    logger.debug(f"General construction split={params.split}: residual {residual:.3e}")
    return CompressionProjection(frame, lam, residual)


def recover_parameters(a: ComplexMatrix, projection: CompressionProjection, lam: float,
                       eig: Optional[HermitianEigenSystem] = None) -> GeneralParams:
    """Parameters (V_0, V_+, U, X) that rebuild a given compression projection of A.

    V = f(A - lambda I)^(-1) ran P is split by its positive component: directions with no P_+ part
    form V_0, the others give V_+ (normalised P_+ parts), U (the P_- parts) and X (the kernel parts
    orthogonal to V_0).

    Args:
        a (ComplexMatrix): Hermitian A.
        projection (CompressionProjection): P with PAP = lambda P.
        lam (float): The compression value.
        eig (Optional[HermitianEigenSystem]): Precomputed eigensystem of A (unshifted).

    Raises:
        NotACompression: If ||PAP - lambda P||_F > 1e-8 * max(1, ||A||_F).
        DegenerateRecovery: If rank or the isometry ||P_+ v|| = ||P_- v|| is lost numerically.

    Returns:
        GeneralParams: Parameters for `construct_projection_general` on the shifted eigensystem.
    """
    a = as_matrix(a)
    if eig is None:
        eig = hermitian_eig(a)
    lam = _real_lambda(lam, MEMBERSHIP_RTOL * scale_of(a))
    residual = verify_compression(a, projection, lam)
    if residual > RECOVERY_RTOL * scale_of(a):
        raise NotACompression(f"Residual {residual:.3e} exceeds {RECOVERY_RTOL * scale_of(a):.3e}.")
    shifted = eig.shifted(lam)
    spaces = _Eigenspaces(shifted)
    d0, _, _ = spaces.dims()
    k = projection.rank
    n = projection.get_dimension()
    q = orthonormalize(shifted.apply_function(spaces.f_inverse) @ projection.frame)
    if q.shape[1] != k:
        raise DegenerateRecovery(f"f^-1 V has rank {q.shape[1]} < {k}.")
    if spaces.plus.shape[1]:
        _, singular, vh = np.linalg.svd(adjoint(spaces.plus) @ q)
    else:
        singular, vh = np.zeros(0), np.eye(k)
    singular = np.concatenate([singular, np.zeros(k - singular.size)])
    rotated = q @ adjoint(vh)
    mixed = singular > RECOVERY_SINGULAR_TOL
    k2 = int(np.sum(mixed))
    k1 = k - k2
    if k1 > d0:
        raise DegenerateRecovery(f"Recovered k1={k1} exceeds dim ker={d0}.")
    kernel_proj = spaces.kernel @ adjoint(spaces.kernel)
    v_zero = np.zeros((n, 0), dtype=complex)
    if k1:
        v_zero = orthonormalize(kernel_proj @ rotated[:, ~mixed])
        if v_zero.shape[1] != k1:
            raise DegenerateRecovery(f"Kernel part has rank {v_zero.shape[1]} < {k1}.")
    mixed_cols = rotated[:, mixed] / singular[mixed]
    v_plus = spaces.plus @ (adjoint(spaces.plus) @ mixed_cols)
    u_image = spaces.minus @ (adjoint(spaces.minus) @ mixed_cols)
    x_image = kernel_proj @ mixed_cols
    x_image = x_image - v_zero @ (adjoint(v_zero) @ x_image)
    defect = isometry_defect(u_image) if k2 else 0.0
    if defect > RECOVERY_ISOMETRY_TOL:
        raise DegenerateRecovery(f"||P_+ v|| != ||P_- v||: ||U*U - I||_F = {defect:.3e}")
    if k2:
        # Snap U and V_+ onto exact isometries.
        u_image = spaces.minus @ scipy.linalg.polar(adjoint(spaces.minus) @ u_image)[0]
        v_plus = spaces.plus @ scipy.linalg.polar(adjoint(spaces.plus) @ v_plus)[0]
    logger.debug(f"Recovered split (k1, k2)=({k1}, {k2}), isometry defect {defect:.3e}")
    return GeneralParams((k1, k2), v_zero, v_plus, u_image, x_image, defect)


def general_matrix_projection(t: ComplexMatrix, k: int) -> Tuple[complex, CompressionProjection]:
    """Rank-k witness for an arbitrary square T when 4k - 3 <= N.

    With T = A + iB, take b = b_(2k-1) and a rank-(2k-1) witness F for B; then a = kth smallest
    eigenvalue of A_0 = F*AF and a rank-k witness Q_0 for A_0 give Q = F Q_0 with Q*TQ = (a + ib) I.

    Raises:
        BadRank: If k is outside [1, N].
        RankHypothesisViolated: If 4k - 3 > N.

    Returns:
        Tuple[complex, CompressionProjection]: (lambda, certified projection).
    """
    t = as_matrix(t)
    n = t.shape[0]
    _check_rank(k, n)
    if 4 * k - 3 > n:
        raise RankHypothesisViolated(f"Need 4k - 3 <= N, got k={k}, N={n}.")
    re_t, im_t = hermitian_parts(t)
    eig_b = hermitian_eig(im_t)
    b = float(eig_b.values[2 * k - 2])
    frame_b = pairing_projection(eig_b, 2 * k - 1, b).frame
    a_0 = adjoint(frame_b) @ re_t @ frame_b
    eig_a0 = hermitian_eig((a_0 + adjoint(a_0)) / 2.0)
    a = float(eig_a0.values[k - 1])
    frame_a0 = pairing_projection(eig_a0, k, a).frame
    lam = complex(a, b)
    projection = certify(t, CompressionProjection(frame_b @ frame_a0, lam))
    logger.debug(f"General matrix witness at lambda={lam}: residual {projection.residual:.3e}")
    return lam, projection
