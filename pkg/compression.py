# pylint: disable=logging-fstring-interpolation

"""
Rank-k compression projections and the residual oracle used to certify them.

A `CompressionProjection` stores the N x k orthonormal frame spanning ran P rather than the
N x N projection itself; P = frame @ frame*. `verify_compression` evaluates
||PTP - lam P||_F as ||frame* T frame - lam I_k||_F, which is the same number because the
frame is an isometry.
"""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from errors import FrameNotOrthonormal, ShapeMismatch
from linalg_core import ComplexMatrix, adjoint, as_matrix, direct_sum, frobenius_norm, isometry_defect

logger = logging.getLogger(__name__)

FRAME_TOL = 1e-10


class CompressionProjection():
    """Rank-k orthogonal projection given by an orthonormal frame, together with its compression
    value and (once verified) its residual ||PTP - lam P||_F.
    """
    def __init__(self, frame: ComplexMatrix, lam: complex, residual: Optional[float] = None,
                 frame_tol: float = FRAME_TOL) -> None:
        frame = as_matrix(frame)
        if frame.shape[1] == 0 or frame.shape[1] > frame.shape[0]:
            raise FrameNotOrthonormal(f"A rank-k frame needs 1 <= k <= N, got shape {frame.shape}.")
        defect = isometry_defect(frame)
        if defect > frame_tol:
            raise FrameNotOrthonormal(f"Frame columns are not orthonormal: ||F*F - I||_F = {defect:.3e}")
        frame = frame.copy()
        frame.flags.writeable = False
        self.frame = frame
        self.rank = frame.shape[1]
        self.lam = complex(lam)
        self.residual = None if residual is None else float(residual)

    def __repr__(self) -> str:
        residual = "unverified" if self.residual is None else f"{self.residual:.3e}"
        return f"CompressionProjection: N={self.get_dimension()}, k={self.rank}, lambda={self.lam}, residual={residual}"

    def get_dimension(self) -> int:
        """Ambient dimension N."""
        return self.frame.shape[0]

    def get_rank(self) -> int:
        """Rank k of the projection."""
        return self.rank

    def projector(self) -> ComplexMatrix:
        """The N x N projection P = frame frame*."""
        return self.frame @ adjoint(self.frame)

    def with_residual(self, residual: float, lam: Optional[complex] = None) -> "CompressionProjection":
        """Copy of this projection with a recorded residual (and optionally a new lambda)."""
        return CompressionProjection(self.frame, self.lam if lam is None else lam, residual)


def verify_compression(t: ComplexMatrix, projection: CompressionProjection, lam: complex) -> float:
    """Residual ||PTP - lam P||_F of a projection against a candidate compression value.

    Args:
        t (ComplexMatrix): N x N matrix.
        projection (CompressionProjection): The rank-k projection.
        lam (complex): Candidate compression value.

    Raises:
        FrameNotOrthonormal: If the frame has drifted away from orthonormality.
        ShapeMismatch: If the frame does not fit `t`.

    Returns:
        float: The residual.
    """
    t = as_matrix(t)
    frame = projection.frame
    if t.shape[0] != t.shape[1] or t.shape[0] != frame.shape[0]:
        raise ShapeMismatch(f"Frame {frame.shape} does not fit matrix {t.shape}.")
    defect = isometry_defect(frame)
    if defect > FRAME_TOL:
        raise FrameNotOrthonormal(f"Frame columns are not orthonormal: ||F*F - I||_F = {defect:.3e}")
    k = frame.shape[1]
    return frobenius_norm(adjoint(frame) @ t @ frame - complex(lam) * np.eye(k))


def certify(t: ComplexMatrix, projection: CompressionProjection, lam: Optional[complex] = None) -> CompressionProjection:
    """Verify `projection` against `t` and return a copy carrying the residual.

    Args:
        t (ComplexMatrix): N x N matrix.
        projection (CompressionProjection): The projection to certify.
        lam (Optional[complex]): Compression value; defaults to the projection's own.

    Returns:
        CompressionProjection: The same frame with `residual` set.
    """
    lam = projection.lam if lam is None else complex(lam)
    residual = verify_compression(t, projection, lam)
    logger.debug(f"Certified rank-{projection.rank} projection at lambda={lam}: residual {residual:.3e}")
    return projection.with_residual(residual, lam)


def direct_sum_projection(first: CompressionProjection, second: CompressionProjection) -> CompressionProjection:
    """Block frame first (+) second, a witness for the direct sum of the two compressed matrices.

    The compression value is taken from `first`; callers composing witnesses for a common lambda
    should verify against the block-diagonal matrix.
    """
    return CompressionProjection(direct_sum(first.frame, second.frame), first.lam)


def dilation_blocks(t: ComplexMatrix, projection: CompressionProjection) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """Exhibit T as a dilation of its compression: complete the frame to a unitary W and return
    (W, W* T W). When the projection certifies lam, the leading k x k block of W* T W is lam I_k.

    Args:
        t (ComplexMatrix): N x N matrix.
        projection (CompressionProjection): A rank-k projection.

    Returns:
        Tuple[ComplexMatrix, ComplexMatrix]: The unitary W and the block matrix W* T W.
    """
    t = as_matrix(t)
    frame = projection.frame
    if t.shape[0] != frame.shape[0]:
        raise ShapeMismatch(f"Frame {frame.shape} does not fit matrix {t.shape}.")
    complement = scipy.linalg.null_space(adjoint(frame))
    unitary = np.hstack([frame, complement])
    return unitary, adjoint(unitary) @ t @ unitary
