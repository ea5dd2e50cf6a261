# pylint: disable=logging-fstring-interpolation, too-many-locals

"""
Error-correction conditions as joint compression problems.

A code space C with projection P_C corrects the error model {A_i} exactly when
P_C A_i* A_j P_C = lambda_ij P_C for all i, j, i.e. when every product A_i* A_j compresses to a
scalar on C. `code_check` tests a given code; `joint_search` looks for codes by minimising the
error blocks of every product at once with the same Levenberg-Marquardt loop as
`search.grassmann_search`.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from compression import CompressionProjection
from errors import BadRank, InvalidParameters, ShapeMismatch
from linalg_core import ComplexMatrix, adjoint, as_matrix, frobenius_norm, is_square, subspace_distance
from search import CompressionSystem, SearchConfig, best_of_restarts

logger = logging.getLogger(__name__)

CODE_TOL = 1e-10
DISTINCT_ANGLE = 1e-6
TRACE_PRESERVING_TOL = 1e-10

PAULIS = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


class ErrorModel():
    """Kraus operators {A_i}, all N x N."""
    def __init__(self, kraus: Sequence[ComplexMatrix]) -> None:
        operators = [as_matrix(op) for op in kraus]
        if not operators:
            raise ShapeMismatch("An error model needs at least one operator.")
        n = operators[0].shape[0]
        for idx, op in enumerate(operators):
            if not is_square(op) or op.shape[0] != n:
                raise ShapeMismatch(f"Kraus operator {idx} has shape {op.shape}, expected {(n, n)}.")
        self.kraus = operators

    def __repr__(self) -> str:
        return f"ErrorModel: {len(self.kraus)} operators on C^{self.get_dimension()}"

    def __len__(self) -> int:
        return len(self.kraus)

    def get_dimension(self) -> int:
        """N."""
        return self.kraus[0].shape[0]

    def get_scale(self) -> float:
        """max(1, max_i ||A_i||_F^2), the reference for code tolerances."""
        return max(1.0, max(frobenius_norm(op) ** 2 for op in self.kraus))

    def products(self) -> List[List[ComplexMatrix]]:
        """products()[i][j] = A_i* A_j."""
        return [[adjoint(a_i) @ a_j for a_j in self.kraus] for a_i in self.kraus]

    def is_trace_preserving(self, tol: float = TRACE_PRESERVING_TOL) -> bool:
        """Whether sum_i A_i* A_i = I within tol."""
        total = sum(adjoint(op) @ op for op in self.kraus)
        return frobenius_norm(total - np.eye(self.get_dimension())) <= tol


class CodeReport():
    """lambda_ij estimates and residuals of a code check.

    Attributes:
        lambda_matrix: m x m complex, lambda_ij = tr(F* A_i* A_j F)/k.
        residuals: m x m real, ||F* A_i* A_j F - lambda_ij I_k||_F.
        max_residual: Largest entry of `residuals`.
        correctable: max_residual <= tolerance.
        tolerance: The absolute threshold used.
    """
    def __init__(self, lambda_matrix: np.ndarray, residuals: np.ndarray, tolerance: float) -> None:
        self.lambda_matrix = lambda_matrix
        self.residuals = residuals
        self.max_residual = float(np.max(residuals))
        self.tolerance = float(tolerance)
        self.correctable = self.max_residual <= self.tolerance

    def __repr__(self) -> str:
        return f"CodeReport: correctable={self.correctable}, max residual={self.max_residual:.3e}, tol={self.tolerance:.3e}"

    def describe(self) -> str:
        """Human-readable report with 15 significant digits."""
        lines = [f"correctable {'yes' if self.correctable else 'no'}",
                 f"max_residual {self.max_residual:.15g}",
                 f"tolerance {self.tolerance:.15g}",
                 "lambda"]
        for row in self.lambda_matrix:
            lines.append(" ".join(f"{z.real + 0.0:.15g}{z.imag + 0.0:+.15g}i" for z in row))
        return "\n".join(lines)


def code_check(errors: ErrorModel, projection: CompressionProjection, tol: float = CODE_TOL) -> CodeReport:
    """Test P_C A_i* A_j P_C = lambda_ij P_C for every pair of Kraus operators.

    Args:
        errors (ErrorModel): The error model.
        projection (CompressionProjection): The code space.
        tol (float): Relative tolerance; the threshold is tol * max(1, max_i ||A_i||_F^2).

    Raises:
        ShapeMismatch: If the code does not live in C^N.

    Returns:
        CodeReport: lambda_ij, residuals and the verdict.
    """
    n = errors.get_dimension()
    if projection.get_dimension() != n:
        raise ShapeMismatch(f"Code frame lives in C^{projection.get_dimension()}, error model in C^{n}.")
    frame = projection.frame
    k = projection.rank
    images = [op @ frame for op in errors.kraus]
    m = len(images)
    lambdas = np.zeros((m, m), dtype=complex)
    residuals = np.zeros((m, m))
    for i, b_i in enumerate(images):
        for j, b_j in enumerate(images):
            block = adjoint(b_i) @ b_j
            lambdas[i, j] = np.trace(block) / k
            residuals[i, j] = frobenius_norm(block - lambdas[i, j] * np.eye(k))
    return CodeReport(lambdas, residuals, tol * errors.get_scale())


def joint_search(errors: ErrorModel, k: int, cfg: Optional[SearchConfig] = None) -> List[Tuple[CompressionProjection, CodeReport]]:
    """Search for rank-k codes correcting `errors`.

    Every restart is run; frames whose code check passes at cfg.residual_tol are kept, ranked by
    max_residual (then restart order), and deduplicated by largest principal angle > 1e-6.

    Args:
        errors (ErrorModel): The error model.
        k (int): Code dimension, 2 <= k <= N.
        cfg (Optional[SearchConfig]): Restart and stopping parameters.

    Raises:
        BadRank: If k is outside [2, N].

    Returns:
        List[Tuple[CompressionProjection, CodeReport]]: Distinct correctable codes, best first.
    """
    n = errors.get_dimension()
    if not 2 <= k <= n:
        raise BadRank(f"Code dimension k={k} is outside [2, {n}].")
    cfg = cfg or SearchConfig()
    products = [b for row in errors.products() for b in row]
    tol = cfg.residual_tol / errors.get_scale()

    def residual_of(frame: ComplexMatrix) -> float:
        return code_check(errors, CompressionProjection(frame, 0.0), tol).max_residual

    outcomes = best_of_restarts(n, k, CompressionSystem(products), residual_of, cfg, stop_early=False)
    candidates = sorted((residual, restart, frame) for restart, frame, residual in outcomes
                        if residual <= cfg.residual_tol)
    codes: List[Tuple[CompressionProjection, CodeReport]] = []
    for _, restart, frame in candidates:
        if any(subspace_distance(frame, kept.frame) <= DISTINCT_ANGLE for kept, _ in codes):
            continue
        report = code_check(errors, CompressionProjection(frame, 0.0), tol)
        if not report.correctable:
            continue
        projection = CompressionProjection(frame, report.lambda_matrix[0, 0], report.max_residual)
        logger.debug(f"Code from restart {restart}: max residual {report.max_residual:.3e}")
        codes.append((projection, report))
    logger.info(f"Joint search k={k}: {len(codes)} distinct code(s) from {len(outcomes)} restarts")
    return codes


def pauli_operator(label: str) -> ComplexMatrix:
    """Tensor product of Paulis from a label such as `XIZ` (leftmost factor is qubit 1)."""
    if not label:
        raise InvalidParameters("Empty Pauli label.")
    result = np.array([[1.0 + 0.0j]])
    for letter in label.upper():
        if letter not in PAULIS:
            raise InvalidParameters(f"Unknown Pauli '{letter}' in '{label}'.")
        result = np.kron(result, PAULIS[letter])
    return result


def single_qubit_errors(letter: str, n_qubits: int) -> List[ComplexMatrix]:
    """[I, P_1, ..., P_n] for the single-qubit Pauli `letter` acting on each qubit in turn."""
    ops = [pauli_operator('I' * n_qubits)]
    for qubit in range(n_qubits):
        ops.append(pauli_operator('I' * qubit + letter + 'I' * (n_qubits - qubit - 1)))
    return ops


def bit_flip_model(n_qubits: int = 3, probability: Optional[float] = None) -> ErrorModel:
    """Identity plus one X error per qubit.

    With `probability` p the operators are weighted sqrt(1 - n p) and sqrt(p), which makes the model
    trace preserving; without it they are left unweighted.
    """
    ops = single_qubit_errors('X', n_qubits)
    if probability is None:
        return ErrorModel(ops)
    if not 0.0 <= probability * n_qubits <= 1.0:
        raise InvalidParameters(f"Need 0 <= n p <= 1, got p={probability} for {n_qubits} qubits.")
    weights = [np.sqrt(1.0 - n_qubits * probability)] + [np.sqrt(probability)] * n_qubits
    return ErrorModel([w * op for w, op in zip(weights, ops)])


def complete_dephasing_model(n: int = 2) -> ErrorModel:
    """Projections |i><i| onto the computational basis of C^n."""
    ops = []
    for idx in range(n):
        op = np.zeros((n, n), dtype=complex)
        op[idx, idx] = 1.0
        ops.append(op)
    return ErrorModel(ops)


def repetition_code(n_qubits: int = 3) -> CompressionProjection:
    """Code space span{|0...0>, |1...1>}."""
    dim = 2 ** n_qubits
    frame = np.zeros((dim, 2), dtype=complex)
    frame[0, 0] = 1.0
    frame[dim - 1, 1] = 1.0
    return CompressionProjection(frame, 1.0)
