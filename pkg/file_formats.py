# pylint: disable=logging-fstring-interpolation

"""
JSON file formats for matrices, projections, spectra and error models.

Complex numbers are stored as [re, im] pairs. Floats are written with Python's shortest round-trip
representation, so load(save(x)) reproduces every finite double exactly.

    MatrixFile:     {"dims": [rows, cols], "entries": [[[re, im], ...], ...], "name": ..., "hermitian": ...}
    ProjectionFile: {"N": N, "k": k, "frame": [[[re, im] x N] x k], "lambda": [re, im], "residual": r}
    spectrum:       {"spectrum": [[re, im], ...]}
    error model:    {"kraus": [MatrixFile object, ...]}
"""

import json
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from compression import CompressionProjection
from errors import CompressionError, MalformedFile
from linalg_core import ComplexMatrix, as_matrix, is_hermitian
from qec import CodeReport, ErrorModel

logger = logging.getLogger(__name__)

PROJECTION_FILE_TOL = 1e-8


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(value: Any, where: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise MalformedFile(f"{where}: expected a [re, im] pair, got {value!r}.")
    return complex(value[0], value[1])


def read_json(path: str) -> Any:
    """Load a JSON document, mapping I/O and syntax errors to MalformedFile."""
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except OSError as exc:
        raise MalformedFile(f"Cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def write_json(path: str, document: Any) -> None:
    """Write a JSON document; non-finite numbers are rejected."""
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(document, handle, allow_nan=False)
        handle.write("\n")


class MatrixFile():
    """A complex matrix with optional name and Hermitian flag."""
    def __init__(self, matrix: ComplexMatrix, name: Optional[str] = None, hermitian: Optional[bool] = None) -> None:
        self.matrix = as_matrix(matrix)
        self.name = name
        self.hermitian = hermitian

    def __repr__(self) -> str:
        return f"MatrixFile: {self.name or 'unnamed'} {self.matrix.shape}, hermitian={self.hermitian}"

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document."""
        rows, cols = self.matrix.shape
        document: Dict[str, Any] = {
            "dims": [rows, cols],
            "entries": [[_pair(z) for z in row] for row in self.matrix],
        }
        if self.name is not None:
            document["name"] = self.name
        if self.hermitian is not None:
            document["hermitian"] = self.hermitian
        return document

    @classmethod
    def from_dict(cls, document: Any, where: str = "matrix") -> "MatrixFile":
        """Parse and validate a matrix document.

        Raises:
            MalformedFile: On missing fields, inconsistent dims, bad entries, or a `hermitian: true`
                flag on a matrix that is not Hermitian.
        """
        if not isinstance(document, dict) or "dims" not in document or "entries" not in document:
            raise MalformedFile(f"{where}: a matrix needs 'dims' and 'entries'.")
        dims = document["dims"]
        if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d > 0 for d in dims)):
            raise MalformedFile(f"{where}: 'dims' must be two positive integers, got {dims!r}.")
        rows, cols = dims
        entries = document["entries"]
        if not isinstance(entries, list) or len(entries) != rows:
            raise MalformedFile(f"{where}: expected {rows} rows of entries.")
        matrix = np.zeros((rows, cols), dtype=complex)
        for i, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != cols:
                raise MalformedFile(f"{where}: row {i} must have {cols} entries.")
            for j, value in enumerate(row):
                matrix[i, j] = _complex(value, f"{where} entry ({i}, {j})")
        if not np.all(np.isfinite(matrix)):
            raise MalformedFile(f"{where}: entries must be finite.")
        hermitian = document.get("hermitian")
        if hermitian is not None and not isinstance(hermitian, bool):
            raise MalformedFile(f"{where}: 'hermitian' must be a boolean.")
        if hermitian and not is_hermitian(matrix):
            raise MalformedFile(f"{where}: flagged Hermitian but ||A - A*||_F is above tolerance.")
        name = document.get("name")
        return cls(matrix, name=None if name is None else str(name), hermitian=hermitian)

    @classmethod
    def load(cls, path: str) -> "MatrixFile":
        """Read a MatrixFile from disk."""
        return cls.from_dict(read_json(path), where=path)

    def save(self, path: str) -> None:
        """Write this MatrixFile to disk."""
        write_json(path, self.to_dict())


def projection_to_dict(projection: CompressionProjection) -> Dict[str, Any]:
    """ProjectionFile document for a projection."""
    return {
        "N": projection.get_dimension(),
        "k": projection.rank,
        "frame": [[_pair(z) for z in column] for column in projection.frame.T],
        "lambda": _pair(projection.lam),
        "residual": projection.residual,
    }


def projection_from_dict(document: Any, where: str = "projection") -> CompressionProjection:
    """Parse a ProjectionFile document, re-validating orthonormality at 1e-8.

    Raises:
        MalformedFile: On missing fields, shape disagreement with N and k, or a non-orthonormal frame.
    """
    if not isinstance(document, dict) or not {"N", "k", "frame", "lambda"} <= set(document):
        raise MalformedFile(f"{where}: a projection needs 'N', 'k', 'frame' and 'lambda'.")
    n, k, columns = document["N"], document["k"], document["frame"]
    if not isinstance(columns, list) or len(columns) != k or not all(isinstance(c, list) and len(c) == n for c in columns):
        raise MalformedFile(f"{where}: 'frame' must hold k={k} columns of N={n} entries.")
    frame = np.array([[_complex(z, f"{where} frame") for z in column] for column in columns], dtype=complex).T
    residual = document.get("residual")
    if residual is not None and not isinstance(residual, (int, float)):
        raise MalformedFile(f"{where}: 'residual' must be a number or null.")
    try:
        return CompressionProjection(frame, _complex(document["lambda"], f"{where} lambda"), residual,
                                     frame_tol=PROJECTION_FILE_TOL)
    except CompressionError as exc:
        raise MalformedFile(f"{where}: {exc}") from exc


def load_projection(path: str) -> CompressionProjection:
    """Read a ProjectionFile from disk."""
    return projection_from_dict(read_json(path), where=path)


def save_projection(path: str, projection: CompressionProjection) -> None:
    """Write a ProjectionFile to disk."""
    write_json(path, projection_to_dict(projection))


def load_spectrum(path: str) -> np.ndarray:
    """Read a spectrum file."""
    document = read_json(path)
    if not isinstance(document, dict) or not isinstance(document.get("spectrum"), list) or not document["spectrum"]:
        raise MalformedFile(f"{path}: expected a nonempty 'spectrum' list.")
    return np.array([_complex(z, f"{path} spectrum") for z in document["spectrum"]], dtype=complex)


def save_spectrum(path: str, spectrum) -> None:
    """Write a spectrum file."""
    write_json(path, {"spectrum": [_pair(z) for z in np.ravel(spectrum)]})


def load_error_model(path: str) -> ErrorModel:
    """Read an error-model file; a model that is not trace preserving is accepted with a warning."""
    document = read_json(path)
    if not isinstance(document, dict) or not isinstance(document.get("kraus"), list):
        raise MalformedFile(f"{path}: expected a 'kraus' list of matrices.")
    operators = [MatrixFile.from_dict(op, where=f"{path} kraus[{idx}]").matrix
                 for idx, op in enumerate(document["kraus"])]
    try:
        model = ErrorModel(operators)
    except CompressionError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
    if not model.is_trace_preserving():
        logger.warning(f"{path}: Kraus operators are not trace preserving")
    return model


def save_error_model(path: str, model: ErrorModel) -> None:
    """Write an error-model file."""
    write_json(path, {"kraus": [MatrixFile(op).to_dict() for op in model.kraus]})


def code_report_to_dict(report: CodeReport) -> Dict[str, Any]:
    """JSON document for a code report."""
    return {
        "correctable": report.correctable,
        "max_residual": report.max_residual,
        "tolerance": report.tolerance,
        "lambda": [[_pair(z) for z in row] for row in report.lambda_matrix],
        "residuals": [[float(r) for r in row] for row in report.residuals],
    }
