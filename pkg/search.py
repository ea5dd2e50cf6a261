# pylint: disable=logging-fstring-interpolation, too-many-arguments, too-many-locals, too-many-instance-attributes

"""
Numerical exploration of rank-k numerical ranges by residual minimisation.

`grassmann_search` drives E(V) = V*TV - lambda I_k to zero over N x k isometries with
Levenberg-Marquardt steps: E is linearised along horizontal steps V + QZ (Q spans the orthogonal
complement of V), the damped least-squares step is taken, and the result is pulled back to an
isometry by QR. Random restarts start from Haar isometries seeded by seed + restart.

A residual under `residual_tol` is a certificate that lambda is in the range up to tolerance. A
residual above it is inconclusive: the objective has local minima.
"""

import configparser
import logging
import threading
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from compression import CompressionProjection, verify_compression
from errors import BadRank, InvalidConfig
from linalg_core import (ComplexMatrix, adjoint, as_matrix, frobenius_norm, haar_isometry, hermitian_eig,
                         hermitian_parts)

logger = logging.getLogger(__name__)

ACCEPT_RATIO = 1e-4
STALL_RTOL = 1e-12
MIN_DAMPING = 1e-8
MAX_DAMPING = 1e12
INNER_TOL_FACTOR = 1e-3
BBOX_PADDING = 0.1

BoundingBox = Tuple[float, float, float, float]


class SearchConfig():
    """Restart and stopping parameters for the frame search."""
    def __init__(self, restarts: int = 64, max_iters: int = 2000, step_tol: float = 1e-12,
                 residual_tol: float = 1e-8, seed: int = 0) -> None:
        if restarts < 1 or max_iters < 1:
            raise InvalidConfig(f"Need restarts >= 1 and max_iters >= 1, got {restarts} and {max_iters}.")
        if step_tol <= 0 or residual_tol <= 0:
            raise InvalidConfig(f"Tolerances must be positive, got step_tol={step_tol}, residual_tol={residual_tol}.")
        self.restarts = int(restarts)
        self.max_iters = int(max_iters)
        self.step_tol = float(step_tol)
        self.residual_tol = float(residual_tol)
        self.seed = int(seed)

    def __repr__(self) -> str:
        return (f"SearchConfig: restarts={self.restarts}, max_iters={self.max_iters}, step_tol={self.step_tol}, "
                f"residual_tol={self.residual_tol}, seed={self.seed}")

    @classmethod
    def from_config(cls, section: Optional[configparser.SectionProxy]) -> "SearchConfig":
        """Build from a `[search]` section of config.ini, falling back to defaults for missing keys."""
        defaults = cls()
        if section is None:
            return defaults
        return cls(restarts=section.getint('restarts', fallback=defaults.restarts),
                   max_iters=section.getint('max-iters', fallback=defaults.max_iters),
                   step_tol=section.getfloat('step-tol', fallback=defaults.step_tol),
                   residual_tol=section.getfloat('residual-tol', fallback=defaults.residual_tol),
                   seed=section.getint('seed', fallback=defaults.seed))

    def replace(self, **changes) -> "SearchConfig":
        """Copy with some fields changed."""
        fields = {'restarts': self.restarts, 'max_iters': self.max_iters, 'step_tol': self.step_tol,
                  'residual_tol': self.residual_tol, 'seed': self.seed}
        fields.update(changes)
        return SearchConfig(**fields)


class SearchResult():
    """Best frame over all restarts of a search."""
    def __init__(self, best_frame: CompressionProjection, best_residual: float, restart_index: int,
                 converged: bool) -> None:
        self.best_frame = best_frame
        self.best_residual = float(best_residual)
        self.restart_index = int(restart_index)
        self.converged = bool(converged)

    def __repr__(self) -> str:
        return (f"SearchResult: residual={self.best_residual:.3e}, restart={self.restart_index}, "
                f"converged={self.converged}")

    def describe(self) -> str:
        """One-line report; converged results are numerical evidence, the rest are inconclusive."""
        label = "converged (numerical evidence)" if self.converged else "not converged (inconclusive)"
        return f"{label} residual {self.best_residual:.15g} at restart {self.restart_index}"


def retract(v: ComplexMatrix) -> ComplexMatrix:
    """QR retraction onto isometries, with R's diagonal made positive so the map is continuous."""
    q, r = np.linalg.qr(v)
    diag = np.diag(r)
    phases = np.ones_like(diag)
    nonzero = np.abs(diag) > 0.0
    phases[nonzero] = diag[nonzero] / np.abs(diag[nonzero])
    return q * phases


class CompressionSystem():
    """
    The residual map V -> (V*B_m V - c_m I_k)_m over a list of operators B_m.

    With `targets` each c_m is fixed (c = lambda for a single compression). Without them
    c_m = tr(V*B_m V)/k, so the residual measures how far each compression is from some scalar.

    Methods:
        errors(self, v) -> np.ndarray:
            The k x k error blocks, stacked.
        jacobian(self, v, complement) -> np.ndarray:
            Real Jacobian of the stacked errors along horizontal steps V + complement @ Z.
    """
    def __init__(self, operators: Sequence[ComplexMatrix], targets: Optional[Sequence[complex]] = None) -> None:
        self.operators = np.array([as_matrix(b) for b in operators])
        self.targets = None if targets is None else np.array(targets, dtype=complex)
        self.scale = max([1.0] + [frobenius_norm(b) for b in self.operators])

    def __repr__(self) -> str:
        mode = "free scalars" if self.targets is None else f"targets {self.targets}"
        return f"CompressionSystem: {len(self.operators)} operator(s), {mode}"

    def _remove_scalars(self, blocks: np.ndarray) -> np.ndarray:
        k = blocks.shape[-1]
        if self.targets is None:
            traces = np.trace(blocks, axis1=-2, axis2=-1) / k
            return blocks - traces[..., None, None] * np.eye(k)
        return blocks

    def errors(self, v: ComplexMatrix) -> np.ndarray:
        """(m, k, k) array of V*B_m V - c_m I."""
        k = v.shape[1]
        blocks = np.einsum('ia,mij,jb->mab', np.conj(v), self.operators, v)
        if self.targets is None:
            return self._remove_scalars(blocks)
        return blocks - self.targets[:, None, None] * np.eye(k)

    def jacobian(self, v: ComplexMatrix, complement: ComplexMatrix) -> np.ndarray:
        """Real Jacobian for V -> V + complement @ Z, columns ordered (Re Z, Im Z), rows (Re E, Im E)."""
        k = v.shape[1]
        eye = np.eye(k)
        # A_m = Q*B_m V and C_m = V*B_m Q; a unit Z = e_pq moves row q by A_m[p] and column q by C_m[:, p].
        a = np.einsum('ia,mij,jb->mab', np.conj(complement), self.operators, v)
        c = np.einsum('ia,mij,jb->mab', np.conj(v), self.operators, complement)
        rows = np.einsum('qi,mpj->pqmij', eye, a)
        cols = np.einsum('mip,qj->pqmij', c, eye)
        d_real = self._remove_scalars(rows + cols)
        d_imag = self._remove_scalars(1j * (cols - rows))
        n_params = d_real.shape[0] * d_real.shape[1]
        directions = np.concatenate([d_real.reshape(n_params, -1), d_imag.reshape(n_params, -1)])
        return np.concatenate([directions.real, directions.imag], axis=1).T


def compression_objective(t: ComplexMatrix, lam: complex) -> CompressionSystem:
    """The single-operator system V -> V*TV - lambda I."""
    return CompressionSystem([t], [lam])


def _stacked(err: np.ndarray) -> np.ndarray:
    return np.concatenate([err.real.ravel(), err.imag.ravel()])


def minimize_frame(system: CompressionSystem, v0: ComplexMatrix,
                   cfg: SearchConfig) -> Tuple[ComplexMatrix, float, int]:
    """Levenberg-Marquardt on the error blocks, stepping along the horizontal space and retracting by QR.

    The damping is nu * scale * ||E||, with nu adapted from the ratio of actual to predicted decrease.
    Gauss-Newton steps keep converging at solutions where the Jacobian loses rank, as happens on the
    border of a rank-k range. Stops when sqrt(value) <= 1e-3 * residual_tol, when a step is shorter
    than step_tol or stops decreasing the value, or after max_iters trial steps.

    Args:
        system (CompressionSystem): The error blocks to drive to zero.
        v0 (ComplexMatrix): Starting isometry.
        cfg (SearchConfig): Stopping parameters.

    Returns:
        Tuple[ComplexMatrix, float, int]: (final frame, final value, trial steps used).
    """
    target = (cfg.residual_tol * INNER_TOL_FACTOR) ** 2
    n, k = v0.shape
    v = v0
    err = system.errors(v)
    value = float(np.real(np.vdot(err, err)))
    nu = 1.0
    iteration = 0
    if n == k:
        return v, value, iteration
    for iteration in range(cfg.max_iters):
        if value <= target:
            break
        complement = scipy.linalg.null_space(adjoint(v))
        jac = system.jacobian(v, complement)
        residual = _stacked(err)
        damping = nu * system.scale * np.sqrt(value)
        augmented = np.vstack([jac, np.sqrt(damping) * np.eye(jac.shape[1])])
        rhs = np.concatenate([-residual, np.zeros(jac.shape[1])])
        delta = np.linalg.lstsq(augmented, rhs, rcond=None)[0]
        if np.linalg.norm(delta) < cfg.step_tol:
            break
        predicted = value - float(np.sum((residual + jac @ delta) ** 2))
        half = delta.size // 2
        step = complement @ (delta[:half] + 1j * delta[half:]).reshape(n - k, k)
        candidate = retract(v + step)
        cand_err = system.errors(candidate)
        cand_value = float(np.real(np.vdot(cand_err, cand_err)))
        decrease = value - cand_value
        if predicted <= 0.0 or decrease < ACCEPT_RATIO * predicted:
            if nu >= MAX_DAMPING:
                break
            nu = min(nu * 4.0, MAX_DAMPING)
            continue
        if decrease <= STALL_RTOL * value:
            v, err, value = candidate, cand_err, cand_value
            break
        v, err, value = candidate, cand_err, cand_value
        if decrease > 0.75 * predicted:
            nu = max(nu / 4.0, MIN_DAMPING)
    return v, value, iteration


def best_of_restarts(n: int, k: int, system: CompressionSystem, residual_of: Callable[[ComplexMatrix], float],
                     cfg: SearchConfig, stop_early: bool = True) -> List[Tuple[int, ComplexMatrix, float]]:
    """Run every restart and return (restart_index, frame, residual) triples in restart order.

    With `stop_early` the loop ends at the first restart whose residual meets residual_tol.
    """
    outcomes = []
    for restart in range(cfg.restarts):
        v0 = haar_isometry(n, k, cfg.seed + restart)
        frame, _, iterations = minimize_frame(system, v0, cfg)
        residual = residual_of(frame)
        logger.debug(f"Restart {restart}: residual {residual:.3e} after {iterations} iterations")
        outcomes.append((restart, frame, residual))
        if stop_early and residual <= cfg.residual_tol:
            break
    return outcomes


def grassmann_search(t: ComplexMatrix, k: int, lam: complex, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Search for a rank-k frame compressing T to lambda I_k.

    Args:
        t (ComplexMatrix): N x N matrix.
        k (int): Rank, 1 <= k <= N.
        lam (complex): Candidate compression value.
        cfg (Optional[SearchConfig]): Restart and stopping parameters.

    Raises:
        BadRank: If k is outside [1, N].

    Returns:
        SearchResult: Lowest residual over the restarts, earliest restart on ties.
    """
    t = as_matrix(t)
    n = t.shape[0]
    if not 1 <= k <= n:
        raise BadRank(f"Rank k={k} is outside [1, {n}].")
    cfg = cfg or SearchConfig()
    lam = complex(lam)

    def residual_of(frame: ComplexMatrix) -> float:
        return verify_compression(t, CompressionProjection(frame, lam), lam)

    outcomes = best_of_restarts(n, k, compression_objective(t, lam), residual_of, cfg)
    best_index, best_frame, best_residual = outcomes[0]
    for restart, frame, residual in outcomes[1:]:
        if residual < best_residual:
            best_index, best_frame, best_residual = restart, frame, residual
    converged = best_residual <= cfg.residual_tol
    logger.debug(f"Search k={k} lambda={lam}: best residual {best_residual:.3e} at restart {best_index}")
    return SearchResult(CompressionProjection(best_frame, lam, best_residual), best_residual, best_index, converged)


def default_bbox(t: ComplexMatrix) -> BoundingBox:
    """W(Re T) x W(Im T), padded by 10% of each side (0.1 for a flat side)."""
    re_t, im_t = hermitian_parts(as_matrix(t))
    box = []
    for part in (re_t, im_t):
        values = hermitian_eig(part).values
        lo, hi = float(values[0]), float(values[-1])
        pad = BBOX_PADDING * (hi - lo) if hi > lo else BBOX_PADDING
        box.extend([lo - pad, hi + pad])
    return box[0], box[1], box[2], box[3]


def grid_points(grid: Tuple[int, int], bbox: BoundingBox) -> List[complex]:
    """Row-major grid over the box: x varies fastest. A side with one point sits at its lower edge."""
    nx, ny = grid
    if nx < 1 or ny < 1:
        raise InvalidConfig(f"Scan grid must have at least one point per side, got {nx}x{ny}.")
    x0, x1, y0, y1 = bbox
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    return [complex(x, y) for y in ys for x in xs]


class ScanWorker(threading.Thread):
    """
    A worker thread running `grassmann_search` over a share of the scan grid.

    Attributes:
        t (ComplexMatrix): The matrix being scanned.
        k (int): The rank.
        jobs (Sequence[Tuple[int, complex]]): (grid index, lambda) pairs assigned to this worker.
        cfg (SearchConfig): Base configuration; each grid index gets its own seed.

    Methods:
        run(self) -> None:
            Search every assigned point, storing residuals by grid index.
        get_results(self) -> Dict[int, float]:
            Residuals found so far.
        quit(self) -> None:
            Ask the worker to stop after the current point.
    """
    def __init__(self, t: ComplexMatrix, k: int, jobs: Sequence[Tuple[int, complex]], cfg: SearchConfig):
        super().__init__()
        self.t = t
        self.k = k
        self.jobs = list(jobs)
        self.cfg = cfg
        self.quitting = False
        self.results: Dict[int, float] = {}
        self.error: Optional[Exception] = None

    # Override threading.Thread.run(self)->None
    def run(self):
        """Search every assigned grid point."""
        try:
            for index, lam in self.jobs:
                if self.quitting:
                    break
                point_cfg = self.cfg.replace(seed=self.cfg.seed + index * self.cfg.restarts)
                self.results[index] = grassmann_search(self.t, self.k, lam, point_cfg).best_residual
        except Exception as exc:  # pylint: disable=broad-except
            self.error = exc

    def get_results(self) -> Dict[int, float]:
        """Residuals by grid index."""
        return self.results

    def __repr__(self):
        return f"ScanWorker: {self.name}, k={self.k}, {len(self.results)}/{len(self.jobs)} points done"

    def quit(self):
        """Stop after the current grid point."""
        logger.debug(f"{self.name} asked to quit")
        self.quitting = True


def scan_region(t: ComplexMatrix, k: int, grid: Tuple[int, int], bbox: Optional[BoundingBox] = None,
                cfg: Optional[SearchConfig] = None, restarts: int = 8, workers: int = 1) -> List[Tuple[complex, float]]:
    """Best search residual at every point of a grid over the plane.

    Grid index i uses seed cfg.seed + i * restarts, so the output does not depend on `workers`.

    Args:
        t (ComplexMatrix): N x N matrix.
        k (int): Rank.
        grid (Tuple[int, int]): (nx, ny) points per side.
        bbox (Optional[BoundingBox]): (x0, x1, y0, y1); `default_bbox(t)` when omitted.
        cfg (Optional[SearchConfig]): Base configuration; its restart count is replaced by `restarts`.
        restarts (int): Restarts per grid point.
        workers (int): Number of worker threads.

    Raises:
        BadRank: If k is outside [1, N].
        InvalidConfig: On an empty grid or fewer than one worker.

    Returns:
        List[Tuple[complex, float]]: (lambda, best residual) in row-major grid order.
    """
    t = as_matrix(t)
    n = t.shape[0]
    if not 1 <= k <= n:
        raise BadRank(f"Rank k={k} is outside [1, {n}].")
    if workers < 1:
        raise InvalidConfig(f"Need at least one worker, got {workers}.")
    points = grid_points(grid, default_bbox(t) if bbox is None else bbox)
    point_cfg = (cfg or SearchConfig()).replace(restarts=restarts)
    jobs = list(enumerate(points))
    pool = [ScanWorker(t, k, jobs[w::workers], point_cfg) for w in range(workers)]
    for worker in pool:
        worker.start()
    for worker in pool:
        worker.join()
    residuals: Dict[int, float] = {}
    for worker in pool:
        if worker.error is not None:
            raise worker.error
        residuals.update(worker.get_results())
    logger.info(f"Scanned {len(points)} points with {workers} worker(s)")
    return [(lam, residuals[index]) for index, lam in jobs]
