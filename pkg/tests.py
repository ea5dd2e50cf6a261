# pylint: disable=line-too-long, super-with-arguments, too-many-public-methods

"""
This module contains unit tests for the rank-k numerical range toolkit.

The `CoreLinalgTests` class covers `linalg_core`:
    - eigendecomposition of small and random Hermitian matrices, compression, orthonormalisation,
      Haar isometries and principal angles.

The `HermitianRangeTests` class covers `hermitian_range`:
    - interval / singleton / empty ranges, membership, the nested chain, the affine law,
      direct-sum containment, compressed numerical ranges and the large-k kernel check.

The `PairingTests` class covers the pairing builders in `projections`:
    - pairing weights, shared eigenvalues, bad pairings, free phases, enumeration and rank-one witnesses.

The `GeneralConstructionTests` class covers the complete construction in `projections`:
    - hand-built parameters, kernel-only splits, random draws, parameter recovery and the
      arbitrary-matrix witness.

The `CompressionTests` class covers `compression`:
    - residual covariance under affine maps and adjoints, block witnesses and dilations.

The `NormalGeometryTests` class covers `normal_geometry`:
    - hull intersections of roots of unity, membership, rectangle bounds, large-k checks and spectra.

The `SearchTests` class covers `search`:
    - configuration, convergence on known members and border points, non-members, determinism and grid scans.

The `QECTests` class covers `qec`:
    - code checks for bit-flip and phase-flip models, covariance, and code search.

The `FileFormatTests` and `ValidationTests` classes cover JSON files and command-line value parsing.

The `CommandLineTests` class runs the click commands in `main` against the fixtures in files/, including
exit codes and byte-identical repeat runs.

Each test case class inherits from the `unittest.TestCase` class.

This module can be run as a script to execute all unit tests using the `unittest.main()` method.
"""

import configparser
import itertools
import json
import os
import tempfile
import unittest

import numpy as np
from click.testing import CliRunner

import validation
from compression import CompressionProjection, certify, dilation_blocks, direct_sum_projection, verify_compression
from errors import (BadPairing, BadRank, EmptySpan, FrameNotOrthonormal, InfeasibleSplit, InvalidConfig,
                    InvalidParameters, LambdaOutOfRange, MalformedFile, NoConvergence, NotACompression, NotHermitian,
                    NotIsometry, NotNormal, RankHypothesisViolated, ShapeMismatch, TooManySubsets)
from file_formats import (MatrixFile, load_error_model, load_projection, load_spectrum, projection_from_dict,
                          projection_to_dict, save_error_model, save_spectrum)
from hermitian_range import (RangeKind, RankKRange, RegionStatus, compressed_numerical_range, hermitian_range, is_nested,
                             large_k_check, membership_hermitian, range_chain)
from linalg_core import (compress, direct_sum, haar_isometry, hermitian_eig, isometry_defect, orthonormalize,
                         subspace_distance)
from main import cli
from normal_geometry import (RegionKind, cyclic_shift, hull_intersection_region, hull_range, normal_large_k_check,
                             normal_spectrum, point_in_region, random_normal, rectangle_bound, roots_of_unity)
from projections import (GeneralParams, construct_projection_general, default_pairing, enumerate_pairings,
                         feasible_splits, general_matrix_projection, pairing_params, pairing_projection,
                         rank_one_projection, recover_parameters, sample_general_params)
from qec import (ErrorModel, bit_flip_model, code_check, complete_dephasing_model, joint_search, pauli_operator,
                 repetition_code)
from search import SearchConfig, default_bbox, grassmann_search, grid_points, scan_region

FILES = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'files')


def fixture(name: str) -> str:
    """Path of a file under files/."""
    return os.path.join(FILES, name)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """(G + G*)/2 for a complex Gaussian G."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def random_complex(n: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian n x n matrix."""
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def in_hull(points, z: complex, tol: float = 1e-9) -> bool:
    """Whether z lies in the convex hull of `points`: near a point, a segment or a proper triangle."""
    points = [complex(p) for p in points]
    if any(abs(z - p) <= tol for p in points):
        return True
    for p, q in itertools.combinations(points, 2):
        if p == q:
            continue
        t = min(1.0, max(0.0, ((z - p) * (q - p).conjugate()).real / abs(q - p) ** 2))
        if abs(p + t * (q - p) - z) <= tol:
            return True
    for p, q, r in itertools.combinations(points, 3):
        if abs(((q - p).conjugate() * (r - p)).imag) <= tol:
            continue
        crosses = [((b - a).conjugate() * (z - a)).imag for a, b in ((p, q), (q, r), (r, p))]
        if all(c >= -tol for c in crosses) or all(c <= tol for c in crosses):
            return True
    return False


class CoreLinalgTests(unittest.TestCase):
    """Unit tests for the linalg_core module: Jacobi eigensystems, compressions, frames and angles.
    """
    def __init__(self, *args, **kwargs):
        super(CoreLinalgTests, self).__init__(*args, **kwargs)

    def test_diagonal_eigensystem(self):
        """A diagonal matrix needs no rotations: sorted values and permuted unit vectors."""
        eig = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(eig.values, [1.0, 2.0, 3.0], err_msg="Eigenvalues must come out ascending")
        expected = np.eye(3)[:, [1, 2, 0]]
        np.testing.assert_allclose(np.abs(eig.vectors), expected, atol=1e-15, err_msg="Eigenvectors are the permuted basis")

    def test_swap_matrix(self):
        """[[0,1],[1,0]] has eigenvalues -1, 1 with eigenvector (1,-1)/sqrt(2) for -1."""
        eig = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(eig.values, [-1.0, 1.0], atol=1e-14)
        overlap = abs(np.vdot(eig.vectors[:, 0], np.array([1.0, -1.0]) / np.sqrt(2.0)))
        self.assertAlmostEqual(overlap, 1.0, places=12, msg="Lowest eigenvector must be (1,-1)/sqrt(2) up to phase")

    def test_random_reconstruction(self):
        """Random Hermitian matrices are reconstructed to 1e-10 relative accuracy."""
        rng = np.random.default_rng(11)
        for n in (1, 2, 5, 8):
            a = random_hermitian(n, rng)
            eig = hermitian_eig(a)
            scale = max(1.0, np.linalg.norm(a))
            self.assertLessEqual(np.linalg.norm(eig.reconstruct() - a), 1e-10 * scale, f"Reconstruction failed for N={n}")
            self.assertLessEqual(isometry_defect(eig.vectors), 1e-12 * n, f"Eigenvectors not orthonormal for N={n}")
            np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(a), atol=1e-10 * scale)
            self.assertTrue(np.all(np.diff(eig.values) >= 0.0), "Eigenvalues must be ascending")

    def test_eigensolver_errors(self):
        """Non-Hermitian input and an exhausted sweep budget are reported."""
        with self.assertRaises(NotHermitian):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with self.assertRaises(NoConvergence):
            hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]), max_sweeps=0)

    def test_shifted_eigensystem(self):
        """Shifting moves the eigenvalues and keeps the eigenvectors."""
        eig = hermitian_eig(np.diag([1.0, 2.0, 4.0]))
        shifted = eig.shifted(2.0)
        np.testing.assert_allclose(shifted.values, [-1.0, 0.0, 2.0])
        np.testing.assert_allclose(shifted.vectors, eig.vectors)

    def test_compress(self):
        """Compression to a leading block, to a diagonal vector, and shape / isometry errors."""
        t = np.arange(16, dtype=complex).reshape(4, 4)
        v = np.eye(4)[:, :2]
        np.testing.assert_allclose(compress(t, v), t[:2, :2], err_msg="Leading principal submatrix expected")
        np.testing.assert_allclose(compress(np.eye(3), np.eye(3)[:, :2]), np.eye(2))
        half = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
        self.assertAlmostEqual(compress(np.diag([1.0, 2.0]), half)[0, 0].real, 1.5, places=14)
        with self.assertRaises(NotIsometry):
            compress(np.eye(2), np.array([[1.0], [1.0]]))
        with self.assertRaises(ShapeMismatch):
            compress(np.eye(3), np.eye(2)[:, :1])

    def test_compress_hermitian_and_adjoint(self):
        """Compressions of Hermitian matrices are Hermitian and compress(T*) = compress(T)*."""
        rng = np.random.default_rng(3)
        a = random_hermitian(6, rng)
        t = random_complex(6, rng)
        v = haar_isometry(6, 3, 4)
        c = compress(a, v)
        self.assertLessEqual(np.linalg.norm(c - c.conj().T), 1e-12, "Compressed Hermitian matrix must stay Hermitian")
        np.testing.assert_allclose(compress(t.conj().T, v), compress(t, v).conj().T, atol=1e-12)

    def test_orthonormalize(self):
        """Gram-Schmidt keeps independent directions and drops dependent ones."""
        np.testing.assert_allclose(orthonormalize([[2.0, 0.0], [0.0, 3.0]]), np.eye(2), atol=1e-15)
        self.assertEqual(orthonormalize([[1.0, 0.0], [1.0, 1e-16]]).shape[1], 1, "A near-parallel vector adds nothing")
        basis = orthonormalize([[1.0, 1.0], [1.0, -1.0]])
        self.assertEqual(basis.shape[1], 2)
        self.assertLessEqual(isometry_defect(basis), 1e-14)
        with self.assertRaises(EmptySpan):
            orthonormalize([[0.0, 0.0], [0.0, 0.0]])

    def test_haar_isometry(self):
        """Haar draws are isometries, reproducible per seed and different across seeds."""
        scalar = haar_isometry(1, 1, 0)
        self.assertAlmostEqual(abs(scalar[0, 0]), 1.0, places=14, msg="1x1 draw is a unit-modulus scalar")
        v = haar_isometry(4, 2, 7)
        self.assertLessEqual(isometry_defect(v), 1e-12)
        np.testing.assert_array_equal(v, haar_isometry(4, 2, 7), err_msg="Same seed must give the same draw")
        self.assertGreater(subspace_distance(haar_isometry(4, 2, 1), haar_isometry(4, 2, 2)), 0.1)
        with self.assertRaises(ShapeMismatch):
            haar_isometry(2, 3, 0)

    def test_subspace_distance(self):
        """The same span in two bases is at distance zero; orthogonal spans at pi/2."""
        v = haar_isometry(5, 2, 9)
        mixed = v @ np.array([[1.0, 2.0], [3.0, -1.0j]])
        self.assertLessEqual(subspace_distance(v, mixed), 1e-10)
        self.assertAlmostEqual(subspace_distance(np.eye(3)[:, :1], np.eye(3)[:, 1:2]), np.pi / 2, places=12)


class HermitianRangeTests(unittest.TestCase):
    """Tests the rank-k ranges of Hermitian matrices from the hermitian_range module.
    """
    def __init__(self, *args, **kwargs):
        super(HermitianRangeTests, self).__init__(*args, **kwargs)

    def test_diagonal_intervals(self):
        """diag(1..6): rank 2 gives [2, 5] and rank 3 gives [3, 4]."""
        a = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        self.assertEqual(hermitian_range(a, 2), RankKRange.interval(2.0, 5.0))
        self.assertEqual(hermitian_range(a, 3), RankKRange.interval(3.0, 4.0))
        self.assertEqual(hermitian_range(a, 2).describe(), "Interval 2 5")

    def test_identity_singletons(self):
        """The identity compresses to 1 at every rank."""
        for k in range(1, 5):
            result = hermitian_range(np.eye(4), k)
            self.assertEqual(result.kind, RangeKind.SINGLETON, f"I_4 at rank {k} must be a singleton")
            self.assertEqual(result.describe(), "Singleton 1")

    def test_empty_range(self):
        """diag(1,2,3,4) has an empty rank-3 range."""
        result = hermitian_range(np.diag([1.0, 2.0, 3.0, 4.0]), 3)
        self.assertTrue(result.is_empty())
        self.assertEqual(result.describe(), "Empty")

    def test_chain(self):
        """diag(0,0,5) gives [0,5], {0}, Empty and the chain is nested."""
        chain = range_chain(np.diag([0.0, 0.0, 5.0]))
        self.assertEqual(chain[0], RankKRange.interval(0.0, 5.0))
        self.assertEqual(chain[1], RankKRange.singleton(0.0))
        self.assertTrue(chain[2].is_empty())
        self.assertTrue(is_nested(chain))

    def test_bad_rank(self):
        """Ranks outside [1, N] are rejected."""
        with self.assertRaises(BadRank):
            hermitian_range(np.eye(3), 0)
        with self.assertRaises(BadRank):
            hermitian_range(np.eye(3), 4)

    def test_membership(self):
        """Closed membership with a small tolerance at the endpoints."""
        a = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        self.assertTrue(membership_hermitian(a, 2, 3.5))
        self.assertTrue(membership_hermitian(a, 2, 5.0 + 1e-12), "Endpoint tolerance must accept rounding noise")
        self.assertFalse(membership_hermitian(a, 2, 5.1))
        self.assertFalse(membership_hermitian(a, 2, 3.0 + 0.1j), "Non-real values are never in a Hermitian range")

    def test_random_chain_properties(self):
        """1000 random chains are nested and nonempty up to k = ceil(N/2)."""
        rng = np.random.default_rng(21)
        for _ in range(1000):
            n = int(rng.integers(1, 11))
            a = random_hermitian(n, rng)
            chain = range_chain(a)
            self.assertTrue(is_nested(chain, 1e-10 * max(1.0, np.linalg.norm(a))), f"Chain not nested for N={n}")
            for k in range(1, (n + 1) // 2 + 1):
                self.assertFalse(chain[k - 1].is_empty(), f"Rank {k} of N={n} must be nonempty")

    def test_affine_law(self):
        """L_k(alpha A + beta I) = alpha L_k(A) + beta, with the ends swapped for alpha < 0."""
        rng = np.random.default_rng(5)
        a = random_hermitian(6, rng)
        lo, hi = hermitian_range(a, 2).bounds()
        for alpha, beta in ((2.5, -1.0), (-0.5, 3.0)):
            new_lo, new_hi = hermitian_range(alpha * a + beta * np.eye(6), 2).bounds()
            expected = sorted((alpha * lo + beta, alpha * hi + beta))
            self.assertAlmostEqual(new_lo, expected[0], places=9)
            self.assertAlmostEqual(new_hi, expected[1], places=9)

    def test_direct_sum_containment(self):
        """Ranges of the blocks sit inside the range of the direct sum, and L_k1(A) n L_k2(B) inside L_(k1+k2)."""
        rng = np.random.default_rng(8)
        a = random_hermitian(4, rng)
        b = random_hermitian(3, rng)
        total = direct_sum(a, b)
        self.assertTrue(hermitian_range(total, 2).contains_range(hermitian_range(a, 2), 1e-10))
        self.assertTrue(hermitian_range(total, 2).contains_range(hermitian_range(b, 2), 1e-10))
        a_lo, a_hi = hermitian_range(a, 1).bounds()
        b_lo, b_hi = hermitian_range(b, 2).bounds()
        lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
        if lo <= hi:
            self.assertTrue(hermitian_range(total, 3).contains(lo, 1e-10))
            self.assertTrue(hermitian_range(total, 3).contains(hi, 1e-10))

    def test_compressed_numerical_range(self):
        """W(V*AV) for an isometry onto N-k+1 dimensions contains the rank-k range."""
        rng = np.random.default_rng(13)
        a = random_hermitian(6, rng)
        target = hermitian_range(a, 2)
        for seed in range(5):
            v = haar_isometry(6, 5, seed)
            self.assertTrue(compressed_numerical_range(a, v).contains_range(target, 1e-10), f"Seed {seed} broke containment")

    def test_large_k_scalar(self):
        """A rank-N witness for 2 I_3 confirms a full kernel and a scalar matrix."""
        report = large_k_check(2.0 * np.eye(3), 3, 2.0, CompressionProjection(np.eye(3), 2.0))
        self.assertEqual(report.kernel_dim, 3)
        self.assertEqual(report.required_dim, 3)
        self.assertTrue(report.scalar_confirmed)

    def test_large_k_multiplicity(self):
        """Rank-2 witnesses for 3 x 3 matrices sit on eigenvalues of multiplicity >= 1."""
        report = large_k_check(np.diag([1.0, 1.0, 2.0]), 2, 1.0, CompressionProjection(np.eye(3)[:, :2], 1.0))
        self.assertGreaterEqual(report.kernel_dim, 1)
        eig = hermitian_eig(np.diag([1.0, 2.0, 3.0]))
        projection = pairing_projection(eig, 2, 2.0)
        report = large_k_check(np.diag([1.0, 2.0, 3.0]), 2, 2.0, projection)
        self.assertEqual(report.kernel_dim, 1)
        self.assertIsNone(report.scalar_confirmed)

    def test_large_k_random_witnesses(self):
        """200 random witnesses with 2k > N sit on eigenvalues of multiplicity >= 2k - N."""
        rng = np.random.default_rng(67)
        for trial in range(200):
            n = int(rng.integers(1, 9))
            k = int(rng.integers(n // 2 + 1, n + 1))
            required = 2 * k - n
            mu = rng.uniform(-1.0, 1.0)
            values = np.concatenate([mu - rng.uniform(0.5, 2.0, n - k), np.full(required, mu), mu + rng.uniform(0.5, 2.0, n - k)])
            basis = haar_isometry(n, n, trial)
            a = basis @ np.diag(values) @ basis.conj().T
            a = (a + a.conj().T) / 2.0
            eig = hermitian_eig(a)
            self.assertEqual(hermitian_range(a, k, eig).kind, RangeKind.SINGLETON, f"Trial {trial}: N={n}, k={k}")
            lam = eig.values[k - 1]
            report = large_k_check(a, k, lam, pairing_projection(eig, k, lam))
            self.assertGreaterEqual(report.kernel_dim, required, f"Trial {trial}: N={n}, k={k}")
            self.assertEqual(report.required_dim, required)
            if k == n:
                self.assertTrue(report.scalar_confirmed, f"Trial {trial}: a rank-N witness needs a scalar matrix")

    def test_large_k_errors(self):
        """2k <= N and non-witnesses are rejected."""
        with self.assertRaises(RankHypothesisViolated):
            large_k_check(np.diag([1.0, 2.0, 3.0, 4.0]), 2, 2.5, CompressionProjection(np.eye(4)[:, :2], 2.5))
        with self.assertRaises(NotACompression):
            large_k_check(np.diag([1.0, 2.0, 3.0]), 3, 2.0, CompressionProjection(np.eye(3), 2.0))


class PairingTests(unittest.TestCase):
    """Unit tests for the pairing construction in the projections module
    """
    def __init__(self, *args, **kwargs):
        super(PairingTests, self).__init__(*args, **kwargs)

    def test_two_level(self):
        """diag(0,2) at 0.5 mixes with cos^2 beta = 0.75."""
        eig = hermitian_eig(np.diag([0.0, 2.0]))
        params = pairing_params(eig, 1, 0.5)
        np.testing.assert_allclose(params.cos2_beta, [0.75])
        projection = pairing_projection(eig, 1, 0.5)
        np.testing.assert_allclose(np.abs(projection.frame[:, 0]), [np.sqrt(0.75), 0.5], atol=1e-15)
        self.assertLessEqual(projection.residual, 1e-14)

    def test_four_level_pairing(self):
        """diag(0,1,2,3) at 1.5 with pairs (1,3), (2,4) uses weights 0.25 and 0.75."""
        eig = hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0]))
        params = pairing_params(eig, 2, 1.5, pairing=[(1, 3), (2, 4)])
        np.testing.assert_allclose(params.cos2_beta, [0.25, 0.75], atol=1e-15)
        projection = pairing_projection(eig, 2, 1.5, pairing=[(1, 3), (2, 4)])
        self.assertEqual(projection.rank, 2)
        self.assertLessEqual(projection.residual, 1e-12, "Pairing witness must compress exactly")

    def test_default_pairing(self):
        """Outer pairs by default; middle eigenvalues are self-paired when 2k > N."""
        self.assertEqual(default_pairing(4, 2), [(2, 3), (1, 4)])
        self.assertEqual(default_pairing(5, 3), [(3, 3), (2, 4), (1, 5)])
        self.assertEqual(default_pairing(3, 2), [(2, 2), (1, 3)])

    def test_shared_eigenvalue(self):
        """When a_k = a_(N-k+1) = lambda the witness spans eigenvectors of lambda."""
        a = np.diag([1.0, 1.0, 1.0, 2.0])
        projection = pairing_projection(hermitian_eig(a), 2, 1.0)
        self.assertLessEqual(projection.residual, 1e-14)
        np.testing.assert_allclose(a @ projection.frame, projection.frame, atol=1e-14)

    def test_lambda_out_of_range(self):
        """lambda outside [a_k, a_(N-k+1)] or non-real is rejected."""
        eig = hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0]))
        with self.assertRaises(LambdaOutOfRange):
            pairing_projection(eig, 2, 3.0)
        with self.assertRaises(LambdaOutOfRange):
            pairing_projection(eig, 2, 1.5 + 0.5j)

    def test_bad_pairing(self):
        """Pairs that do not bracket lambda or that reuse an index are rejected."""
        eig = hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0]))
        with self.assertRaises(BadPairing):
            pairing_projection(eig, 2, 1.5, pairing=[(1, 2), (3, 4)])
        with self.assertRaises(BadPairing):
            pairing_projection(eig, 2, 1.5, pairing=[(1, 3), (1, 4)])
        with self.assertRaises(BadPairing):
            pairing_projection(eig, 2, 1.5, pairing=[(1, 4)])

    def test_phases(self):
        """Different phases give different witnesses with the same residual."""
        eig = hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0]))
        first = pairing_projection(eig, 2, 1.5, phases_theta=[0.0, 0.0])
        second = pairing_projection(eig, 2, 1.5, phases_theta=[np.pi / 2, 1.0])
        self.assertLessEqual(first.residual, 1e-12)
        self.assertLessEqual(second.residual, 1e-12)
        self.assertGreater(subspace_distance(first.frame, second.frame), 1e-3, "Phases must move the witness")
        self.assertEqual(pairing_params(eig, 2, 1.5).free_parameter_count(), 2)
        with self.assertRaises(InvalidParameters):
            pairing_projection(eig, 2, 1.5, phases_theta=[0.0])

    def test_enumerate_pairings(self):
        """diag(0,1,2,3) at 1.5 has exactly two bracketing pairings, both valid witnesses."""
        eig = hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0]))
        pairings = enumerate_pairings(eig, 2, 1.5)
        self.assertEqual({frozenset(p) for p in pairings}, {frozenset({(1, 3), (2, 4)}), frozenset({(1, 4), (2, 3)})})
        for pairing in pairings:
            self.assertLessEqual(pairing_projection(eig, 2, 1.5, pairing=pairing).residual, 1e-12)

    def test_rank_one(self):
        """Equal weights on diag(1,2,3) give lambda = 2."""
        eig = hermitian_eig(np.diag([1.0, 2.0, 3.0]))
        lam, projection = rank_one_projection(eig, [1.0, 1.0, 1.0], [0.0, 0.3, 1.2])
        self.assertAlmostEqual(lam, 2.0, places=14)
        self.assertLessEqual(projection.residual, 1e-14)
        with self.assertRaises(InvalidParameters):
            rank_one_projection(eig, [0.0, 0.0, 0.0])

    def test_random_pairing_witnesses(self):
        """1000 random matrices: every rank is classified from [a_k, a_(N-k+1)] and 20 values per
        nonempty range (both ends included) get pairing witnesses."""
        rng = np.random.default_rng(17)
        for trial in range(1000):
            n = int(rng.integers(2, 11))
            a = random_hermitian(n, rng)
            eig = hermitian_eig(a)
            scale = max(1.0, np.linalg.norm(a))
            for k in range(1, n + 1):
                result = hermitian_range(a, k, eig)
                lo, hi = eig.values[k - 1], eig.values[n - k]
                if k == n - k + 1:
                    self.assertEqual(result, RankKRange.singleton(lo), f"Trial {trial}: N={n}, k={k}")
                elif lo < hi:
                    self.assertEqual(result, RankKRange.interval(lo, hi), f"Trial {trial}: N={n}, k={k}")
                else:
                    self.assertTrue(result.is_empty(), f"Trial {trial}: N={n}, k={k} must be empty")
                    continue
                interior = lo + rng.uniform(size=18) * (hi - lo)
                for lam in np.concatenate([[lo, hi], interior]):
                    projection = pairing_projection(eig, k, lam)
                    self.assertLessEqual(verify_compression(a, projection, lam), 1e-9 * scale,
                                         f"Trial {trial}: N={n}, k={k}, lambda={lam}")


class GeneralConstructionTests(unittest.TestCase):
    """Tests the complete construction W = f(A - lambda I) V and its inverse.
    """
    def __init__(self, *args, **kwargs):
        super(GeneralConstructionTests, self).__init__(*args, **kwargs)

    def test_hand_built_parameters(self):
        """diag(-1,-2,1,2) at 0 with V_+ = span{e3,e4}, U: e3 -> e1, e4 -> e2."""
        a = np.diag([-1.0, -2.0, 1.0, 2.0])
        eye = np.eye(4, dtype=complex)
        params = GeneralParams((0, 2), np.zeros((4, 0)), eye[:, [2, 3]], eye[:, [0, 1]], np.zeros((4, 2)))
        projection = construct_projection_general(hermitian_eig(a), 2, params)
        expected = np.column_stack([eye[:, 0] + eye[:, 2], eye[:, 1] + eye[:, 3]])
        self.assertLessEqual(projection.residual, 1e-14)
        self.assertLessEqual(subspace_distance(projection.frame, expected), 1e-12, "W must be span{e1+e3, e2+e4}")

    def test_kernel_only(self):
        """With a 3-dimensional kernel the rank-2 witness lives inside the kernel."""
        a = np.diag([0.0, 0.0, 0.0, 1.0, -1.0])
        eig = hermitian_eig(a)
        self.assertEqual(feasible_splits(eig, 2), [(1, 1), (2, 0)])
        projection = construct_projection_general(eig, 2, seed=1)
        self.assertEqual(projection.residual, 0.0)
        np.testing.assert_allclose(a @ projection.frame, np.zeros((5, 2)), atol=1e-15)

    def test_split_validation(self):
        """Splits that do not fit the eigenspaces are rejected."""
        eig = hermitian_eig(np.diag([-1.0, 0.0, 1.0]))
        self.assertEqual(feasible_splits(eig, 2), [(1, 1)])
        with self.assertRaises(InfeasibleSplit):
            sample_general_params(eig, 2, split=(0, 2))
        with self.assertRaises(InfeasibleSplit):
            sample_general_params(eig, 2, split=(2, 0))

    def test_parameters_outside_eigenspace(self):
        """V_+ must lie in the positive eigenspace."""
        a = np.diag([-1.0, -2.0, 1.0, 2.0])
        eye = np.eye(4, dtype=complex)
        params = GeneralParams((0, 2), np.zeros((4, 0)), eye[:, [0, 3]], eye[:, [2, 1]], np.zeros((4, 2)))
        with self.assertRaises(InvalidParameters):
            construct_projection_general(hermitian_eig(a), 2, params)

    def test_random_draws(self):
        """Random parameters give witnesses for random interior lambdas, with and without X."""
        rng = np.random.default_rng(23)
        for trial in range(10):
            a = random_hermitian(8, rng)
            eig = hermitian_eig(a)
            lo, hi = hermitian_range(a, 3, eig).bounds()
            lam = 0.5 * (lo + hi)
            projection = construct_projection_general(eig.shifted(lam), 3, seed=trial, lam=lam)
            self.assertEqual(projection.rank, 3)
            self.assertLessEqual(verify_compression(a, projection, lam), 1e-9 * max(1.0, np.linalg.norm(a)), f"Trial {trial}")
        a = np.diag([-2.0, -1.0, 0.0, 0.0, 1.0, 3.0])
        eig = hermitian_eig(a)
        params = sample_general_params(eig, 2, split=(1, 1), seed=4, random_x=True)
        self.assertGreater(np.linalg.norm(params.x_image), 0.0)
        projection = construct_projection_general(eig, 2, params)
        self.assertLessEqual(projection.residual, 1e-12)

    def test_engineered_kernels(self):
        """100 matrices with a 1-3 dimensional eigenspace at lambda: every feasible split gives a witness."""
        rng = np.random.default_rng(61)
        for trial in range(100):
            d0 = int(rng.integers(1, 4))
            dm, dp = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            n = d0 + dm + dp
            lam = rng.uniform(-1.0, 1.0)
            values = np.concatenate([lam - rng.uniform(0.5, 2.0, dm), np.full(d0, lam), lam + rng.uniform(0.5, 2.0, dp)])
            basis = haar_isometry(n, n, trial)
            a = basis @ np.diag(values) @ basis.conj().T
            a = (a + a.conj().T) / 2.0
            scale = max(1.0, np.linalg.norm(a))
            shifted = hermitian_eig(a).shifted(lam)
            k = int(rng.integers(1, d0 + min(dm, dp) + 1))
            splits = feasible_splits(shifted, k)
            expected = [(k1, k - k1) for k1 in range(max(0, k - min(dm, dp)), min(k, d0) + 1)]
            self.assertEqual(splits, expected, f"Trial {trial}: d0={d0}, dm={dm}, dp={dp}, k={k}")
            for split in splits:
                params = sample_general_params(shifted, k, split=split, seed=trial, random_x=True)
                projection = construct_projection_general(shifted, k, params, lam=lam)
                self.assertEqual(projection.rank, k)
                self.assertLessEqual(verify_compression(a, projection, lam), 1e-9 * scale,
                                     f"Trial {trial}: split {split} of k={k}")

    def test_recover_round_trip(self):
        """500 recovered parameter sets rebuild the same subspace, with ||P_+ v|| = ||P_- v|| on the
        recovered directions."""
        rng = np.random.default_rng(29)
        for trial in range(500):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, n // 2 + 1))
            a = random_hermitian(n, rng)
            eig = hermitian_eig(a)
            lo, hi = hermitian_range(a, k, eig).bounds()
            lam = lo + rng.uniform(0.1, 0.9) * (hi - lo)
            original = construct_projection_general(eig.shifted(lam), k, seed=trial, lam=lam)
            params = recover_parameters(a, original, lam, eig)
            self.assertLessEqual(params.isometry_defect, 1e-8, f"Trial {trial}: recovered U is not an isometry")
            plus_norms = np.linalg.norm(params.v_plus, axis=0)
            minus_norms = np.linalg.norm(params.u_image, axis=0)
            np.testing.assert_allclose(plus_norms, minus_norms, atol=1e-8, err_msg=f"Trial {trial}")
            rebuilt = construct_projection_general(eig.shifted(lam), k, params, lam=lam)
            self.assertLessEqual(subspace_distance(original.frame, rebuilt.frame), 1e-7, f"Trial {trial}: N={n}, k={k}")

    def test_recover_pairing_and_kernel(self):
        """Pairing witnesses and kernel witnesses are reachable by the complete construction."""
        a = np.diag([0.0, 1.0, 2.0, 3.0])
        eig = hermitian_eig(a)
        witness = pairing_projection(eig, 2, 1.5, pairing=[(1, 3), (2, 4)])
        params = recover_parameters(a, witness, 1.5, eig)
        self.assertEqual(params.split, (0, 2))
        rebuilt = construct_projection_general(eig.shifted(1.5), 2, params, lam=1.5)
        self.assertLessEqual(subspace_distance(witness.frame, rebuilt.frame), 1e-7)
        kernel = np.diag([0.0, 0.0, 1.0, -1.0])
        params = recover_parameters(kernel, CompressionProjection(np.eye(4)[:, :2], 0.0), 0.0)
        self.assertEqual(params.split, (2, 0))
        self.assertEqual(params.v_plus.shape, (4, 0))

    def test_recover_rejects_non_witness(self):
        """A frame that does not compress A to lambda cannot be inverted."""
        with self.assertRaises(NotACompression):
            recover_parameters(np.diag([0.0, 1.0, 2.0, 3.0]), CompressionProjection(np.eye(4)[:, :2], 1.5), 1.5)

    def test_general_matrix_scalar(self):
        """A 1 x 1 matrix is its own witness."""
        lam, projection = general_matrix_projection(np.array([[2.0 - 3.0j]]), 1)
        self.assertAlmostEqual(lam, 2.0 - 3.0j, places=14)
        self.assertLessEqual(projection.residual, 1e-14)

    def test_general_matrix_random(self):
        """For N = 1..12 and every k with 4k - 3 <= N, 50 random matrices have witnesses with Im lambda = b_(2k-1)."""
        rng = np.random.default_rng(31)
        for n in range(1, 13):
            for k in range(1, (n + 3) // 4 + 1):
                for trial in range(50):
                    t = random_complex(n, rng)
                    im_values = np.linalg.eigvalsh((t - t.conj().T) / 2j)
                    lam, projection = general_matrix_projection(t, k)
                    self.assertEqual(projection.rank, k)
                    self.assertLessEqual(verify_compression(t, projection, lam), 1e-9 * max(1.0, np.linalg.norm(t)),
                                         f"N={n}, k={k}, trial {trial}")
                    self.assertAlmostEqual(lam.imag, im_values[2 * k - 2], places=9)

    def test_general_matrix_hypothesis(self):
        """4k - 3 > N is rejected."""
        with self.assertRaises(RankHypothesisViolated):
            general_matrix_projection(np.eye(5), 3)


class CompressionTests(unittest.TestCase):
    """Unit tests for residuals, witness direct sums and dilations in the compression module
    """
    def __init__(self, *args, **kwargs):
        super(CompressionTests, self).__init__(*args, **kwargs)

    def test_identity_and_shift(self):
        """I compresses to 1 everywhere; the 5-cycle compresses to 0 on span{e1, e3}."""
        self.assertEqual(verify_compression(np.eye(4), CompressionProjection(haar_isometry(4, 2, 0), 1.0), 1.0) <= 1e-14, True)
        projection = CompressionProjection(np.eye(5)[:, [0, 2]], 0.0)
        self.assertEqual(verify_compression(cyclic_shift(5), projection, 0.0), 0.0)

    def test_frame_validation(self):
        """Non-orthonormal frames and mismatched shapes are rejected."""
        with self.assertRaises(FrameNotOrthonormal):
            CompressionProjection(np.array([[1.0], [1.0]]), 0.0)
        with self.assertRaises(ShapeMismatch):
            verify_compression(np.eye(3), CompressionProjection(np.eye(2), 0.0), 0.0)

    def test_affine_covariance(self):
        """200 instances of r(alpha T + beta I, P, alpha lambda + beta) = |alpha| r(T, P, lambda)."""
        rng = np.random.default_rng(37)
        for trial in range(200):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, n + 1))
            t = random_complex(n, rng)
            projection = CompressionProjection(haar_isometry(n, k, trial), 0.0)
            lam, alpha, beta = (complex(*rng.standard_normal(2)) for _ in range(3))
            base = verify_compression(t, projection, lam)
            moved = verify_compression(alpha * t + beta * np.eye(n), projection, alpha * lam + beta)
            self.assertLessEqual(abs(moved - abs(alpha) * base), 1e-12 * max(1.0, abs(alpha) * base), f"Trial {trial}")

    def test_adjoint_symmetry(self):
        """200 instances of r(T*, P, conj lambda) = r(T, P, lambda)."""
        rng = np.random.default_rng(41)
        for trial in range(200):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, n + 1))
            t = random_complex(n, rng)
            projection = CompressionProjection(haar_isometry(n, k, trial), 0.0)
            lam = complex(*rng.standard_normal(2))
            forward = verify_compression(t, projection, lam)
            backward = verify_compression(t.conj().T, projection, lam.conjugate())
            self.assertLessEqual(abs(forward - backward), 1e-12 * max(1.0, forward), f"Trial {trial}")

    def test_direct_sum_residual(self):
        """200 block witnesses combine residuals in quadrature."""
        rng = np.random.default_rng(43)
        for trial in range(200):
            n1, n2 = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            k1, k2 = int(rng.integers(1, n1 + 1)), int(rng.integers(1, n2 + 1))
            t, s = random_complex(n1, rng), random_complex(n2, rng)
            lam = complex(*rng.standard_normal(2))
            first = CompressionProjection(haar_isometry(n1, k1, 2 * trial), lam)
            second = CompressionProjection(haar_isometry(n2, k2, 2 * trial + 1), lam)
            r1, r2 = verify_compression(t, first, lam), verify_compression(s, second, lam)
            block = direct_sum_projection(first, second)
            self.assertEqual(block.rank, k1 + k2)
            combined = verify_compression(direct_sum(t, s), block, lam)
            self.assertLessEqual(abs(combined - np.hypot(r1, r2)), 1e-12 * max(1.0, combined), f"Trial {trial}")

    def test_certify(self):
        """certify records the residual at the projection's own lambda or an override."""
        projection = CompressionProjection(np.eye(3)[:, :1], 2.0)
        certified = certify(np.diag([2.0, 5.0, 7.0]), projection)
        self.assertEqual(certified.residual, 0.0)
        self.assertEqual(certify(np.diag([2.0, 5.0, 7.0]), projection, 1.0).residual, 1.0)

    def test_dilation(self):
        """A certified witness is the leading lambda I block of a unitary conjugate."""
        a = np.diag([0.0, 1.0, 2.0, 3.0])
        projection = pairing_projection(hermitian_eig(a), 2, 1.5)
        unitary, block = dilation_blocks(a, projection)
        self.assertLessEqual(isometry_defect(unitary), 1e-12, "Completion must be unitary")
        np.testing.assert_allclose(block[:2, :2], 1.5 * np.eye(2), atol=1e-12)
        np.testing.assert_allclose(unitary @ block @ unitary.conj().T, a, atol=1e-12)


class NormalGeometryTests(unittest.TestCase):
    """Tests hull intersections, rectangle bounds and large-k checks for normal matrices.
    """
    def __init__(self, *args, **kwargs):
        super(NormalGeometryTests, self).__init__(*args, **kwargs)

    def test_fourth_roots(self):
        """The rank-2 region of the 4th roots of unity is the single point 0."""
        region = hull_intersection_region(roots_of_unity(4), 2)
        self.assertEqual(region.kind, RegionKind.POINT)
        self.assertEqual(complex(region.get_vertices()[0]), 0j)

    def test_fifth_roots(self):
        """The rank-2 region of the 5th roots is the inner pentagon of the pentagram."""
        region = hull_intersection_region(roots_of_unity(5), 2)
        self.assertEqual(region.kind, RegionKind.POLYGON)
        self.assertEqual(len(region.get_vertices()), 5)
        radius = np.cos(2 * np.pi / 5) / np.cos(np.pi / 5)
        for vertex in region.get_vertices():
            self.assertAlmostEqual(abs(vertex), radius, places=9)
        self.assertGreater(region.area(), 0.0, "Vertices must be counterclockwise")

    def test_rank_one_is_hull(self):
        """At rank 1 the region is the convex hull of the spectrum."""
        region = hull_intersection_region(roots_of_unity(5), 1)
        self.assertEqual(region.kind, RegionKind.POLYGON)
        np.testing.assert_allclose(np.sort(np.abs(region.get_vertices())), np.ones(5), atol=1e-12)

    def test_real_spectrum(self):
        """Real spectra reduce to the Hermitian interval, singleton or empty set."""
        self.assertEqual(list(hull_intersection_region([1.0, 2.0, 3.0, 4.0], 2).get_vertices()), [2.0, 3.0])
        rng = np.random.default_rng(47)
        for n in range(2, 7):
            spec = rng.standard_normal(n)
            for k in range(1, n + 1):
                region = hull_intersection_region(spec, k)
                expected = hermitian_range(np.diag(spec), k)
                if expected.kind == RangeKind.EMPTY:
                    self.assertTrue(region.is_empty(), f"N={n}, k={k} must be empty")
                elif expected.kind == RangeKind.SINGLETON:
                    self.assertEqual(region.kind, RegionKind.POINT)
                    self.assertAlmostEqual(region.get_vertices()[0].real, expected.value.real, places=12)
                else:
                    self.assertEqual(region.kind, RegionKind.SEGMENT)
                    self.assertAlmostEqual(region.get_vertices()[0].real, expected.lo, places=12)
                    self.assertAlmostEqual(region.get_vertices()[1].real, expected.hi, places=12)

    def test_point_in_region(self):
        """Brute-force membership on known examples."""
        self.assertTrue(point_in_region(roots_of_unity(5), 2, 0.0))
        self.assertFalse(point_in_region(roots_of_unity(4), 2, 0.2))
        self.assertTrue(point_in_region([1.0, 2.0, 3.0, 4.0], 2, 2.0))
        self.assertFalse(point_in_region([1.0, 2.0, 3.0, 4.0], 2, 2.5 + 0.1j))

    def test_region_matches_brute_force(self):
        """The clipped polygon and brute-force membership agree on a grid."""
        spectra = [roots_of_unity(5), np.array([1.2 + 0.3j, -0.7 + 1.1j, -0.9 - 0.6j, 0.4 - 1.3j, 1.5 - 0.2j, -0.1 + 0.2j])]
        for spec in spectra:
            region = hull_intersection_region(spec, 2)
            diameter = float(np.max(np.abs(spec[:, None] - spec[None, :])))
            for lam in grid_points((40, 40), (-1.6, 1.6, -1.6, 1.6)):
                self.assertEqual(region.contains(lam, 1e-10 * diameter), point_in_region(spec, 2, lam), f"Disagreement at {lam}")

    def test_rectangle_examples(self):
        """Rectangle bounds for Hermitian, diagonal and empty cases."""
        segment = rectangle_bound(np.diag([1.0, 2.0, 3.0]), 1)
        self.assertEqual(segment.kind, RegionKind.SEGMENT)
        self.assertEqual(list(segment.get_vertices()), [1.0, 3.0])
        box = rectangle_bound(np.diag([1 + 1j, 2 + 2j, 3 + 3j]), 1)
        self.assertEqual(box.kind, RegionKind.POLYGON)
        np.testing.assert_allclose(box.get_vertices(), [1 + 1j, 3 + 1j, 3 + 3j, 1 + 3j])
        self.assertTrue(rectangle_bound(np.diag([1.0, 2.0, 3.0, 4.0]), 3).is_empty())

    def test_rectangle_contains_hull_region(self):
        """The hull intersection of a normal matrix sits inside its rectangle bound."""
        rng = np.random.default_rng(53)
        for seed in range(5):
            spec = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            t = random_normal(spec, seed)
            box = rectangle_bound(t, 2)
            for vertex in hull_intersection_region(spec, 2).get_vertices():
                self.assertTrue(box.contains(vertex, 1e-8), f"Vertex {vertex} escapes the rectangle (seed {seed})")

    def test_witness_inside_outer_bound(self):
        """Witnessed values of normal matrices lie in the hull intersection."""
        self.assertTrue(point_in_region(roots_of_unity(5), 2, 0.0))
        rng = np.random.default_rng(59)
        for seed in range(5):
            spec = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            lam, _ = general_matrix_projection(random_normal(spec, seed), 2)
            self.assertTrue(hull_intersection_region(spec, 2).contains(lam, 1e-8), f"Witness {lam} outside the bound")

    def test_large_k_normal(self):
        """2k > N: repeated eigenvalues decide the range."""
        self.assertEqual(normal_large_k_check([1.0, 1.0, 1j], 2), RankKRange.singleton(1.0))
        self.assertTrue(normal_large_k_check([1.0, 1j, -1.0], 2).is_empty())
        self.assertEqual(normal_large_k_check([2 - 1j] * 3, 3), RankKRange.singleton(2 - 1j))
        with self.assertRaises(RankHypothesisViolated):
            normal_large_k_check([1.0, 2.0, 3.0, 4.0], 2)

    def test_large_k_normal_brute_force(self):
        """On N <= 6 the large-k answer matches multiplicities plus hull membership by Caratheodory."""
        palette = np.array([0.0, 1.0, 1j, -1.0 - 1j, 0.5 + 0.5j])
        rng = np.random.default_rng(71)
        for trial in range(200):
            n = int(rng.integers(1, 7))
            spec = palette[rng.integers(0, 3 if trial % 2 else 5, n)]
            for k in range(n // 2 + 1, n + 1):
                expected = set()
                for mu in set(spec.tolist()):
                    indices = [i for i, z in enumerate(spec) if z == mu]
                    if len(indices) < 2 * k - n:
                        continue
                    rest = np.delete(spec, indices[:2 * k - n])
                    if all(in_hull(subset, mu) for subset in itertools.combinations(rest, rest.size - (n - k) + 1)):
                        expected.add(mu)
                result = normal_large_k_check(spec, k)
                if expected:
                    self.assertEqual(result.kind, RangeKind.SINGLETON, f"Spectrum {spec}, k={k}")
                    self.assertIn(result.value, expected, f"Spectrum {spec}, k={k}")
                else:
                    self.assertTrue(result.is_empty(), f"Spectrum {spec}, k={k} must be empty")

    def test_hull_range_status(self):
        """Real spectra give intervals; small or real spectra are exact, larger complex ones outer bounds."""
        self.assertEqual(hull_range([1.0, 2.0, 3.0, 4.0], 2), RankKRange.interval(2.0, 3.0))
        self.assertEqual(hull_range(roots_of_unity(5), 2).status, RegionStatus.OUTER_BOUND)
        self.assertEqual(hull_range([1.0, 1j, -1.0 + 0.5j, -1j], 1).status, RegionStatus.EXACT)

    def test_too_many_subsets(self):
        """The subset cap is enforced before any work."""
        with self.assertRaises(TooManySubsets):
            hull_intersection_region(roots_of_unity(6), 3, max_subsets=5)

    def test_cyclic_shift(self):
        """Small shifts, unitarity and the spectrum of the 5-cycle."""
        np.testing.assert_array_equal(cyclic_shift(1), [[1.0]])
        np.testing.assert_array_equal(cyclic_shift(2), [[0.0, 1.0], [1.0, 0.0]])
        u = cyclic_shift(5)
        np.testing.assert_array_equal(np.linalg.matrix_power(u, 5), np.eye(5))
        np.testing.assert_array_equal(u @ np.eye(5)[:, 0], np.eye(5)[:, 1])
        spectrum = normal_spectrum(u)
        for root in roots_of_unity(5):
            self.assertLessEqual(np.min(np.abs(spectrum - root)), 1e-10, f"Root {root} missing from the spectrum")

    def test_normal_spectrum_rejects(self):
        """Non-normal matrices have no normal spectrum."""
        with self.assertRaises(NotNormal):
            normal_spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))


class SearchTests(unittest.TestCase):
    """Unit tests for the frame search and grid scans in the search module
    """
    def __init__(self, *args, **kwargs):
        super(SearchTests, self).__init__(*args, **kwargs)

    def test_config(self):
        """Defaults, config.ini sections and validation."""
        cfg = SearchConfig()
        self.assertEqual((cfg.restarts, cfg.max_iters, cfg.seed), (64, 2000, 0))
        parser = configparser.ConfigParser()
        parser.read_string("[search]\nrestarts = 3\nresidual-tol = 1e-6\n")
        cfg = SearchConfig.from_config(parser['search'])
        self.assertEqual(cfg.restarts, 3)
        self.assertEqual(cfg.residual_tol, 1e-6)
        self.assertEqual(cfg.max_iters, 2000, "Missing keys fall back to defaults")
        self.assertEqual(cfg.replace(seed=9).seed, 9)
        with self.assertRaises(InvalidConfig):
            SearchConfig(restarts=0)
        with self.assertRaises(InvalidConfig):
            SearchConfig(residual_tol=-1.0)

    def test_shift_converges(self):
        """0 is found in the rank-2 range of the 5-cycle."""
        result = grassmann_search(cyclic_shift(5), 2, 0.0)
        self.assertTrue(result.converged, f"Search did not converge: {result}")
        self.assertLessEqual(verify_compression(cyclic_shift(5), result.best_frame, 0.0), 1e-8)

    def test_shift_border_points(self):
        """The five border points cos(2 pi/5) z of the 5-cycle range are reached with default settings."""
        for n in range(5):
            lam = np.cos(2 * np.pi / 5) * np.exp(2j * np.pi * n / 5)
            self.assertTrue(point_in_region(roots_of_unity(5), 2, lam), f"{lam} should lie on the bound")
            result = grassmann_search(cyclic_shift(5), 2, lam)
            self.assertLessEqual(result.best_residual, 1e-6, f"Border point {lam}: {result}")

    def test_fourth_roots_shift(self):
        """The 4-cycle has rank-2 range {0}: 0 converges and 0.2 stays away."""
        result = grassmann_search(cyclic_shift(4), 2, 0.0)
        self.assertTrue(result.converged, f"Search did not converge: {result}")
        self.assertLessEqual(result.best_residual, 1e-8)
        result = grassmann_search(cyclic_shift(4), 2, 0.2)
        self.assertFalse(result.converged)
        self.assertGreater(result.best_residual, 1e-3)

    def test_hermitian_member_converges(self):
        """1.5 is found in the rank-2 range of diag(0,1,2,3)."""
        result = grassmann_search(np.diag([0.0, 1.0, 2.0, 3.0]), 2, 1.5)
        self.assertTrue(result.converged, f"Search did not converge: {result}")
        self.assertLessEqual(result.best_residual, 1e-8)
        self.assertIn("numerical evidence", result.describe())

    def test_non_member(self):
        """3 is outside the rank-2 range of diag(0,1,2,3): the residual stays large."""
        cfg = SearchConfig(restarts=4, max_iters=200)
        result = grassmann_search(np.diag([0.0, 1.0, 2.0, 3.0]), 2, 3.0, cfg)
        self.assertFalse(result.converged)
        self.assertGreater(result.best_residual, 0.1)
        self.assertIn("inconclusive", result.describe())

    def test_determinism_and_restarts(self):
        """Same inputs give the same result, and more restarts never do worse."""
        a = np.diag([0.0, 1.0, 2.0, 3.0])
        few = grassmann_search(a, 2, 3.0, SearchConfig(restarts=2, max_iters=100))
        again = grassmann_search(a, 2, 3.0, SearchConfig(restarts=2, max_iters=100))
        more = grassmann_search(a, 2, 3.0, SearchConfig(restarts=4, max_iters=100))
        self.assertEqual(few.best_residual, again.best_residual)
        self.assertEqual(few.restart_index, again.restart_index)
        self.assertLessEqual(more.best_residual, few.best_residual)

    def test_bad_rank(self):
        """Ranks outside [1, N] are rejected."""
        with self.assertRaises(BadRank):
            grassmann_search(np.eye(3), 4, 1.0)

    def test_grid(self):
        """Grid points are row-major with x fastest, and the default box pads W(Re T) x W(Im T)."""
        self.assertEqual(grid_points((2, 2), (0.0, 1.0, 0.0, 2.0)), [0j, 1 + 0j, 2j, 1 + 2j])
        np.testing.assert_allclose(default_bbox(np.diag([1.0, 2.0, 3.0, 4.0])), (0.7, 4.3, -0.1, 0.1))
        with self.assertRaises(InvalidConfig):
            grid_points((0, 3), (0.0, 1.0, 0.0, 1.0))

    def test_scan_identity(self):
        """For T = I the residual at lambda is |lambda - 1| sqrt(k)."""
        results = scan_region(np.eye(3), 2, (5, 1), (0.0, 2.0, 0.0, 0.0), restarts=1)
        self.assertEqual(len(results), 5)
        for lam, residual in results:
            self.assertAlmostEqual(residual, abs(lam - 1.0) * np.sqrt(2.0), places=12)

    def test_scan_hermitian(self):
        """The interior point 2.5 converges; points outside [2, 3] stay above 0.1."""
        cfg = SearchConfig(max_iters=2000)
        results = dict(scan_region(np.diag([1.0, 2.0, 3.0, 4.0]), 2, (5, 1), (0.5, 4.5, 0.0, 0.0), cfg, restarts=8))
        self.assertLessEqual(results[2.5 + 0j], 1e-8, "2.5 is an interior member")
        for outside in (0.5, 1.5, 3.5, 4.5):
            self.assertGreater(results[complex(outside)], 0.1, f"{outside} is not a member")

    def test_scan_workers(self):
        """The scan output does not depend on the number of workers."""
        cfg = SearchConfig(max_iters=100)
        box = (0.0, 5.0, -0.5, 0.5)
        single = scan_region(np.diag([1.0, 2.0, 3.0, 4.0]), 2, (3, 2), box, cfg, restarts=2, workers=1)
        threaded = scan_region(np.diag([1.0, 2.0, 3.0, 4.0]), 2, (3, 2), box, cfg, restarts=2, workers=3)
        self.assertEqual(single, threaded)
        with self.assertRaises(InvalidConfig):
            scan_region(np.eye(2), 1, (2, 2), box, cfg, workers=0)

    def test_scan_converged_points_are_in_region(self):
        """Points where the 5-cycle search converges lie in the hull intersection."""
        cfg = SearchConfig(max_iters=300)
        region = hull_intersection_region(roots_of_unity(5), 2)
        for lam, residual in scan_region(cyclic_shift(5), 2, (5, 5), (-0.6, 0.6, -0.6, 0.6), cfg, restarts=4):
            if residual <= cfg.residual_tol:
                self.assertTrue(region.contains(lam, 1e-6), f"Converged at {lam} outside the bound")


class QECTests(unittest.TestCase):
    """Tests code checks and code search against Kraus error models.
    """
    def __init__(self, *args, **kwargs):
        super(QECTests, self).__init__(*args, **kwargs)

    def test_identity_model(self):
        """Every code corrects the identity channel with lambda = 1."""
        report = code_check(ErrorModel([np.eye(4)]), CompressionProjection(haar_isometry(4, 2, 0), 0.0))
        self.assertTrue(report.correctable)
        self.assertAlmostEqual(report.lambda_matrix[0, 0].real, 1.0, places=12)

    def test_bit_flip_repetition(self):
        """The repetition code corrects single bit flips with lambda = I."""
        report = code_check(bit_flip_model(3), repetition_code(3))
        self.assertTrue(report.correctable, repr(report))
        np.testing.assert_allclose(report.lambda_matrix, np.eye(4), atol=1e-14)
        self.assertTrue(report.describe().startswith("correctable yes"))

    def test_phase_flip_fails(self):
        """{I, Z_1} is not corrected by the repetition code: max residual sqrt(2)."""
        errors = ErrorModel(single_z_errors())
        report = code_check(errors, repetition_code(3))
        self.assertFalse(report.correctable)
        self.assertAlmostEqual(report.max_residual, np.sqrt(2.0), places=12)

    def test_lambda_hermitian_and_consistent(self):
        """lambda_ij is Hermitian and residual_ij is the compression residual of A_i* A_j."""
        errors = bit_flip_model(3, 0.05)
        projection = CompressionProjection(haar_isometry(8, 2, 6), 0.0)
        report = code_check(errors, projection)
        np.testing.assert_allclose(report.lambda_matrix, report.lambda_matrix.conj().T, atol=1e-12)
        products = errors.products()
        for i in range(len(errors)):
            for j in range(len(errors)):
                residual = verify_compression(products[i][j], projection, report.lambda_matrix[i, j])
                self.assertAlmostEqual(residual, report.residuals[i, j], places=12)

    def test_unitary_covariance(self):
        """Conjugating errors and code by the same unitary leaves the report unchanged."""
        w = haar_isometry(8, 8, 12)
        errors = bit_flip_model(3)
        code = repetition_code(3)
        moved = code_check(ErrorModel([w @ op @ w.conj().T for op in errors.kraus]), CompressionProjection(w @ code.frame, 1.0))
        base = code_check(errors, code)
        np.testing.assert_allclose(moved.residuals, base.residuals, atol=1e-12)
        self.assertEqual(moved.correctable, base.correctable)

    def test_shape_mismatch(self):
        """A code of the wrong dimension is rejected."""
        with self.assertRaises(ShapeMismatch):
            code_check(bit_flip_model(3), CompressionProjection(np.eye(4)[:, :2], 0.0))
        with self.assertRaises(ShapeMismatch):
            ErrorModel([np.eye(2), np.eye(3)])

    def test_paulis(self):
        """Pauli strings put qubit 1 leftmost."""
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_array_equal(pauli_operator("XI"), np.kron(x, np.eye(2)))
        with self.assertRaises(InvalidParameters):
            pauli_operator("XQ")

    def test_trace_preservation(self):
        """Weighted bit flips and complete dephasing are channels; unweighted flips are not."""
        self.assertTrue(bit_flip_model(3, 0.1).is_trace_preserving())
        self.assertFalse(bit_flip_model(3).is_trace_preserving())
        self.assertTrue(complete_dephasing_model(2).is_trace_preserving())

    def test_search_finds_bit_flip_code(self):
        """Joint search finds a correctable 2-dimensional code for single bit flips."""
        errors = bit_flip_model(3)
        codes = joint_search(errors, 2, SearchConfig(restarts=16))
        self.assertGreaterEqual(len(codes), 1, "No bit-flip code found")
        projection, report = codes[0]
        self.assertTrue(report.correctable)
        self.assertTrue(code_check(errors, projection).correctable)

    def test_search_distinct_codes(self):
        """Codes for {I, Z_1} are found inside a Z_1 eigenspace, and duplicates are dropped."""
        codes = joint_search(ErrorModel(single_z_errors()), 2, SearchConfig(restarts=6))
        self.assertGreaterEqual(len(codes), 1)
        for idx, (first, _) in enumerate(codes):
            for second, _ in codes[idx + 1:]:
                self.assertGreater(subspace_distance(first.frame, second.frame), 1e-6, "Duplicate code kept")
        residuals = [report.max_residual for _, report in codes]
        self.assertEqual(residuals, sorted(residuals), "Codes must be ranked by residual")

    def test_search_dephasing_has_no_code(self):
        """Complete dephasing on C^2 corrects nothing of dimension 2."""
        self.assertEqual(joint_search(complete_dephasing_model(2), 2, SearchConfig(restarts=4, max_iters=200)), [])
        with self.assertRaises(BadRank):
            joint_search(complete_dephasing_model(2), 1)


def single_z_errors():
    """[I, Z_1] on three qubits."""
    return [pauli_operator("III"), pauli_operator("ZII")]


class FileFormatTests(unittest.TestCase):
    """Unit tests for reading and writing the JSON file formats
    """
    def __init__(self, *args, **kwargs):
        super(FileFormatTests, self).__init__(*args, **kwargs)

    def test_matrix_round_trip(self):
        """Matrices survive a JSON round trip bit for bit."""
        rng = np.random.default_rng(61)
        original = MatrixFile(random_complex(3, rng), name="random")
        loaded = MatrixFile.from_dict(json.loads(json.dumps(original.to_dict())))
        np.testing.assert_array_equal(loaded.matrix, original.matrix)
        self.assertEqual(loaded.name, "random")

    def test_fixtures(self):
        """Fixture matrices, spectra, projections and error models load."""
        self.assertEqual(MatrixFile.load(fixture('diag6.json')).matrix.shape, (6, 6))
        np.testing.assert_array_equal(load_spectrum(fixture('roots4.json')), [1, 1j, -1, -1j])
        projection = load_projection(fixture('shift5_frame13.json'))
        self.assertEqual((projection.get_dimension(), projection.rank), (5, 2))
        with self.assertLogs('file_formats', level='WARNING'):
            model = load_error_model(fixture('bitflip3.json'))
        self.assertEqual(len(model), 4)

    def test_malformed_matrices(self):
        """Hermitian flags are checked and broken documents are rejected."""
        with self.assertRaises(MalformedFile):
            MatrixFile.load(fixture('not_hermitian.json'))
        with self.assertRaises(MalformedFile):
            MatrixFile.from_dict({"entries": [[[1.0, 0.0]]]})
        with self.assertRaises(MalformedFile):
            MatrixFile.from_dict({"dims": [2, 2], "entries": [[[1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]})
        with self.assertRaises(MalformedFile):
            MatrixFile.from_dict({"dims": [1, 1], "entries": [[[1.0]]]})
        with self.assertRaises(MalformedFile):
            MatrixFile.load(fixture('does_not_exist.json'))

    def test_projection_documents(self):
        """Projection files keep their frame and are re-validated for orthonormality."""
        projection = certify(np.diag([0.0, 1.0, 2.0, 3.0]), pairing_projection(hermitian_eig(np.diag([0.0, 1.0, 2.0, 3.0])), 2, 1.5))
        loaded = projection_from_dict(json.loads(json.dumps(projection_to_dict(projection))))
        np.testing.assert_array_equal(loaded.frame, projection.frame)
        self.assertEqual(loaded.lam, 1.5)
        document = projection_to_dict(CompressionProjection(np.eye(2), 0.0))
        document["frame"][0][0] = [1.0 + 1e-6, 0.0]
        with self.assertRaises(MalformedFile):
            projection_from_dict(document)

    def test_spectrum_and_model_files(self):
        """Spectra and error models written to disk load back."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'spectrum.json')
            save_spectrum(path, roots_of_unity(3))
            np.testing.assert_array_equal(load_spectrum(path), roots_of_unity(3))
            path = os.path.join(tmp, 'model.json')
            save_error_model(path, bit_flip_model(3, 0.1))
            model = load_error_model(path)
            self.assertTrue(model.is_trace_preserving())


class ValidationTests(unittest.TestCase):
    """Test suite for command-line value validation.
    """
    def __init__(self, *args, **kwargs):
        super(ValidationTests, self).__init__(*args, **kwargs)

    def test_good_complex(self):
        """Reals, complex values and pure imaginaries are accepted."""
        for text in ("1.5", "0.2-0.3i", "2i", "-1e-3+4i", ".5"):
            ok, _ = validation.validate_complex(text)
            self.assertTrue(ok, f"Complex '{text}' should be valid")
        self.assertEqual(validation.parse_complex("0.2-0.3i"), complex(0.2, -0.3))
        self.assertEqual(validation.parse_complex("2i"), 2j)

    def test_bad_complex(self):
        """Garbage is rejected with a reason."""
        for text in ("abc", "1+i", "", "1.5j", "1..2"):
            ok, message = validation.validate_complex(text)
            self.assertFalse(ok, f"Complex '{text}' should be invalid")
            self.assertNotEqual(message, "")
        with self.assertRaises(ValueError):
            validation.parse_complex("abc")

    def test_grid(self):
        """Grids are NXxNY with positive sides."""
        self.assertTrue(validation.validate_grid("41x41")[0])
        self.assertEqual(validation.parse_grid("3x7"), (3, 7))
        for text in ("0x5", "41", "4x4x4", "ax4"):
            self.assertFalse(validation.validate_grid(text)[0], f"Grid '{text}' should be invalid")

    def test_bbox(self):
        """Boxes are four ordered numbers."""
        self.assertEqual(validation.parse_bbox("-1,1,-2,2"), (-1.0, 1.0, -2.0, 2.0))
        for text in ("1,0,0,1", "0,1,0", "a,b,c,d"):
            self.assertFalse(validation.validate_bbox(text)[0], f"Box '{text}' should be invalid")

    def test_rank(self):
        """Ranks must satisfy 1 <= k <= N."""
        self.assertTrue(validation.validate_rank(3, 3)[0])
        self.assertFalse(validation.validate_rank(0, 3)[0])
        self.assertFalse(validation.validate_rank(4, 3)[0])


class CommandLineTests(unittest.TestCase):
    """Runs the click commands from main against the fixtures in files/.
    """
    def __init__(self, *args, **kwargs):
        super(CommandLineTests, self).__init__(*args, **kwargs)
        self.runner = CliRunner()

    def invoke(self, *args, **kwargs):
        """Run the CLI with the given arguments."""
        return self.runner.invoke(cli, list(args), **kwargs)

    def test_range(self):
        """Interval, singleton and empty answers with their exit codes."""
        result = self.invoke('range', '--input', fixture('diag6.json'), '-k', '2')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(result.output, "Interval 2 5\n")
        result = self.invoke('range', '--input', fixture('identity3.json'), '-k', '3')
        self.assertEqual(result.output, "Singleton 1\n")
        result = self.invoke('range', '--input', fixture('diag4.json'), '-k', '3')
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(result.output, "Empty\n")

    def test_range_errors(self):
        """Malformed input, a bad rank and an unparseable lambda all exit 1."""
        self.assertEqual(self.invoke('range', '--input', fixture('not_hermitian.json'), '-k', '1').exit_code, 1)
        self.assertEqual(self.invoke('range', '--input', fixture('diag4.json'), '-k', '9').exit_code, 1)
        result = self.invoke('project', '--input', fixture('diag4.json'), '-k', '2', '--lambda', 'abc', '--out', os.devnull)
        self.assertEqual(result.exit_code, 1, result.output)
        result = self.invoke('scan', '--input', fixture('diag4.json'), '-k', '2', '--grid', '3by3')
        self.assertEqual(result.exit_code, 1, result.output)

    def test_project_and_verify(self):
        """Pairing and general projections are written, certified and re-verified."""
        a = MatrixFile.load(fixture('diag4.json')).matrix
        with tempfile.TemporaryDirectory() as tmp:
            for method in ('pairing', 'general'):
                out = os.path.join(tmp, f'{method}.json')
                result = self.invoke('project', '--input', fixture('diag4.json'), '-k', '2', '--lambda', '2.5',
                                     '--method', method, '--seed', '3', '--out', out)
                self.assertEqual(result.exit_code, 0, result.output)
                self.assertTrue(result.output.startswith("residual "))
                projection = load_projection(out)
                self.assertLessEqual(verify_compression(a, projection, 2.5), 1e-9 * np.linalg.norm(a))
                result = self.invoke('verify', '--input', fixture('diag4.json'), '--projection', out)
                self.assertEqual(result.exit_code, 0, result.output)
                self.assertTrue(result.output.startswith("rank 2\nresidual "))

    def test_project_out_of_range(self):
        """lambda outside the range exits 2."""
        result = self.invoke('project', '--input', fixture('diag4.json'), '-k', '2', '--lambda', '3.5', '--out', os.devnull)
        self.assertEqual(result.exit_code, 2)

    def test_seed_from_environment(self):
        """HRNR_SEED stands in for --seed."""
        with tempfile.TemporaryDirectory() as tmp:
            flag, env = os.path.join(tmp, 'flag.json'), os.path.join(tmp, 'env.json')
            self.invoke('project', '-i', fixture('diag4.json'), '-k', '2', '--lambda', '2.5', '--method', 'general', '--seed', '5', '--out', flag)
            self.invoke('project', '-i', fixture('diag4.json'), '-k', '2', '--lambda', '2.5', '--method', 'general', '--out', env, env={'HRNR_SEED': '5'})
            with open(flag, encoding='utf-8') as first, open(env, encoding='utf-8') as second:
                self.assertEqual(first.read(), second.read())

    def test_verify_shift(self):
        """The 5-cycle compresses exactly to 0 on span{e1, e3}."""
        result = self.invoke('verify', '--input', fixture('shift5.json'), '--projection', fixture('shift5_frame13.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(result.output, "rank 2\nresidual 0\n")

    def test_hull(self):
        """Hull vertices from spectrum files and from matrices."""
        result = self.invoke('hull', '--spectrum', fixture('roots4.json'), '-k', '2')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(result.output, "0,0\n")
        result = self.invoke('hull', '--input', fixture('shift5.json'), '-k', '2')
        self.assertEqual(len(result.output.splitlines()), 5)
        result = self.invoke('hull', '--input', fixture('diag4.json'), '-k', '2')
        self.assertEqual(result.output, "2,0\n3,0\n")

    def test_hull_limits(self):
        """Empty regions exit 2 and the subset cap exits 3. Giving both sources is an input error."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'spectrum.json')
            save_spectrum(path, [1.0, 1j, -1.0])
            result = self.invoke('hull', '--spectrum', path, '-k', '3')
            self.assertEqual(result.exit_code, 2)
            self.assertEqual(result.output, "# Empty\n")
        result = self.invoke('hull', '--spectrum', fixture('roots4.json'), '-k', '2', '--max-subsets', '1')
        self.assertEqual(result.exit_code, 3)
        result = self.invoke('hull', '--spectrum', fixture('roots4.json'), '--input', fixture('shift5.json'), '-k', '2')
        self.assertEqual(result.exit_code, 1, result.output)

    def test_scan(self):
        """CSV output with a header, deterministic across runs."""
        args = ('scan', '--input', fixture('identity3.json'), '-k', '2', '--grid', '3x1', '--bbox', '0,2,0,0', '--restarts', '1')
        result = self.invoke(*args)
        self.assertEqual(result.exit_code, 0, result.output)
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "re,im,residual")
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[2].startswith("1,0,"))
        self.assertLessEqual(float(lines[2].split(",")[2]), 1e-12)
        self.assertEqual(self.invoke(*args).output, result.output)

    def test_qec_check(self):
        """The repetition code corrects bit flips but not a phase flip."""
        result = self.invoke('qec', '--errors', fixture('bitflip3.json'), '--code', fixture('repetition3.json'))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("correctable yes", result.output)
        result = self.invoke('qec', '--errors', fixture('phaseflip1.json'), '--code', fixture('repetition3.json'))
        self.assertEqual(result.exit_code, 2)
        self.assertIn("correctable no", result.output)

    def test_qec_json(self):
        """JSON reports for a trace-preserving model."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'model.json')
            save_error_model(path, bit_flip_model(3, 0.1))
            result = self.invoke('qec', '--errors', path, '--code', fixture('repetition3.json'), '--json')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertTrue(json.loads(result.output)["correctable"])

    def test_qec_search_none_found(self):
        """A search that finds nothing exits 2."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'dephasing.json')
            save_error_model(path, complete_dephasing_model(2))
            result = self.invoke('qec', '--errors', path, '--search', '2', '--restarts', '2')
            self.assertEqual(result.exit_code, 2)
            self.assertTrue(result.output.startswith("codes 0 (numerical evidence)"))

    def test_repeat_runs_are_identical(self):
        """project, hull and qec --search print the same bytes when run twice with the same seed."""
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for name in ('first.json', 'second.json'):
                out = os.path.join(tmp, name)
                result = self.invoke('project', '--input', fixture('diag4.json'), '-k', '2', '--lambda', '2.5',
                                     '--method', 'general', '--seed', '3', '--out', out)
                self.assertEqual(result.exit_code, 0, result.output)
                with open(out, 'rb') as handle:
                    outputs.append((result.output, handle.read()))
            self.assertEqual(outputs[0], outputs[1])
        for args in (('hull', '--input', fixture('shift5.json'), '-k', '2'),
                     ('qec', '--errors', fixture('bitflip3.json'), '--search', '2', '--restarts', '4', '--seed', '1')):
            first, second = self.invoke(*args), self.invoke(*args)
            self.assertEqual(first.exit_code, second.exit_code, first.output)
            self.assertEqual(first.output, second.output)


if __name__ == '__main__':
    unittest.main()
