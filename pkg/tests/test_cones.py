"""Tests for matrix cone membership.

The reference oracle here is an independent brute-force minimizer of x'Ax
over a fine simplex lattice, written directly in this file (it deliberately
does not reuse the library's grid helper).  Closed-form examples (Horn
matrix, 2x2 criteria, cycle matrices with known eigenvalues) pin the exact
boundary behaviour.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsemix.cones import (
    HORN_MATRIX,
    CertificateKind,
    ConeStatus,
    dual_pairing,
    is_completely_positive,
    is_copositive,
    is_psd,
    simplex_grid,
)
from lsemix.errors import SizeLimitError, UsageError


def brute_force_simplex_min(a, resolution=50):
    """Minimum of x'Ax over the lattice {x >= 0, sum x = 1, x_i in k/resolution}."""
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    best = math.inf
    for bars in itertools.combinations(range(resolution + n - 1), n - 1):
        parts = np.diff(np.array((-1,) + bars + (resolution + n - 1,))) - 1
        x = parts / resolution
        best = min(best, float(x @ a @ x))
    return best


def random_symmetric(rng, n, scale=1.0):
    m = rng.normal(size=(n, n)) * scale
    return 0.5 * (m + m.T)


# --- positive semidefiniteness ------------------------------------------------


def test_psd_accepts_gram_matrix():
    verdict = is_psd(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert verdict.status is ConeStatus.INSIDE
    assert verdict.certificate_kind is CertificateKind.EIGEN


def test_psd_zero_matrix():
    assert is_psd(np.zeros((3, 3))).status is ConeStatus.INSIDE


def test_psd_rejects_with_eigenvector_witness():
    a = np.diag([1.0, -0.5])
    verdict = is_psd(a)
    assert verdict.status is ConeStatus.OUTSIDE
    v = verdict.witness
    assert v @ a @ v < 0.0


def test_psd_boundary_rank_deficient():
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert is_psd(a).status is ConeStatus.INSIDE


def test_psd_rejects_asymmetric():
    with pytest.raises(UsageError):
        is_psd(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_psd_rejects_nonsquare():
    with pytest.raises(UsageError):
        is_psd(np.ones((2, 3)))


def test_psd_rejects_nonfinite():
    with pytest.raises(UsageError):
        is_psd(np.array([[np.inf, 0.0], [0.0, 1.0]]))


# --- copositivity --------------------------------------------------------------


def test_copositive_zero_matrix_inside():
    assert is_copositive(np.zeros((2, 2))).status is ConeStatus.INSIDE


def test_copositive_nonnegative_entries_shortcut():
    verdict = is_copositive(np.array([[0.0, 2.0], [2.0, 0.0]]))
    assert verdict.status is ConeStatus.INSIDE
    assert verdict.certificate_kind is CertificateKind.SUFFICIENT_RULE


def test_copositive_negative_diagonal_witness():
    verdict = is_copositive(np.diag([1.0, -0.1]))
    assert verdict.status is ConeStatus.OUTSIDE
    np.testing.assert_allclose(verdict.witness, [0.0, 1.0])


def test_copositive_witness_is_violating_simplex_point():
    rng = np.random.default_rng(11)
    found = 0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        a = random_symmetric(rng, n)
        verdict = is_copositive(a)
        if verdict.status is ConeStatus.OUTSIDE:
            x = verdict.witness
            assert np.all(x >= -1e-12)
            assert abs(x.sum() - 1.0) < 1e-9
            assert x @ a @ x < 0.0
            found += 1
    assert found > 50  # random gaussian matrices are usually not copositive


def test_copositive_2x2_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(300):
        a = random_symmetric(rng, 2)
        verdict = is_copositive(a)
        reference = brute_force_simplex_min(a, resolution=400)
        tol = 1e-9 * max(1.0, np.abs(a).max())
        if reference < -1e-4:
            assert verdict.status is ConeStatus.OUTSIDE
        elif reference > 1e-4:
            assert verdict.status is ConeStatus.INSIDE, a
        # near-boundary cases may legitimately flip within tolerance
        del tol


def test_copositive_2x2_interior_minimum():
    # positive diagonal, strongly negative cross term: minimum inside the edge
    a = np.array([[1.0, -2.0], [-2.0, 1.0]])
    verdict = is_copositive(a)
    assert verdict.status is ConeStatus.OUTSIDE
    np.testing.assert_allclose(verdict.witness, [0.5, 0.5])
    assert verdict.witness @ a @ verdict.witness == pytest.approx(-0.5)


def test_copositive_horn_matrix():
    verdict = is_copositive(HORN_MATRIX)
    assert verdict.status is ConeStatus.INSIDE
    assert is_psd(HORN_MATRIX).status is ConeStatus.OUTSIDE


def test_copositive_horn_boundary_perturbation():
    # subtracting from the diagonal leaves the copositive cone
    verdict = is_copositive(HORN_MATRIX - 0.05 * np.eye(5))
    assert verdict.status is ConeStatus.OUTSIDE


def test_copositive_agrees_with_brute_force_small():
    rng = np.random.default_rng(23)
    for _ in range(60):
        n = int(rng.integers(3, 6))
        a = random_symmetric(rng, n)
        verdict = is_copositive(a)
        reference = brute_force_simplex_min(a, resolution=30)
        if verdict.status is ConeStatus.INSIDE:
            assert reference >= -1e-6
        else:
            # library found a violation; brute force need not, but the
            # witness itself is checked in another test
            pass


def test_copositive_psd_implies_copositive():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        b = rng.normal(size=(n, n))
        a = b @ b.T
        assert is_copositive(a).status is ConeStatus.INSIDE


def test_copositive_size_cap():
    with pytest.raises(SizeLimitError):
        is_copositive(np.eye(11))


def test_copositive_dimension_eleven_message_names_cap():
    with pytest.raises(SizeLimitError, match="10"):
        is_copositive(np.eye(12))


def test_copositive_large_dimension_inside():
    # n = 10: the coarse grid plus descent still certifies clear cases
    rng = np.random.default_rng(3)
    b = rng.normal(size=(10, 10))
    assert is_copositive(b @ b.T + np.eye(10)).status is ConeStatus.INSIDE
    a = b @ b.T
    a[0, 0] = -1.0
    a = 0.5 * (a + a.T)
    assert is_copositive(a).status is ConeStatus.OUTSIDE


def test_copositive_deterministic():
    rng = np.random.default_rng(19)
    a = random_symmetric(rng, 5)
    first = is_copositive(a)
    second = is_copositive(a)
    assert first.status is second.status
    if first.witness is not None:
        np.testing.assert_array_equal(first.witness, second.witness)


# --- simplex grid ---------------------------------------------------------------


def test_simplex_grid_counts_and_sums():
    grid = simplex_grid(3, 4)
    assert grid.shape == (math.comb(4 + 2, 2), 3)
    np.testing.assert_allclose(grid.sum(axis=1), 1.0)
    assert np.all(grid >= 0.0)
    # contains every vertex
    for i in range(3):
        assert np.any(np.all(grid == np.eye(3)[i], axis=1))


def test_simplex_grid_validates():
    with pytest.raises(UsageError):
        simplex_grid(0, 4)


# --- complete positivity --------------------------------------------------------


def test_cp_gram_of_nonnegative_factor():
    b = np.array([[1.0, 1.0], [0.0, 1.0]])
    verdict = is_completely_positive(b.T @ b)
    assert verdict.status is ConeStatus.INSIDE


def test_cp_negative_entry_dual_certificate():
    a = np.diag([1.0, -1.0])
    verdict = is_completely_positive(a)
    assert verdict.status is ConeStatus.OUTSIDE
    # the witness is a copositive matrix with negative pairing against a
    assert dual_pairing(a, verdict.witness) < 0.0


def test_cp_not_psd_dual_certificate():
    a = np.array([[1.0, 2.0], [2.0, 1.0]])  # nonnegative but indefinite
    verdict = is_completely_positive(a)
    assert verdict.status is ConeStatus.OUTSIDE
    assert verdict.certificate_kind is CertificateKind.EIGEN
    w = verdict.witness
    assert is_psd(w).status is ConeStatus.INSIDE  # PSD, hence copositive
    assert dual_pairing(a, w) < 0.0


def test_cp_horn_matrix_outside():
    assert is_completely_positive(HORN_MATRIX).status is ConeStatus.OUTSIDE


def test_cp_small_doubly_nonnegative_inside():
    # for n <= 4, doubly nonnegative == completely positive
    rng = np.random.default_rng(29)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        b = rng.random((n + 2, n))
        verdict = is_completely_positive(b.T @ b)
        assert verdict.status is ConeStatus.INSIDE


def test_cp_diagonally_dominant_factor_reconstructs():
    a = np.array(
        [
            [4.0, 1.0, 0.5, 0.0, 1.0],
            [1.0, 3.0, 1.0, 0.5, 0.0],
            [0.5, 1.0, 3.5, 1.0, 0.5],
            [0.0, 0.5, 1.0, 2.5, 0.5],
            [1.0, 0.0, 0.5, 0.5, 2.5],
        ]
    )
    verdict = is_completely_positive(a)
    assert verdict.status is ConeStatus.INSIDE
    assert verdict.certificate_kind is CertificateKind.SUFFICIENT_RULE
    b = verdict.witness
    assert np.all(b >= 0.0)
    np.testing.assert_allclose(b.T @ b, a, atol=1e-12)


def test_cp_factorization_search_five_dimensional():
    rng = np.random.default_rng(41)
    b = rng.random((8, 5)) + 0.1
    a = b.T @ b
    verdict = is_completely_positive(a)
    assert verdict.status is ConeStatus.INSIDE
    assert verdict.certificate_kind in (
        CertificateKind.FACTORIZATION,
        CertificateKind.SUFFICIENT_RULE,
    )
    w = verdict.witness
    assert np.all(w >= 0.0)
    tol = 1e-8 * max(1.0, np.abs(a).max())
    assert np.abs(w.T @ w - a).max() <= tol


def test_cp_certified_negative_case_is_not_inside():
    # 1.7 I + (5-cycle adjacency): nonnegative and PSD (eigenvalues
    # 1.7 + 2 cos(2 pi k / 5) > 0) yet it pairs to -1.5 with the Horn
    # matrix, which is copositive -- so by duality it cannot be completely
    # positive.  The honest outcome for the search ladder is Unknown.
    cycle = np.zeros((5, 5))
    for i in range(5):
        cycle[i, (i + 1) % 5] = cycle[(i + 1) % 5, i] = 1.0
    a = 1.7 * np.eye(5) + cycle
    assert np.linalg.eigvalsh(a).min() > 0.0
    assert dual_pairing(a, HORN_MATRIX) == pytest.approx(-1.5)
    verdict = is_completely_positive(a)
    assert verdict.status is not ConeStatus.INSIDE


def test_cp_implies_psd_and_copositive():
    rng = np.random.default_rng(31)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        b = rng.random((n + 1, n))
        a = b.T @ b
        if is_completely_positive(a).status is ConeStatus.INSIDE:
            assert is_psd(a).status is ConeStatus.INSIDE
            assert is_copositive(a).status is ConeStatus.INSIDE


# --- duality pairing -------------------------------------------------------------


def test_dual_pairing_identity():
    assert dual_pairing(np.eye(2), np.eye(2)) == pytest.approx(2.0)


def test_dual_pairing_zero():
    assert dual_pairing(np.array([[1.0, 2.0], [2.0, 3.0]]), np.zeros((2, 2))) == 0.0


def test_dual_pairing_shape_mismatch():
    with pytest.raises(UsageError):
        dual_pairing(np.eye(2), np.eye(3))


def test_dual_pairing_nonnegative_on_cone_pair():
    # every copositive/completely-positive pair has nonnegative pairing
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        b = rng.random((n + 1, n))
        cp = b.T @ b
        m = random_symmetric(rng, n)
        if is_copositive(m).status is ConeStatus.INSIDE:
            assert dual_pairing(cp, m) >= -1e-8 * max(1.0, np.abs(cp).max())


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_property_gram_matrices_are_copositive(n, seed):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=(n, n))
    verdict = is_copositive(b @ b.T)
    assert verdict.status is ConeStatus.INSIDE


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=10**6))
def test_property_outside_witness_valid(n, seed):
    rng = np.random.default_rng(seed)
    a = random_symmetric(rng, n)
    verdict = is_copositive(a)
    if verdict.status is ConeStatus.OUTSIDE:
        x = verdict.witness
        assert x @ a @ x < 0.0
        assert np.all(x >= -1e-12)
