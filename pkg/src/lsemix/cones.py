"""Matrix cone membership: positive semidefinite, copositive, completely positive.

The three cones are nested: every completely positive matrix is both PSD and
entrywise nonnegative ("doubly nonnegative"), and every PSD or entrywise
nonnegative matrix is copositive.  The completely positive cone is the dual
of the copositive cone under the trace inner product <A, B> = tr(A'B).

Copositivity (x'Ax >= 0 for all x >= 0) is co-NP-hard in general.  The
implementation is exact for n <= 2, and for 3 <= n <= 10 uses a dense simplex
grid followed by projected-gradient descent from the most promising seeds; a
negative value found anywhere is a certificate of non-membership, while the
exhaustive search coming up empty is reported as Inside (the procedure is a
heuristic decision, see the module tests for its calibration against brute
force).  Complete positivity is decided by a ladder of exact rules with a
nonnegative-factorization search as the last resort; when the search fails
the honest answer is Unknown rather than a guess.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import SizeLimitError, UsageError

__all__ = [
    "ConeStatus",
    "CertificateKind",
    "ConeVerdict",
    "HORN_MATRIX",
    "is_psd",
    "is_copositive",
    "is_completely_positive",
    "dual_pairing",
    "simplex_grid",
]

#: Default absolute tolerance on normalized quadratic-form values.
DEFAULT_TOL = 1e-9

#: Simplex-grid resolution (denominator) by dimension; finer is exponentially
#: more expensive, so large n fall back to coarser seeding plus descent.
_GRID_RESOLUTION = {3: 24, 4: 24, 5: 24, 6: 24, 7: 16, 8: 12, 9: 10, 10: 8}

_DESCENT_SEEDS = 256
_DESCENT_STEPS = 300
_FACTORIZATION_RESTARTS = 200
_FACTORIZATION_POLISH = 6

#: The classical 5x5 matrix that is copositive but neither positive
#: semidefinite nor completely positive; it separates the three cones.
HORN_MATRIX = np.array(
    [
        [1.0, -1.0, 1.0, 1.0, -1.0],
        [-1.0, 1.0, -1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, -1.0, 1.0],
    ]
)
HORN_MATRIX.setflags(write=False)


class ConeStatus(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNKNOWN = "unknown"


class CertificateKind(Enum):
    EIGEN = "eigen"
    SIMPLEX_POINT = "simplex_point"
    FACTORIZATION = "factorization"
    SUFFICIENT_RULE = "sufficient_rule"
    EXACT_SMALL_N = "exact_small_n"


@dataclass(frozen=True)
class ConeVerdict:
    """Membership decision with supporting evidence.

    For copositivity Outside the witness is a simplex point x >= 0 with
    ||x||_1 = 1 and x'Ax < -tol.  For complete positivity Inside with a
    Factorization certificate the witness is a nonnegative matrix B with
    B'B = A within tolerance.  Witnesses for rule-based verdicts are the
    object the rule exhibits (an eigenvector, a dual certificate matrix, an
    explicit factor) and may be None when the rule needs none.
    """

    status: ConeStatus
    certificate_kind: CertificateKind | None = None
    witness: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.witness is not None:
            w = np.array(self.witness, dtype=float)
            w.setflags(write=False)
            object.__setattr__(self, "witness", w)


def _prepare(a, tol: float) -> tuple[np.ndarray, float]:
    """Validate symmetry, return (symmetrized copy, absolute tolerance)."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise UsageError("matrix entries must be finite")
    scale = max(float(np.abs(a).max()), 1.0)
    if float(np.abs(a - a.T).max()) > tol * scale:
        raise UsageError("matrix must be symmetric")
    return 0.5 * (a + a.T), tol * scale


def is_psd(a, tol: float = DEFAULT_TOL) -> ConeVerdict:
    """Positive semidefiniteness via eigendecomposition.

    Inside iff the smallest eigenvalue is >= -tol (scaled by the largest
    entry magnitude); Outside carries the offending eigenvector.
    """
    a, tol_abs = _prepare(a, tol)
    eigenvalues, eigenvectors = np.linalg.eigh(a)
    if eigenvalues[0] >= -tol_abs:
        return ConeVerdict(ConeStatus.INSIDE, CertificateKind.EIGEN)
    return ConeVerdict(
        ConeStatus.OUTSIDE, CertificateKind.EIGEN, witness=eigenvectors[:, 0]
    )


# Copositivity ---------------------------------------------------------------


@lru_cache(maxsize=16)
def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All points x >= 0 with sum(x) = 1 on the lattice with spacing 1/resolution.

    Compositions of ``resolution`` into ``n`` parts, enumerated as gaps between
    bar positions (the classical stars-and-bars bijection).  Cached and
    read-only; the grid has C(resolution + n - 1, n - 1) rows.
    """
    if n < 1 or resolution < 1:
        raise UsageError("dimension and resolution must be positive")
    if n == 1:
        grid = np.ones((1, 1))
    else:
        bars = np.array(
            list(itertools.combinations(range(resolution + n - 1), n - 1)),
            dtype=np.int64,
        )
        padded = np.column_stack(
            [
                np.full(bars.shape[0], -1, dtype=np.int64),
                bars,
                np.full(bars.shape[0], resolution + n - 1, dtype=np.int64),
            ]
        )
        grid = (np.diff(padded, axis=1) - 1) / float(resolution)
    grid.setflags(write=False)
    return grid


def _project_to_simplex(points: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the probability simplex."""
    n = points.shape[1]
    u = np.sort(points, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1) - 1.0
    denom = np.arange(1, n + 1)
    cond = u - css / denom > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(points.shape[0]), rho] / (rho + 1.0)
    return np.maximum(points - theta[:, None], 0.0)


def _quad_values(a: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", points, a, points)


def _descend_on_simplex(a: np.ndarray, seeds: np.ndarray, steps: int) -> np.ndarray:
    """Projected gradient descent of x'Ax from each seed; returns final points."""
    spectral = float(np.linalg.norm(a, 2))
    step = 1.0 / max(2.0 * spectral, 1e-12)
    x = seeds.copy()
    for _ in range(steps):
        x = _project_to_simplex(x - step * 2.0 * (x @ a))
    return x


def is_copositive(a, tol: float = DEFAULT_TOL) -> ConeVerdict:
    """Test x'Ax >= 0 for all x >= 0.

    Exact for n <= 2; for 3 <= n <= 10, simplex-grid seeding plus projected
    descent.  Outside verdicts always carry a violating simplex point.
    """
    a, tol_abs = _prepare(a, tol)
    n = a.shape[0]
    if n > 10:
        raise SizeLimitError(
            f"copositivity of a {n}x{n} matrix exceeds the n <= 10 solver cap"
        )
    # Entrywise nonnegative matrices are copositive outright.
    if np.all(a >= -tol_abs):
        return ConeVerdict(ConeStatus.INSIDE, CertificateKind.SUFFICIENT_RULE)
    if n == 1:
        # Already handled by the shortcut unless a11 < 0.
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=np.array([1.0])
        )
    if n == 2:
        return _copositive_2x2(a, tol_abs)

    grid = simplex_grid(n, _GRID_RESOLUTION[n])
    values = _quad_values(a, grid)
    i = int(np.argmin(values))
    best_value = float(values[i])
    best_point = grid[i].copy()
    if best_value < -tol_abs:
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=best_point
        )
    keep = min(_DESCENT_SEEDS, values.size)
    seeds = grid[np.argpartition(values, keep - 1)[:keep]]
    finals = _descend_on_simplex(a, seeds, _DESCENT_STEPS)
    values = _quad_values(a, finals)
    i = int(np.argmin(values))
    if values[i] < best_value:
        best_value = float(values[i])
        best_point = finals[i].copy()
    if best_value < -tol_abs:
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=best_point
        )
    return ConeVerdict(
        ConeStatus.INSIDE, CertificateKind.SIMPLEX_POINT, witness=best_point
    )


def _copositive_2x2(a: np.ndarray, tol_abs: float) -> ConeVerdict:
    """Closed-form 2x2 criterion: a11 >= 0, a22 >= 0, a12 + sqrt(a11 a22) >= 0."""
    a11, a22, a12 = a[0, 0], a[1, 1], a[0, 1]
    if a11 < -tol_abs:
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=np.array([1.0, 0.0])
        )
    if a22 < -tol_abs:
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=np.array([0.0, 1.0])
        )
    root = math.sqrt(max(a11, 0.0) * max(a22, 0.0))
    if a12 + root >= -tol_abs:
        return ConeVerdict(ConeStatus.INSIDE, CertificateKind.EXACT_SMALL_N)
    # Interior minimizer of the quadratic on the segment (t, 1-t).
    t = (a22 - a12) / (a11 + a22 - 2.0 * a12)
    witness = np.array([t, 1.0 - t])
    return ConeVerdict(ConeStatus.OUTSIDE, CertificateKind.SIMPLEX_POINT, witness=witness)


# Complete positivity ---------------------------------------------------------


def _diagonally_dominant_factor(a: np.ndarray, tol_abs: float) -> np.ndarray | None:
    """Explicit factor for nonnegative diagonally dominant matrices.

    A = sum_{i<j} a_ij (e_i+e_j)(e_i+e_j)' + sum_i (a_ii - sum_{j!=i} a_ij) e_i e_i'
    when every diagonal surplus is nonnegative; rows of the returned B stack
    the scaled vectors, so B'B = A exactly.
    """
    n = a.shape[0]
    off_sums = a.sum(axis=1) - np.diag(a)
    surplus = np.diag(a) - off_sums
    if np.any(surplus < -tol_abs):
        return None
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] > 0.0:
                v = np.zeros(n)
                v[i] = v[j] = math.sqrt(a[i, j])
                rows.append(v)
    for i in range(n):
        if surplus[i] > 0.0:
            v = np.zeros(n)
            v[i] = math.sqrt(surplus[i])
            rows.append(v)
    if not rows:
        rows.append(np.zeros(n))
    return np.array(rows)


def _factorization_search(a: np.ndarray, tol_abs: float) -> np.ndarray | None:
    """Search for H >= 0 (n x r) with H H' = A; None when not found.

    Multiplicative updates on a deterministic batch of random restarts,
    followed by bound-constrained quasi-Newton polish of the best candidates.
    """
    n = a.shape[0]
    r = n * (n + 1) // 2
    rng = np.random.default_rng(1234321)
    h = rng.random((_FACTORIZATION_RESTARTS, n, r)) * math.sqrt(
        max(float(np.abs(a).max()), 1e-12) / r
    )
    a_batch = a[None, :, :]
    eps = 1e-12
    for _ in range(400):
        ah = a_batch @ h
        hhh = h @ (np.transpose(h, (0, 2, 1)) @ h)
        ratio = np.maximum(ah, 0.0) / (hhh + eps)
        h *= 0.5 + 0.5 * ratio

    residuals = np.abs(h @ np.transpose(h, (0, 2, 1)) - a_batch).max(axis=(1, 2))
    order = np.argsort(residuals)[:_FACTORIZATION_POLISH]

    def objective(flat: np.ndarray):
        m = flat.reshape(n, r)
        diff = m @ m.T - a
        grad = 4.0 * diff @ m
        return float(np.sum(diff * diff)), grad.ravel()

    best: np.ndarray | None = None
    best_residual = math.inf
    for i in order:
        if residuals[i] <= tol_abs:
            candidate = h[i]
        else:
            result = optimize.minimize(
                objective,
                h[i].ravel(),
                jac=True,
                method="L-BFGS-B",
                bounds=[(0.0, None)] * (n * r),
                options={"maxiter": 500, "ftol": 1e-18, "gtol": 1e-14},
            )
            candidate = result.x.reshape(n, r)
        candidate = np.maximum(candidate, 0.0)
        residual = float(np.abs(candidate @ candidate.T - a).max())
        if residual < best_residual:
            best_residual = residual
            best = candidate
        if best_residual <= tol_abs:
            break
    if best is not None and best_residual <= tol_abs:
        return best.T  # rows are factors: B'B = A with B = best.T
    return None


def is_completely_positive(a, tol: float = DEFAULT_TOL) -> ConeVerdict:
    """Decide membership of the completely positive cone (A = B'B, B >= 0).

    Ladder: negative entry or not PSD -> Outside with a dual copositive
    certificate; doubly nonnegative with n <= 4 -> Inside (exact equality of
    the cones in low dimension); nonnegative diagonally dominant -> Inside
    with an explicit factor; otherwise a factorization search, whose failure
    yields Unknown (the membership problem is NP-hard).
    """
    a, tol_abs = _prepare(a, tol)
    n = a.shape[0]
    negative = np.argwhere(a < -tol_abs)
    if negative.size:
        i, j = negative[0]
        certificate = np.zeros_like(a)
        certificate[i, j] = certificate[j, i] = 1.0
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.SUFFICIENT_RULE, witness=certificate
        )
    psd = is_psd(a, tol)
    if psd.status is ConeStatus.OUTSIDE:
        # vv' for the negative-eigenvalue direction is a PSD (hence copositive)
        # matrix with <A, vv'> < 0: a dual separation certificate.
        v = psd.witness
        return ConeVerdict(
            ConeStatus.OUTSIDE, CertificateKind.EIGEN, witness=np.outer(v, v)
        )
    if n <= 4:
        return ConeVerdict(ConeStatus.INSIDE, CertificateKind.EXACT_SMALL_N)
    factor = _diagonally_dominant_factor(a, tol_abs)
    if factor is not None:
        return ConeVerdict(
            ConeStatus.INSIDE, CertificateKind.SUFFICIENT_RULE, witness=factor
        )
    found = _factorization_search(a, max(tol_abs, 1e-10))
    if found is not None:
        return ConeVerdict(
            ConeStatus.INSIDE, CertificateKind.FACTORIZATION, witness=found
        )
    return ConeVerdict(ConeStatus.UNKNOWN)


def dual_pairing(a, b) -> float:
    """Trace inner product tr(A'B); nonnegative across the copositive/completely
    positive dual pair."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2:
        raise UsageError(f"matrices must share a square shape, got {a.shape} and {b.shape}")
    return float(np.sum(a * b))
