"""Smallest singular values and row-span distances.

For an n x n matrix A the smallest singular value is ``min ||Ax|| / ||x||``.
For regular 0/1 matrices the interesting action happens on the hyperplane of
sum-zero vectors: there ``||Ax|| = ||(J - A)x||``, which is what makes the
complement bijection useful.  ``restricted_smallest`` computes the smallest
singular value of A restricted to that hyperplane via a fixed orthonormal
basis, so results are reproducible to the last bit.

Also here: the distance from a vector to the span of a set of rows, and a
certified lower bound for the distance from one matrix row to the span of
the remaining rows plus a pair sum, witnessed by an arbitrary unit vector.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RegularDigraphMatrix

__all__ = [
    "SpectralError",
    "SpectralResult",
    "sumzero_basis",
    "smallest_singular",
    "restricted_smallest",
    "distance_to_rowspan",
    "row_distance_bound",
    "RowDistanceBound",
]

DEFAULT_TOL = 1e-10


class SpectralError(RuntimeError):
    """SVD failed to converge or missed the requested tolerance."""


@dataclass(frozen=True)
class SpectralResult:
    """Smallest singular value with its singular vector pair.

    ``value`` is ``s_min``; ``right`` and ``left`` are unit vectors with
    ``||A right|| = value`` and ``||A^T left|| = value``.  Both vectors are
    sign-fixed: the largest-magnitude coordinate is positive (ties broken by
    the lowest index).  ``residual`` is the achieved relative defect
    ``| ||A right|| - value | / max(1, value)``.
    """

    value: float
    right: np.ndarray
    left: np.ndarray
    residual: float


def _fix_sign(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    if v[idx] < 0:
        return -v
    return v.copy()


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, RegularDigraphMatrix):
        return a.entries.astype(np.float64)
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def _svd(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        return np.linalg.svd(arr)
    except np.linalg.LinAlgError:
        pass
    # gesdd can fail to converge where the classical gesvd still succeeds
    import scipy.linalg

    try:
        u, s, vt = scipy.linalg.svd(arr, lapack_driver="gesvd")
        return u, s, vt
    except Exception as exc:  # pragma: no cover - no known deterministic trigger
        raise SpectralError(f"SVD did not converge: {exc}") from exc


def smallest_singular(a, tol: float = DEFAULT_TOL) -> SpectralResult:
    """Smallest singular value of ``a`` with residual-checked vectors.

    ``tol`` must lie in (0, 1e-6]; the achieved residual is reported and an
    error is raised if it misses the requested tolerance.
    """
    if not 0 < tol <= 1e-6:
        raise ValueError(f"tol must be in (0, 1e-6], got {tol}")
    arr = _as_matrix(a)
    if not np.isfinite(arr).all():
        raise ValueError("matrix contains non-finite entries")
    u, s, vt = _svd(arr)
    value = float(s[-1])
    right = _fix_sign(vt[-1])
    left = _fix_sign(u[:, -1])
    residual = abs(float(np.linalg.norm(arr @ right)) - value) / max(1.0, value)
    residual = max(residual, abs(float(np.linalg.norm(arr.T @ left)) - value) / max(1.0, value))
    if residual > tol:
        raise SpectralError(f"achieved residual {residual:.3e} exceeds tol {tol:.3e}")
    return SpectralResult(value=value, right=right, left=left, residual=residual)


def sumzero_basis(n: int) -> np.ndarray:
    """A fixed n x (n-1) orthonormal basis of the sum-zero hyperplane.

    Column k (0-based) is (1, ..., 1, -(k+1), 0, ..., 0) / sqrt((k+1)(k+2))
    with k+1 leading ones.  Fixed once so restricted results are bitwise
    reproducible; the restricted singular value itself is basis independent.
    """
    if n < 2:
        raise ValueError("sum-zero hyperplane needs n >= 2")
    b = np.zeros((n, n - 1), dtype=np.float64)
    for k in range(n - 1):
        b[: k + 1, k] = 1.0
        b[k + 1, k] = -(k + 1)
        b[:, k] /= np.sqrt(float((k + 1) * (k + 2)))
    return b


def restricted_smallest(a, tol: float = DEFAULT_TOL) -> float:
    """Smallest singular value of ``a`` restricted to sum-zero inputs.

    Computed as the smallest singular value of ``A @ B`` for the fixed
    orthonormal basis B of the hyperplane orthogonal to the all-ones vector.
    """
    arr = _as_matrix(a)
    n = arr.shape[1]
    restricted = arr @ sumzero_basis(n)
    u, s, vt = _svd(restricted)
    del u, vt
    value = float(s[-1])
    if value < 0 or not np.isfinite(value):  # pragma: no cover - defensive
        raise SpectralError(f"invalid restricted singular value {value}")
    return value


def distance_to_rowspan(v, rows) -> float:
    """Euclidean distance from ``v`` to the span of the given row vectors.

    Rank deficiency among the rows is fine; the projection uses least
    squares and the distance is the explicit residual norm.
    """
    v = np.asarray(v, dtype=np.float64)
    m = np.asarray(rows, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != v.shape[0]:
        raise ValueError(f"rows of shape {m.shape} do not match vector of length {v.shape[0]}")
    coef, *_ = np.linalg.lstsq(m.T, v, rcond=None)
    return float(np.linalg.norm(v - m.T @ coef))


@dataclass(frozen=True)
class RowDistanceBound:
    """Outcome of :func:`row_distance_bound`.

    ``holds`` compares ``distance >= bound - slack``; ``applicable`` is False
    when the bound's denominator vanishes (then nothing is claimed).
    """

    distance: float
    bound: float
    applicable: bool
    holds: bool


def row_distance_bound(
    m: RegularDigraphMatrix | np.ndarray,
    order,
    witness,
    slack: float = 1e-9,
) -> RowDistanceBound:
    """Certified lower bound for one row's distance to the others' span.

    Let r1, r2 be the rows in positions ``order[0]``, ``order[1]`` and V the
    span of r1 + r2 together with all remaining rows.  For any unit vector u,

        dist(r1, V) >= s_min(A) |<r1, u>| / (s_min(A) + ||B u|| + |<r1+r2, u>|)

    where B is the matrix with rows order[0], order[1] removed.  The returned
    record carries both sides; ``applicable`` is False if the denominator is
    zero (possible only when s_min = 0 and u is orthogonal to everything).
    """
    arr = _as_matrix(m)
    n = arr.shape[0]
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    witness = np.asarray(witness, dtype=np.float64)
    if abs(np.linalg.norm(witness) - 1.0) > 1e-8:
        raise ValueError("witness must be a unit vector")
    r1 = arr[order[0]]
    r2 = arr[order[1]]
    others = np.delete(arr, [order[0], order[1]], axis=0)
    span_rows = np.vstack([(r1 + r2)[None, :], others])
    distance = distance_to_rowspan(r1, span_rows)
    s_min = smallest_singular(arr).value
    denom = s_min + float(np.linalg.norm(others @ witness)) + abs(float((r1 + r2) @ witness))
    if denom == 0.0:
        return RowDistanceBound(distance=distance, bound=float("nan"), applicable=False, holds=True)
    bound = s_min * abs(float(r1 @ witness)) / denom
    return RowDistanceBound(
        distance=distance,
        bound=bound,
        applicable=True,
        holds=bool(distance >= bound - slack),
    )
