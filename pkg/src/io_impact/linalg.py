"""Small dense linear-algebra toolkit.

Matrices and vectors are plain float64 numpy arrays, made read-only and
checked for finiteness by :func:`as_matrix` / :func:`as_vector`. The
inverse is computed by our own LU factorisation with partial pivoting so
that the residual check and the failing pivot column are under our
control; :func:`neumann_inverse` is an independent series oracle for
``(I - A)^{-1}``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, SingularMatrixError

DEFAULT_PIVOT_TOL = 1e-12
RESIDUAL_TOL_PER_DIM = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Return a read-only float64 2-D copy of ``data``; reject NaN/inf."""
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return _freeze(arr)


def as_vector(data, name: str = "vector") -> np.ndarray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return _freeze(arr)


def mat_mul(a, b) -> np.ndarray:
    """Matrix product ``a @ b``. A 1-D ``b`` is treated as a column vector."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return _freeze(a @ b)


def _require_square(m: np.ndarray, what: str) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} requires a square matrix, got shape {m.shape}")
    return m.shape[0]


def lu_factor(m, pivot_tol: float = DEFAULT_PIVOT_TOL):
    """Doolittle LU with partial pivoting.

    Returns ``(lu, perm)`` where ``lu`` packs the unit-lower factor below the
    diagonal and the upper factor on and above it, and ``perm`` is the row
    permutation such that ``m[perm] = L @ U``.
    """
    lu = np.array(m, dtype=np.float64)
    n = _require_square(lu, "LU factorisation")
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < pivot_tol:
            raise SingularMatrixError(
                f"pivot {abs(lu[p, k]):.3e} below tolerance {pivot_tol:.1e} in column {k}",
                column=k,
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm


def lu_solve(lu: np.ndarray, perm: np.ndarray, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` given the packed factors from :func:`lu_factor`."""
    y = np.array(rhs, dtype=np.float64)[perm]
    n = lu.shape[0]
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1 :] @ y[i + 1 :]) / lu[i, i]
    return y


def inf_norm(m: np.ndarray) -> float:
    """Induced infinity norm (maximum absolute row sum)."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(m), axis=1)))


def lu_invert(m, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """Invert a square matrix via LU with partial pivoting.

    The result is residual-checked on both sides against
    ``1e-9 * n``; a failure is reported as :class:`SingularMatrixError`
    because it only happens for numerically singular input.
    """
    m = as_matrix(m)
    n = _require_square(m, "lu_invert")
    lu, perm = lu_factor(m, pivot_tol)
    inv = lu_solve(lu, perm, np.eye(n))
    eye = np.eye(n)
    residual = max(inf_norm(m @ inv - eye), inf_norm(inv @ m - eye))
    if residual > RESIDUAL_TOL_PER_DIM * n:
        raise SingularMatrixError(
            f"inverse residual {residual:.3e} exceeds {RESIDUAL_TOL_PER_DIM * n:.1e}"
        )
    return _freeze(inv)


def neumann_inverse(a, terms: int) -> np.ndarray:
    """Partial sum ``I + A + ... + A^(terms-1)`` of the Neumann series."""
    a = np.asarray(a, dtype=np.float64)
    n = _require_square(a, "neumann_inverse")
    total = np.eye(n)
    power = np.eye(n)
    for _ in range(terms - 1):
        power = power @ a
        total += power
    return _freeze(total)


def spectral_radius_bound(a, iterations: int = 1000) -> float:
    """Estimate the dominant eigenvalue magnitude of a nonnegative matrix.

    Power iteration runs on ``A + I`` so that periodic (e.g. cyclic
    permutation) structure cannot make the iterates oscillate; for a
    nonnegative matrix the Perron root of the shifted matrix is exactly
    ``rho(A) + 1``.
    """
    a = np.asarray(a, dtype=np.float64)
    n = _require_square(a, "spectral_radius_bound")
    if n == 0 or not np.any(a):
        return 0.0
    shifted = a + np.eye(n)
    y = np.ones(n)
    estimate = 1.0
    for _ in range(iterations):
        z = shifted @ y
        estimate = float(np.max(np.abs(z)))
        y = z / estimate
    return max(estimate - 1.0, 0.0)
