"""Dense direct solver: LU factorization with partial pivoting, from scratch.

The factorization, substitution, and condition estimation kernels are written
against plain numpy arrays so the arithmetic order is fixed by this module and
not by an external solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError

__all__ = ["LUFactors", "lu_factor", "lu_solve", "condition_estimate"]

# relative pivot threshold below which the matrix is declared singular
PIVOT_TOLERANCE = 1e-13


@dataclass(frozen=True)
class LUFactors:
    """Combined L\\U storage (unit lower, upper) with the row permutation.

    ``perm`` maps factored row i to original row perm[i], i.e. (P A)[i, :] =
    A[perm[i], :]. ``sign`` is the permutation parity (+1 or -1). Partial
    pivoting bounds every multiplier, so |L| entries never exceed 1.
    """

    lu: np.ndarray
    perm: np.ndarray
    sign: int

    @property
    def size(self) -> int:
        return self.lu.shape[0]


def lu_factor(matrix: np.ndarray, pivot_tolerance: float = PIVOT_TOLERANCE) -> LUFactors:
    """Factor P A = L U with partial pivoting.

    The pivot for column k is the entry of largest absolute value on or below
    the diagonal; ties go to the smallest row index. A pivot below
    pivot_tolerance times the infinity norm of A raises SingularMatrixError
    carrying the column index. Exact zero pivots always raise. Callers that
    must factor through legitimately near-singular systems (high-order
    collocation matrices run deep into their conditioning limit) pass
    pivot_tolerance=0.0 to keep only the exact-zero guard.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"lu_factor needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    anorm = float(np.max(np.sum(np.abs(a), axis=1))) if n else 0.0
    tol = pivot_tolerance * anorm
    perm = np.arange(n)
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[p, k]
        if abs(pivot) < tol or pivot == 0.0:
            raise SingularMatrixError(column=k, pivot=float(pivot))
        if p != k:
            a[[k, p], :] = a[[p, k], :]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        if k + 1 < n:
            a[k + 1 :, k] /= a[k, k]
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    a.flags.writeable = False
    perm.flags.writeable = False
    return LUFactors(lu=a, perm=perm, sign=sign)


def lu_solve(factors: LUFactors, rhs: np.ndarray) -> np.ndarray:
    """Solve A x = rhs using precomputed factors."""
    b = np.asarray(rhs, dtype=float)
    n = factors.size
    if b.shape != (n,):
        raise ValueError(f"rhs shape {b.shape} does not match system size {n}")
    lu = factors.lu
    y = b[factors.perm].copy()
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1 :] @ y[i + 1 :]) / lu[i, i]
    return y


def _lu_solve_transpose(factors: LUFactors, rhs: np.ndarray) -> np.ndarray:
    """Solve A^T w = rhs; needed by the condition estimator."""
    lu = factors.lu
    n = factors.size
    s = np.asarray(rhs, dtype=float).copy()
    for i in range(n):  # U^T s = rhs (forward, non-unit diagonal)
        s[i] = (s[i] - lu[:i, i] @ s[:i]) / lu[i, i]
    for i in range(n - 1, -1, -1):  # L^T v = s (backward, unit diagonal)
        s[i] -= lu[i + 1 :, i] @ s[i + 1 :]
    w = np.empty(n)
    w[factors.perm] = s
    return w


def _inverse_norm1_estimate(factors: LUFactors, max_iter: int = 5) -> float:
    """Estimate of ||A^{-1}||_1 by Hager's method using existing factors."""
    n = factors.size
    if n == 0:
        return 0.0
    x = np.full(n, 1.0 / n)
    estimate = 0.0
    for _ in range(max_iter):
        z = lu_solve(factors, x)
        estimate = max(estimate, float(np.sum(np.abs(z))))
        xi = np.where(z >= 0.0, 1.0, -1.0)
        w = _lu_solve_transpose(factors, xi)
        j = int(np.argmax(np.abs(w)))
        if abs(w[j]) <= float(w @ x):
            break
        x = np.zeros(n)
        x[j] = 1.0
    return estimate


def condition_estimate(matrix: np.ndarray) -> float:
    """1-norm condition estimate of a square matrix; order of magnitude only.

    Factors with the exact-zero pivot guard only, so extreme but invertible
    matrices report their (huge) estimate; +inf is reserved for matrices the
    factorization cannot pass through at all.
    """
    a = np.asarray(matrix, dtype=float)
    norm1 = float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0
    try:
        factors = lu_factor(a, pivot_tolerance=0.0)
    except SingularMatrixError:
        return float("inf")
    return max(1.0, norm1 * _inverse_norm1_estimate(factors))
