"""Surfaces as tensor-product Bernstein expansions, with elliptic operators.

f(x,y) = sum_i sum_j beta[i,j] B_{i,n}(x) B_{j,m}(y)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BernsteinBasis, basis_values, derivative_values

__all__ = ["DerivativeOrder", "TensorExpansion", "eval_grid"]


@dataclass(frozen=True)
class DerivativeOrder:
    """Mixed partial derivative order: p in x, q in y."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"derivative orders must be >= 0, got ({self.p}, {self.q})")


@dataclass(frozen=True)
class TensorExpansion:
    """Immutable coefficient matrix over a pair of 1D Bernstein bases.

    The coefficient matrix has shape (n+1, m+1) for degrees n, m. Each point
    evaluation computes the two 1D basis vectors once and contracts them
    against the coefficients, so the cost per point is O(n*m) multiplies after
    O(n+m) basis evaluations rather than (n+1)(m+1) separate basis calls.
    """

    basis_x: BernsteinBasis
    basis_y: BernsteinBasis
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        expected = (self.basis_x.size, self.basis_y.size)
        if coeffs.shape != expected:
            raise ValueError(
                f"coefficient matrix shape {coeffs.shape} does not match bases {expected}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficient matrix contains non-finite entries")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)

    def eval(self, x: float, y: float) -> float:
        """Surface value at (x, y)."""
        bx = basis_values(self.basis_x, x)
        by = basis_values(self.basis_y, y)
        return float(bx @ self.coefficients @ by)

    def partial(self, p: int, q: int, x: float, y: float) -> float:
        """Mixed partial derivative of order p in x and q in y at (x, y)."""
        dx = derivative_values(self.basis_x, p, x)
        dy = derivative_values(self.basis_y, q, y)
        return float(dx @ self.coefficients @ dy)

    def laplacian(self, x: float, y: float) -> float:
        """f_xx + f_yy at (x, y), sharing the 1D evaluations across both terms."""
        bx = basis_values(self.basis_x, x)
        by = basis_values(self.basis_y, y)
        d2x = derivative_values(self.basis_x, 2, x)
        d2y = derivative_values(self.basis_y, 2, y)
        return float(d2x @ self.coefficients @ by + bx @ self.coefficients @ d2y)

    def biharmonic(self, x: float, y: float) -> float:
        """f_xxxx + 2 f_xxyy + f_yyyy at (x, y)."""
        bx = basis_values(self.basis_x, x)
        by = basis_values(self.basis_y, y)
        d2x = derivative_values(self.basis_x, 2, x)
        d2y = derivative_values(self.basis_y, 2, y)
        d4x = derivative_values(self.basis_x, 4, x)
        d4y = derivative_values(self.basis_y, 4, y)
        c = self.coefficients
        return float(d4x @ c @ by + 2.0 * (d2x @ c @ d2y) + bx @ c @ d4y)


def eval_grid(expansion: TensorExpansion, xs, ys) -> np.ndarray:
    """Evaluate an expansion on a tensor grid; returns shape (len(xs), len(ys))."""
    bx = np.vstack([basis_values(expansion.basis_x, x) for x in np.asarray(xs, float)])
    by = np.vstack([basis_values(expansion.basis_y, y) for y in np.asarray(ys, float)])
    return bx @ expansion.coefficients @ by.T
