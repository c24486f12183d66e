"""Bernstein polynomial basis over an arbitrary interval [a, b].

The family B_{i,n}(x) = C(n,i) (x-a)^i (b-x)^(n-i) / (b-a)^n, i = 0..n,
with non-recursive evaluation of derivatives of any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Interval",
    "BernsteinBasis",
    "binomial",
    "eval_basis",
    "eval_derivative",
    "local_maximum",
    "basis_values",
    "derivative_values",
]


def binomial(n: int, k: int) -> float:
    """Binomial coefficient C(n, k) by the multiplicative product, in float64.

    Uses the symmetry C(n,k) = C(n,n-k) to shorten the product. Factorials are
    never formed, so large n stay finite where the factorial ratio would
    overflow long before the coefficient itself does.
    """
    if n < 0 or k < 0:
        raise ValueError(f"binomial requires nonnegative arguments, got ({n}, {k})")
    if k > n:
        raise ValueError(f"binomial requires k <= n, got ({n}, {k})")
    k = min(k, n - k)
    out = 1.0
    for i in range(1, k + 1):
        out *= (n - (k - i)) / i
    return out


@dataclass(frozen=True)
class Interval:
    """Closed interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b


@dataclass(frozen=True)
class BernsteinBasis:
    """Degree-n Bernstein family on an interval; n+1 members indexed 0..n.

    Binomial coefficients are cached per instance at construction, so
    instances are immutable and safe to share between threads.
    """

    degree: int
    interval: Interval

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        coeffs = np.array(
            [binomial(self.degree, i) for i in range(self.degree + 1)]
        )
        coeffs.flags.writeable = False
        object.__setattr__(self, "_binom", coeffs)

    @property
    def size(self) -> int:
        return self.degree + 1

    def _check_index(self, i: int):
        if not 0 <= i <= self.degree:
            raise ValueError(f"basis index {i} out of range [0, {self.degree}]")

    def _check_point(self, x: float):
        if not self.interval.contains(x):
            raise ValueError(
                f"x = {x} outside defining interval [{self.interval.a}, {self.interval.b}]"
            )


def eval_basis(basis: BernsteinBasis, i: int, x: float) -> float:
    """Value of B_{i,n} at x in [a, b]."""
    basis._check_index(i)
    basis._check_point(x)
    n = basis.degree
    w = basis.interval.width
    t = (x - basis.interval.a) / w
    s = (basis.interval.b - x) / w
    return basis._binom[i] * t**i * s ** (n - i)


def eval_derivative(basis: BernsteinBasis, order: int, i: int, x: float) -> float:
    """Derivative of order p of B_{i,n} at x, by the explicit summation formula.

    D^p B_{i,n}(x) = n(n-1)...(n-p+1) / (b-a)^p
                     * sum_{k=max(0,i+p-n)}^{min(i,p)} (-1)^(k+p) C(p,k) B_{i-k,n-p}(x)

    The alternating sign makes p = 1 agree with the analytic derivative of the
    basis definition (checked against finite differences in the test suite).
    p = 0 reduces to the plain evaluation, and p > n is exactly 0 because the
    summation range is empty past the polynomial degree.
    """
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    basis._check_index(i)
    if order == 0:
        return eval_basis(basis, i, x)
    n = basis.degree
    if order > n:
        basis._check_point(x)
        return 0.0
    reduced = BernsteinBasis(n - order, basis.interval)
    prefactor = 1.0
    for r in range(order):
        prefactor *= n - r
    prefactor /= basis.interval.width**order
    acc = 0.0
    for k in range(max(0, i + order - n), min(i, order) + 1):
        term = binomial(order, k) * eval_basis(reduced, i - k, x)
        acc += -term if (k + order) % 2 else term
    return prefactor * acc


def local_maximum(basis: BernsteinBasis, i: int) -> tuple[float, float]:
    """Location and value of the unique interior maximum of B_{i,n}, 0 < i < n.

    The maximum sits at the affine image of i/n on [a, b]. Its value
    i^i n^(-n) (n-i)^(n-i) C(n,i) does not depend on the interval and is
    accumulated in log space so large degrees cannot overflow.
    """
    n = basis.degree
    basis._check_index(i)
    if i == 0 or i == n:
        raise ValueError(
            f"endpoint members (i = 0 or i = n) are monotone, got i = {i} for n = {n}"
        )
    iv = basis.interval
    x_star = iv.a + (i / n) * iv.width
    log_value = (
        i * math.log(i)
        - n * math.log(n)
        + (n - i) * math.log(n - i)
        + math.lgamma(n + 1)
        - math.lgamma(i + 1)
        - math.lgamma(n - i + 1)
    )
    return x_star, math.exp(log_value)


def basis_values(basis: BernsteinBasis, x: float) -> np.ndarray:
    """All n+1 basis values at x as a vector."""
    return np.array([eval_basis(basis, i, x) for i in range(basis.size)])


def derivative_values(basis: BernsteinBasis, order: int, x: float) -> np.ndarray:
    """All n+1 order-p derivative values at x as a vector."""
    if order == 0:
        return basis_values(basis, x)
    n = basis.degree
    if order > n:
        basis._check_point(x)
        return np.zeros(basis.size)
    reduced = BernsteinBasis(n - order, basis.interval)
    reduced_vals = basis_values(reduced, x)
    prefactor = 1.0
    for r in range(order):
        prefactor *= n - r
    prefactor /= basis.interval.width**order
    out = np.zeros(basis.size)
    for i in range(basis.size):
        acc = 0.0
        for k in range(max(0, i + order - n), min(i, order) + 1):
            term = binomial(order, k) * reduced_vals[i - k]
            acc += -term if (k + order) % 2 else term
        out[i] = prefactor * acc
    return out
