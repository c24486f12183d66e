"""Declarative elliptic boundary value problems and the built-in example catalog.

A problem couples a rectangular domain, a linear interior operator written as
a sum of coefficient-weighted partial derivatives, a source function, boundary
conditions, and (optionally) the exact solution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .basis import Interval
from .surface import DerivativeOrder

__all__ = [
    "Edge",
    "BoundaryRegime",
    "ConditionKind",
    "EdgeData",
    "OperatorTerm",
    "LinearOperator",
    "BoundarySpec",
    "EllipticProblem",
    "laplacian_operator",
    "helmholtz_operator",
    "biharmonic_operator",
    "catalog_example",
    "CATALOG_IDS",
    "boundary_data_consistency",
]

ScalarField = Callable[[float, float], float]


class Edge(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTTOM = "bottom"
    TOP = "top"


class ConditionKind(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class BoundaryRegime(enum.Enum):
    """Assembly regime for the boundary treatment."""

    HOMOGENEOUS_DIRICHLET = "homogeneous-dirichlet"
    NONHOMOGENEOUS = "nonhomogeneous"
    BIHARMONIC_TYPE1 = "biharmonic-type1"
    BIHARMONIC_TYPE2 = "biharmonic-type2"


def _zero(x: float, y: float) -> float:
    return 0.0


@dataclass(frozen=True)
class EdgeData:
    """One data function per rectangle edge."""

    left: ScalarField
    right: ScalarField
    bottom: ScalarField
    top: ScalarField

    @classmethod
    def zero(cls) -> "EdgeData":
        return cls(_zero, _zero, _zero, _zero)

    @classmethod
    def from_function(cls, g: ScalarField) -> "EdgeData":
        """Use the same g(x, y) on all four edges."""
        return cls(g, g, g, g)

    def on(self, edge: Edge) -> ScalarField:
        return getattr(self, edge.value)


@dataclass(frozen=True)
class OperatorTerm:
    """One term c(x,y) * d^(p+q) u / dx^p dy^q of a linear operator."""

    order: DerivativeOrder
    coefficient: ScalarField

    @classmethod
    def constant(cls, p: int, q: int, value: float) -> "OperatorTerm":
        return cls(DerivativeOrder(p, q), lambda x, y, _v=float(value): _v)


@dataclass(frozen=True)
class LinearOperator:
    """Sum of operator terms; at least one term must be genuinely differential."""

    terms: tuple[OperatorTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("operator needs at least one term")
        if all(t.order.p + t.order.q == 0 for t in terms):
            raise ValueError("operator needs at least one term with p + q >= 1")
        object.__setattr__(self, "terms", terms)

    @property
    def max_order(self) -> int:
        return max(t.order.p + t.order.q for t in self.terms)

    @property
    def max_order_x(self) -> int:
        return max(t.order.p for t in self.terms)

    @property
    def max_order_y(self) -> int:
        return max(t.order.q for t in self.terms)


def laplacian_operator() -> LinearOperator:
    return LinearOperator((OperatorTerm.constant(2, 0, 1.0), OperatorTerm.constant(0, 2, 1.0)))


def helmholtz_operator(shift: float | ScalarField) -> LinearOperator:
    """(Laplacian + shift) u; the shift sits on the zeroth-order term."""
    coeff = shift if callable(shift) else (lambda x, y, _v=float(shift): _v)
    return LinearOperator(
        (
            OperatorTerm.constant(2, 0, 1.0),
            OperatorTerm.constant(0, 2, 1.0),
            OperatorTerm(DerivativeOrder(0, 0), coeff),
        )
    )


def biharmonic_operator() -> LinearOperator:
    return LinearOperator(
        (
            OperatorTerm.constant(4, 0, 1.0),
            OperatorTerm.constant(2, 2, 2.0),
            OperatorTerm.constant(0, 4, 1.0),
        )
    )


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary conditions, grouped by the assembly regime they select.

    ``value`` always holds the Dirichlet data for u. Biharmonic type I adds a
    second Dirichlet set for d2u/dn2 (``second_normal``); type II adds Neumann
    data for du/dn (``normal``), with the outward normal convention.
    """

    regime: BoundaryRegime
    value: EdgeData
    normal: EdgeData | None = None
    second_normal: EdgeData | None = None

    def __post_init__(self):
        if self.regime is BoundaryRegime.BIHARMONIC_TYPE1 and self.second_normal is None:
            raise ValueError("biharmonic type I needs d2u/dn2 boundary data")
        if self.regime is BoundaryRegime.BIHARMONIC_TYPE2 and self.normal is None:
            raise ValueError("biharmonic type II needs du/dn boundary data")

    @classmethod
    def homogeneous_dirichlet(cls) -> "BoundarySpec":
        return cls(BoundaryRegime.HOMOGENEOUS_DIRICHLET, EdgeData.zero())

    @classmethod
    def dirichlet(cls, value: EdgeData) -> "BoundarySpec":
        return cls(BoundaryRegime.NONHOMOGENEOUS, value)

    def condition_kinds(self) -> tuple[ConditionKind, ...]:
        """Condition kinds imposed on every edge, in imposition order."""
        if self.regime is BoundaryRegime.BIHARMONIC_TYPE2:
            return (ConditionKind.DIRICHLET, ConditionKind.NEUMANN)
        if self.regime is BoundaryRegime.BIHARMONIC_TYPE1:
            return (ConditionKind.DIRICHLET, ConditionKind.DIRICHLET)
        return (ConditionKind.DIRICHLET,)


@dataclass(frozen=True)
class EllipticProblem:
    """A well-posed linear elliptic BVP on a rectangle."""

    domain: tuple[Interval, Interval]
    operator: LinearOperator
    source: ScalarField
    boundary: BoundarySpec
    exact: ScalarField | None = None


# ---------------------------------------------------------------------------
# Built-in example catalog
# ---------------------------------------------------------------------------

CATALOG_IDS = ("1", "2", "3", "4", "5a", "5b")


def _example1() -> EllipticProblem:
    # Poisson on [-1,1]^2, homogeneous Dirichlet, u = sin(pi x) sin(pi y)
    def exact(x, y):
        return math.sin(math.pi * x) * math.sin(math.pi * y)

    def source(x, y):
        return -2.0 * math.pi**2 * math.sin(math.pi * x) * math.sin(math.pi * y)

    return EllipticProblem(
        domain=(Interval(-1.0, 1.0), Interval(-1.0, 1.0)),
        operator=laplacian_operator(),
        source=source,
        boundary=BoundarySpec.homogeneous_dirichlet(),
        exact=exact,
    )


def _example2() -> EllipticProblem:
    # Poisson on [0,1]^2, Dirichlet data from u = y(1-y)x^3
    def exact(x, y):
        return y * (1.0 - y) * x**3

    def source(x, y):
        return 6.0 * x * y * (1.0 - y) - 2.0 * x**3

    return EllipticProblem(
        domain=(Interval(0.0, 1.0), Interval(0.0, 1.0)),
        operator=laplacian_operator(),
        source=source,
        boundary=BoundarySpec.dirichlet(EdgeData.from_function(exact)),
        exact=exact,
    )


def _example3() -> EllipticProblem:
    # Helmholtz (Laplacian + 1) u = x on [-pi,pi]^2, u = sin x + sin y + x
    def exact(x, y):
        return math.sin(x) + math.sin(y) + x

    def source(x, y):
        return x

    return EllipticProblem(
        domain=(Interval(-math.pi, math.pi), Interval(-math.pi, math.pi)),
        operator=helmholtz_operator(1.0),
        source=source,
        boundary=BoundarySpec.dirichlet(EdgeData.from_function(exact)),
        exact=exact,
    )


def _example4() -> EllipticProblem:
    # Simply supported plate: bilaplacian on the unit square with u and
    # d2u/dn2 both zero on the boundary; u = sin(pi x) sin(pi y).
    def exact(x, y):
        return math.sin(math.pi * x) * math.sin(math.pi * y)

    def source(x, y):
        return 4.0 * math.pi**4 * math.sin(math.pi * x) * math.sin(math.pi * y)

    return EllipticProblem(
        domain=(Interval(0.0, 1.0), Interval(0.0, 1.0)),
        operator=biharmonic_operator(),
        source=source,
        boundary=BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE1,
            value=EdgeData.zero(),
            second_normal=EdgeData.zero(),
        ),
        exact=exact,
    )


def _example5_source(x: float, y: float) -> float:
    t1 = 56400.0 * (1.0 - 10.0 * x + 15.0 * x**2) * (1.0 - y) ** 2 * y**4
    t2 = 18800.0 * x**2 * (6.0 - 20.0 * x + 15.0 * x**2) * y**2 * (6.0 - 20.0 * y + 15.0 * y**2)
    t3 = 56400.0 * (1.0 - x) ** 2 * x**4 * (1.0 - 10.0 * y + 15.0 * y**2)
    return t1 + t2 + t3


def _example5a() -> EllipticProblem:
    # Clamped plate: bilaplacian with u and du/dn both zero on the boundary;
    # u = 2350 x^4 (x-1)^2 y^4 (y-1)^2 on the unit square.
    def exact(x, y):
        return 2350.0 * x**4 * (x - 1.0) ** 2 * y**4 * (y - 1.0) ** 2

    return EllipticProblem(
        domain=(Interval(0.0, 1.0), Interval(0.0, 1.0)),
        operator=biharmonic_operator(),
        source=_example5_source,
        boundary=BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE2,
            value=EdgeData.zero(),
            normal=EdgeData.zero(),
        ),
        exact=exact,
    )


def _example5b() -> EllipticProblem:
    # Clamped plate under uniform load 1000; no closed-form solution.
    return EllipticProblem(
        domain=(Interval(0.0, 1.0), Interval(0.0, 1.0)),
        operator=biharmonic_operator(),
        source=lambda x, y: 1000.0,
        boundary=BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE2,
            value=EdgeData.zero(),
            normal=EdgeData.zero(),
        ),
        exact=None,
    )


_CATALOG = {
    "1": _example1,
    "2": _example2,
    "3": _example3,
    "4": _example4,
    "5a": _example5a,
    "5b": _example5b,
}


def catalog_example(example_id: int | str) -> EllipticProblem:
    """Return a fully configured built-in example problem.

    Known ids: 1 and 2 (Poisson with homogeneous and non-homogeneous
    Dirichlet data), 3 (Helmholtz), 4 (biharmonic, type I conditions via the
    coupled-Poisson split), 5a and 5b (biharmonic, type II conditions).
    """
    key = str(example_id).lower()
    if key not in _CATALOG:
        valid = ", ".join(CATALOG_IDS)
        raise ValueError(f"unknown example id {example_id!r}; valid ids: {valid}")
    return _CATALOG[key]()


# ---------------------------------------------------------------------------
# Transcription self-test
# ---------------------------------------------------------------------------


def _edge_samples(problem: EllipticProblem, edge: Edge, n_samples: int):
    ix, iy = problem.domain
    for k in range(n_samples):
        t = k / (n_samples - 1) if n_samples > 1 else 0.5
        if edge is Edge.LEFT:
            yield ix.a, iy.a + t * iy.width
        elif edge is Edge.RIGHT:
            yield ix.b, iy.a + t * iy.width
        elif edge is Edge.BOTTOM:
            yield ix.a + t * ix.width, iy.a
        else:
            yield ix.a + t * ix.width, iy.b


def _inward_first_derivative(f: ScalarField, x: float, y: float, edge: Edge, h: float) -> float:
    # one-sided second-order stencil along the inward normal direction
    if edge is Edge.LEFT:
        return (-3 * f(x, y) + 4 * f(x + h, y) - f(x + 2 * h, y)) / (2 * h)
    if edge is Edge.RIGHT:
        return (-3 * f(x, y) + 4 * f(x - h, y) - f(x - 2 * h, y)) / (2 * h)
    if edge is Edge.BOTTOM:
        return (-3 * f(x, y) + 4 * f(x, y + h) - f(x, y + 2 * h)) / (2 * h)
    return (-3 * f(x, y) + 4 * f(x, y - h) - f(x, y - 2 * h)) / (2 * h)


def _inward_second_derivative(f: ScalarField, x: float, y: float, edge: Edge, h: float) -> float:
    if edge in (Edge.LEFT, Edge.RIGHT):
        s = h if edge is Edge.LEFT else -h
        return (2 * f(x, y) - 5 * f(x + s, y) + 4 * f(x + 2 * s, y) - f(x + 3 * s, y)) / h**2
    s = h if edge is Edge.BOTTOM else -h
    return (2 * f(x, y) - 5 * f(x, y + s) + 4 * f(x, y + 2 * s) - f(x, y + 3 * s)) / h**2


def boundary_data_consistency(problem: EllipticProblem, n_samples: int = 41) -> float:
    """Max deviation between boundary data and the exact solution on the edges.

    Samples every imposed boundary condition at n_samples points per edge and
    returns the largest absolute mismatch. Normal derivatives of the exact
    solution are formed with one-sided finite differences, so the returned
    figure carries the stencil's noise floor (around 1e-9 for first, 1e-6 for
    second normal derivatives). Intended as a self-test of the catalog
    transcription and of user-defined problems.
    """
    if problem.exact is None:
        raise ValueError("boundary_data_consistency requires an exact solution")
    exact = problem.exact
    spec = problem.boundary
    ix, iy = problem.domain
    worst = 0.0
    for edge in Edge:
        width = ix.width if edge in (Edge.LEFT, Edge.RIGHT) else iy.width
        for x, y in _edge_samples(problem, edge, n_samples):
            worst = max(worst, abs(exact(x, y) - spec.value.on(edge)(x, y)))
            if spec.regime is BoundaryRegime.BIHARMONIC_TYPE2:
                # outward normal derivative = -(inward derivative)
                dn = -_inward_first_derivative(exact, x, y, edge, 3e-7 * width)
                worst = max(worst, abs(dn - spec.normal.on(edge)(x, y)))
            elif spec.regime is BoundaryRegime.BIHARMONIC_TYPE1:
                d2n = _inward_second_derivative(exact, x, y, edge, 5e-5 * width)
                worst = max(worst, abs(d2n - spec.second_normal.on(edge)(x, y)))
    return worst
