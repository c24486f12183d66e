"""Error metrics, solve reports, and convergence studies."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .assembly import (
    CollocationGrid,
    GridDistribution,
    make_grid,
    solve_problem_detailed,
)
from .problems import EllipticProblem
from .surface import TensorExpansion, eval_grid

__all__ = [
    "SolveReport",
    "ConvergenceRow",
    "ConvergenceTable",
    "l2_relative_error",
    "relative_squared_error",
    "solve_report",
    "convergence_sweep",
    "self_consistency",
    "consistency_sweep",
]


def l2_relative_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    """Nodal L2 relative error norm: sqrt(sum (u - u_e)^2 / sum u_e^2).

    This is the figure the built-in examples' convergence tables quote. For
    the plain ratio of sums of squares without the root see
    relative_squared_error.
    """
    return float(np.sqrt(relative_squared_error(numeric, exact)))


def relative_squared_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    """Ratio of sums of squares sum (u - u_e)^2 / sum u_e^2, no square root."""
    u = np.asarray(numeric, dtype=float)
    ue = np.asarray(exact, dtype=float)
    if u.shape != ue.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {ue.shape}")
    denom = float(np.sum(ue**2))
    if denom == 0.0:
        raise ZeroDivisionError("exact field is identically zero")
    return float(np.sum((u - ue) ** 2)) / denom


@dataclass(frozen=True)
class SolveReport:
    """One solved problem with nodal values and error fields.

    exact_values, abs_error, and l2_rel_error are present exactly when the
    problem carries an exact solution.
    """

    expansion: TensorExpansion
    grid: CollocationGrid
    nodal_values: np.ndarray
    exact_values: np.ndarray | None
    abs_error: np.ndarray | None
    l2_rel_error: float | None
    system_size: int
    residual_inf: float
    condition: float
    seconds: float

    @property
    def degree_x(self) -> int:
        return self.grid.degree_x

    @property
    def degree_y(self) -> int:
        return self.grid.degree_y


def solve_report(
    problem: EllipticProblem,
    n: int,
    m: int | None = None,
    distribution: GridDistribution = GridDistribution.UNIFORM,
) -> SolveReport:
    """Solve with degrees (n, m), defaulting m = n, and collect diagnostics.

    Errors are evaluated at the collocation nodes, matching the nodal
    definition used by the convergence tables.
    """
    if m is None:
        m = n
    grid = make_grid(n, m, problem.domain, distribution)
    start = time.perf_counter()
    result = solve_problem_detailed(problem, grid)
    seconds = time.perf_counter() - start
    nodal = eval_grid(result.expansion, grid.nodes_x, grid.nodes_y)
    exact_values = None
    abs_error = None
    l2 = None
    if problem.exact is not None:
        exact_values = np.array(
            [[problem.exact(x, y) for y in grid.nodes_y] for x in grid.nodes_x]
        )
        abs_error = np.abs(nodal - exact_values)
        l2 = l2_relative_error(nodal, exact_values)
    return SolveReport(
        expansion=result.expansion,
        grid=grid,
        nodal_values=nodal,
        exact_values=exact_values,
        abs_error=abs_error,
        l2_rel_error=l2,
        system_size=result.system_size,
        residual_inf=result.residual_inf,
        condition=result.condition,
        seconds=seconds,
    )


@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    error: float
    condition: float
    seconds: float


@dataclass(frozen=True)
class ConvergenceTable:
    """Error versus polynomial order, ready for log-scale plotting."""

    rows: tuple[ConvergenceRow, ...]
    metric: str = "l2_rel_error"

    def orders(self) -> list[int]:
        return [r.order for r in self.rows]

    def errors(self) -> list[float]:
        return [r.error for r in self.rows]


def _check_orders(orders) -> list[int]:
    orders = [int(o) for o in orders]
    if not orders:
        raise ValueError("orders list must not be empty")
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError(f"orders must be strictly increasing, got {orders}")
    return orders


def convergence_sweep(
    problem: EllipticProblem,
    orders,
    distribution: GridDistribution = GridDistribution.UNIFORM,
) -> ConvergenceTable:
    """One solve per order; requires an exact solution."""
    orders = _check_orders(orders)
    if problem.exact is None:
        raise ValueError(
            "convergence_sweep requires an exact solution; "
            "use consistency_sweep for problems without one"
        )
    rows = []
    for order in orders:
        report = solve_report(problem, order, distribution=distribution)
        rows.append(
            ConvergenceRow(
                order=order,
                error=report.l2_rel_error,
                condition=report.condition,
                seconds=report.seconds,
            )
        )
    return ConvergenceTable(rows=tuple(rows))


def _probe_grid(problem: EllipticProblem, per_axis: int = 11):
    ix, iy = problem.domain
    xs = np.linspace(ix.a, ix.b, per_axis)
    ys = np.linspace(iy.a, iy.b, per_axis)
    return [(x, y) for x in xs for y in ys]


def self_consistency(
    problem: EllipticProblem,
    order_lo: int,
    order_hi: int,
    probe_points=None,
    distribution: GridDistribution = GridDistribution.UNIFORM,
) -> float:
    """Relative disagreement between two solves at different orders.

    Probes both expansions (default: an 11 x 11 uniform grid over the closed
    domain) and returns max |u_lo - u_hi| normalized by the largest |u_hi|
    over the probe set, so homogeneous boundary values cannot blow up the
    ratio. This is the convergence acceptance figure for problems without an
    exact solution.
    """
    if probe_points is None:
        probe_points = _probe_grid(problem)
    lo = solve_report(problem, order_lo, distribution=distribution).expansion
    hi = solve_report(problem, order_hi, distribution=distribution).expansion
    return _expansion_disagreement(lo, hi, probe_points)


def _expansion_disagreement(lo: TensorExpansion, hi: TensorExpansion, probe_points) -> float:
    diff = 0.0
    scale = 0.0
    for x, y in probe_points:
        v_hi = hi.eval(x, y)
        diff = max(diff, abs(lo.eval(x, y) - v_hi))
        scale = max(scale, abs(v_hi))
    return diff / scale if scale > 0.0 else diff


def consistency_sweep(
    problem: EllipticProblem,
    orders,
    distribution: GridDistribution = GridDistribution.UNIFORM,
    probe_points=None,
) -> ConvergenceTable:
    """Self-consistency of each order against the largest order in the list.

    Substitute for convergence_sweep when no exact solution exists; the last
    row compares the largest order with itself and is zero by construction.
    """
    orders = _check_orders(orders)
    if probe_points is None:
        probe_points = _probe_grid(problem)
    reports = {o: solve_report(problem, o, distribution=distribution) for o in orders}
    reference = reports[orders[-1]].expansion
    rows = []
    for order in orders:
        rep = reports[order]
        rows.append(
            ConvergenceRow(
                order=order,
                error=_expansion_disagreement(rep.expansion, reference, probe_points),
                condition=rep.condition,
                seconds=rep.seconds,
            )
        )
    return ConvergenceTable(rows=tuple(rows), metric="self_consistency")
