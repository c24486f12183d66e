"""Collocation grid construction and dense system assembly.

Every tensor collocation node contributes exactly one row: interior operator
rows come from evaluating the interior operator on the tensor-product basis,
boundary rows from the boundary operator. The homogeneous Dirichlet regime
instead eliminates the boundary-coupled coefficients and collocates only in
the interior, shrinking the system from (n+1)(m+1) to (n-1)(m-1) unknowns.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .basis import BernsteinBasis, Interval, derivative_values
from .linalg import _inverse_norm1_estimate, lu_factor, lu_solve
from .problems import (
    BoundaryRegime,
    BoundarySpec,
    Edge,
    EllipticProblem,
    laplacian_operator,
)
from .surface import TensorExpansion

__all__ = [
    "GridDistribution",
    "NodeKind",
    "CollocationGrid",
    "IndexMode",
    "IndexMap",
    "LinearSystem",
    "SolveStage",
    "SolveResult",
    "make_grid",
    "assemble",
    "solve_problem",
    "solve_problem_detailed",
    "type1_first_problem",
    "type1_second_problem",
]


class GridDistribution(enum.Enum):
    UNIFORM = "uniform"
    CHEBYSHEV_LOBATTO = "chebyshev"


class NodeKind(enum.Enum):
    INTERIOR = "interior"
    EDGE = "edge"
    CORNER = "corner"


def _nodes_1d(n: int, interval: Interval, distribution: GridDistribution) -> np.ndarray:
    if distribution is GridDistribution.UNIFORM:
        nodes = np.linspace(interval.a, interval.b, n + 1)
    else:
        k = np.arange(n + 1)
        mid = 0.5 * (interval.a + interval.b)
        half = 0.5 * interval.width
        nodes = mid - half * np.cos(k * np.pi / n)
    nodes[0] = interval.a
    nodes[-1] = interval.b
    return nodes


@dataclass(frozen=True)
class CollocationGrid:
    """Tensor grid of (n+1) x (m+1) collocation points over the domain."""

    nodes_x: np.ndarray
    nodes_y: np.ndarray
    distribution: GridDistribution

    def __post_init__(self):
        for name in ("nodes_x", "nodes_y"):
            nodes = np.asarray(getattr(self, name), dtype=float)
            if nodes.ndim != 1 or nodes.size < 2:
                raise ValueError(f"{name} must be a 1D array of at least 2 nodes")
            if not np.all(np.diff(nodes) > 0):
                raise ValueError(f"{name} must be strictly increasing")
            nodes = nodes.copy()
            nodes.flags.writeable = False
            object.__setattr__(self, name, nodes)

    @property
    def degree_x(self) -> int:
        return self.nodes_x.size - 1

    @property
    def degree_y(self) -> int:
        return self.nodes_y.size - 1

    def node_kind(self, i: int, j: int) -> tuple[NodeKind, Edge | None]:
        """Classify tensor node (i, j); edge nodes also report their side."""
        n, m = self.degree_x, self.degree_y
        on_x = i in (0, n)
        on_y = j in (0, m)
        if on_x and on_y:
            return NodeKind.CORNER, None
        if on_x:
            return NodeKind.EDGE, Edge.LEFT if i == 0 else Edge.RIGHT
        if on_y:
            return NodeKind.EDGE, Edge.BOTTOM if j == 0 else Edge.TOP
        return NodeKind.INTERIOR, None

    def counts(self) -> dict[NodeKind, int]:
        n, m = self.degree_x, self.degree_y
        return {
            NodeKind.INTERIOR: (n - 1) * (m - 1),
            NodeKind.EDGE: 2 * (n - 1) + 2 * (m - 1),
            NodeKind.CORNER: 4,
        }


def make_grid(
    n: int,
    m: int,
    domain: tuple[Interval, Interval],
    distribution: GridDistribution = GridDistribution.UNIFORM,
) -> CollocationGrid:
    """Build the collocation grid for degrees (n, m) on the given rectangle.

    Uniform grids are equispaced including the endpoints; Chebyshev-Lobatto
    grids place x_k = midpoint - halfwidth * cos(k pi / n), increasing.
    """
    if n < 2 or m < 2:
        raise ValueError(f"collocation needs degrees n, m >= 2, got ({n}, {m})")
    return CollocationGrid(
        nodes_x=_nodes_1d(n, domain[0], distribution),
        nodes_y=_nodes_1d(m, domain[1], distribution),
        distribution=distribution,
    )


class IndexMode(enum.Enum):
    FULL = "full"
    INTERIOR_ONLY = "interior-only"


@dataclass(frozen=True)
class IndexMap:
    """Row-major bijection between tensor coefficient indices and flat indices.

    FULL maps (i, j), i = 0..n, j = 0..m to (m+1)*i + j. INTERIOR_ONLY maps
    (i, j), i = 1..n-1, j = 1..m-1 to (m-1)*(i-1) + (j-1).
    """

    mode: IndexMode
    n: int
    m: int

    @property
    def size(self) -> int:
        if self.mode is IndexMode.FULL:
            return (self.n + 1) * (self.m + 1)
        return (self.n - 1) * (self.m - 1)

    def flat(self, i: int, j: int) -> int:
        if self.mode is IndexMode.FULL:
            if not (0 <= i <= self.n and 0 <= j <= self.m):
                raise ValueError(f"tensor index ({i}, {j}) out of range")
            return (self.m + 1) * i + j
        if not (1 <= i <= self.n - 1 and 1 <= j <= self.m - 1):
            raise ValueError(f"tensor index ({i}, {j}) not interior")
        return (self.m - 1) * (i - 1) + (j - 1)

    def pair(self, flat: int) -> tuple[int, int]:
        if not 0 <= flat < self.size:
            raise ValueError(f"flat index {flat} out of range [0, {self.size})")
        if self.mode is IndexMode.FULL:
            return divmod(flat, self.m + 1)
        i, j = divmod(flat, self.m - 1)
        return i + 1, j + 1

    def scatter(self, solution: np.ndarray) -> np.ndarray:
        """Spread a flat solution vector into the (n+1) x (m+1) coefficient matrix.

        Eliminated coefficients stay zero in INTERIOR_ONLY mode.
        """
        beta = np.zeros((self.n + 1, self.m + 1))
        if self.mode is IndexMode.FULL:
            beta[:, :] = np.reshape(solution, (self.n + 1, self.m + 1))
        else:
            beta[1 : self.n, 1 : self.m] = np.reshape(solution, (self.n - 1, self.m - 1))
        return beta


@dataclass
class LinearSystem:
    """Dense square collocation system A b = c with per-row provenance labels."""

    matrix: np.ndarray
    rhs: np.ndarray
    row_labels: list[str]


def _validate(problem: EllipticProblem, grid: CollocationGrid):
    regime = problem.boundary.regime
    op = problem.operator
    n, m = grid.degree_x, grid.degree_y
    biharmonic_regime = regime in (
        BoundaryRegime.BIHARMONIC_TYPE1,
        BoundaryRegime.BIHARMONIC_TYPE2,
    )
    if biharmonic_regime:
        if op.max_order != 4:
            raise ValueError(
                f"{regime.value} boundary conditions need a fourth-order operator, "
                f"got maximum order {op.max_order}"
            )
        if n < 4 or m < 4:
            raise ValueError(
                f"biharmonic problems need degrees n, m >= 4, got ({n}, {m})"
            )
    else:
        if op.max_order > 2:
            raise ValueError(
                f"{regime.value} boundary conditions support operators up to "
                f"second order, got order {op.max_order}"
            )
        if n < 2 or m < 2:
            raise ValueError(
                f"second-order problems need degrees n, m >= 2, got ({n}, {m})"
            )
    if op.max_order_x > n or op.max_order_y > m:
        raise ValueError(
            f"operator orders ({op.max_order_x}, {op.max_order_y}) exceed "
            f"degrees ({n}, {m})"
        )


def _derivative_tables(basis: BernsteinBasis, nodes: np.ndarray, orders: set[int]):
    return {
        p: np.vstack([derivative_values(basis, p, x) for x in nodes]) for p in orders
    }


def _dirichlet_edge(i: int, j: int, n: int, m: int) -> Edge:
    # edge precedence at corners: left, bottom, right, top
    if i == 0:
        return Edge.LEFT
    if j == 0:
        return Edge.BOTTOM
    if i == n:
        return Edge.RIGHT
    return Edge.TOP


def assemble(problem: EllipticProblem, grid: CollocationGrid) -> tuple[LinearSystem, IndexMap]:
    """Build the collocation system for one solve.

    Homogeneous Dirichlet: interior collocation nodes only, operator rows over
    the interior basis pairs, rhs = source at the node.

    Non-homogeneous: full index map; interior nodes carry operator rows over
    all basis pairs, edge and corner nodes carry Dirichlet rows
    B_k(x) B_l(y) with rhs = boundary data at the node. With degrees (n, m)
    that is 2(n+m) boundary rows, corners included.

    Biharmonic type II: as non-homogeneous for the boundary ring, but the ring
    of interior nodes immediately adjacent to an edge trades its operator row
    for the Neumann condition evaluated at the nearest boundary point, using
    the outward normal derivative of that edge. Corner-adjacent diagonal nodes
    are adjacent to two edges and take the left/right edge's row; no Neumann
    row is ever written at a corner point.

    Biharmonic type I is solved as two coupled Poisson problems and cannot be
    assembled as a single system; see solve_problem.
    """
    _validate(problem, grid)
    regime = problem.boundary.regime
    if regime is BoundaryRegime.BIHARMONIC_TYPE1:
        raise ValueError(
            "type I biharmonic problems are solved as two coupled Poisson "
            "solves; assemble the problems from type1_first_problem and "
            "type1_second_problem instead"
        )
    n, m = grid.degree_x, grid.degree_y
    ix, iy = problem.domain
    bx = BernsteinBasis(n, ix)
    by = BernsteinBasis(m, iy)
    terms = problem.operator.terms
    x_orders = {0} | {t.order.p for t in terms}
    y_orders = {0} | {t.order.q for t in terms}
    if regime is BoundaryRegime.BIHARMONIC_TYPE2:
        x_orders.add(1)
        y_orders.add(1)
    dx = _derivative_tables(bx, grid.nodes_x, x_orders)
    dy = _derivative_tables(by, grid.nodes_y, y_orders)
    xs, ys = grid.nodes_x, grid.nodes_y

    def operator_row(i: int, j: int, x: float, y: float, sl_x, sl_y) -> np.ndarray:
        row = np.zeros((sl_x.stop - sl_x.start, sl_y.stop - sl_y.start))
        for t in terms:
            c = t.coefficient(x, y)
            if c != 0.0:
                row += c * np.outer(dx[t.order.p][i, sl_x], dy[t.order.q][j, sl_y])
        return row

    if regime is BoundaryRegime.HOMOGENEOUS_DIRICHLET:
        imap = IndexMap(IndexMode.INTERIOR_ONLY, n, m)
        size = imap.size
        a = np.zeros((size, size))
        c = np.zeros(size)
        labels = [""] * size
        sl_x, sl_y = slice(1, n), slice(1, m)
        for i in range(1, n):
            for j in range(1, m):
                r = imap.flat(i, j)
                a[r, :] = operator_row(i, j, xs[i], ys[j], sl_x, sl_y).ravel()
                c[r] = problem.source(xs[i], ys[j])
                labels[r] = f"operator@({i},{j})"
        return LinearSystem(a, c, labels), imap

    imap = IndexMap(IndexMode.FULL, n, m)
    size = imap.size
    a = np.zeros((size, size))
    c = np.zeros(size)
    labels = [""] * size
    sl_x, sl_y = slice(0, n + 1), slice(0, m + 1)
    boundary = problem.boundary
    type2 = regime is BoundaryRegime.BIHARMONIC_TYPE2
    for i in range(n + 1):
        for j in range(m + 1):
            r = imap.flat(i, j)
            kind, _ = grid.node_kind(i, j)
            if kind is not NodeKind.INTERIOR:
                edge = _dirichlet_edge(i, j, n, m)
                a[r, :] = np.outer(dx[0][i], dy[0][j]).ravel()
                c[r] = boundary.value.on(edge)(xs[i], ys[j])
                labels[r] = f"dirichlet[{edge.value}]@({i},{j})"
                continue
            if type2 and (i in (1, n - 1) or j in (1, m - 1)):
                # Neumann condition at the nearest boundary point, outward normal
                if i == 1:
                    edge, row, bp = Edge.LEFT, np.outer(-dx[1][0], dy[0][j]), (xs[0], ys[j])
                elif i == n - 1:
                    edge, row, bp = Edge.RIGHT, np.outer(dx[1][n], dy[0][j]), (xs[n], ys[j])
                elif j == 1:
                    edge, row, bp = Edge.BOTTOM, np.outer(dx[0][i], -dy[1][0]), (xs[i], ys[0])
                else:
                    edge, row, bp = Edge.TOP, np.outer(dx[0][i], dy[1][m]), (xs[i], ys[m])
                a[r, :] = row.ravel()
                c[r] = boundary.normal.on(edge)(*bp)
                labels[r] = f"neumann[{edge.value}]@({i},{j})"
                continue
            a[r, :] = operator_row(i, j, xs[i], ys[j], sl_x, sl_y).ravel()
            c[r] = problem.source(xs[i], ys[j])
            labels[r] = f"operator@({i},{j})"
    return LinearSystem(a, c, labels), imap


@dataclass(frozen=True)
class SolveStage:
    """Diagnostics of one linear solve within a problem solution."""

    label: str
    size: int
    residual_inf: float
    rhs_norm_inf: float
    condition: float


@dataclass(frozen=True)
class SolveResult:
    expansion: TensorExpansion
    stages: tuple[SolveStage, ...]

    @property
    def system_size(self) -> int:
        return max(s.size for s in self.stages)

    @property
    def residual_inf(self) -> float:
        return max(s.residual_inf for s in self.stages)

    @property
    def condition(self) -> float:
        return max(s.condition for s in self.stages)


def type1_first_problem(problem: EllipticProblem) -> EllipticProblem:
    """First half of the type I split: Delta v = f with v = d2u/dn2 data."""
    if problem.boundary.regime is not BoundaryRegime.BIHARMONIC_TYPE1:
        raise ValueError("type1 split applies to biharmonic type I problems only")
    return EllipticProblem(
        domain=problem.domain,
        operator=laplacian_operator(),
        source=problem.source,
        boundary=BoundarySpec.dirichlet(problem.boundary.second_normal),
    )


def type1_second_problem(problem: EllipticProblem, v: TensorExpansion) -> EllipticProblem:
    """Second half of the type I split: Delta u = v with u's Dirichlet data.

    The first solve's expansion is evaluated directly as the source, so the
    composition adds no extra approximation step.
    """
    if problem.boundary.regime is not BoundaryRegime.BIHARMONIC_TYPE1:
        raise ValueError("type1 split applies to biharmonic type I problems only")
    return EllipticProblem(
        domain=problem.domain,
        operator=laplacian_operator(),
        source=lambda x, y: v.eval(x, y),
        boundary=BoundarySpec.dirichlet(problem.boundary.value),
    )


def _solve_assembled(problem: EllipticProblem, grid: CollocationGrid, label: str):
    system, imap = assemble(problem, grid)
    a = system.matrix
    norm1 = float(np.max(np.sum(np.abs(a), axis=0)))
    # pivot_tolerance=0.0: past the conditioning turnaround the late pivots
    # fall many orders below the matrix norm yet the solve must still run
    factors = lu_factor(a, pivot_tolerance=0.0)
    b = lu_solve(factors, system.rhs)
    residual = float(np.max(np.abs(a @ b - system.rhs)))
    condition = max(1.0, norm1 * _inverse_norm1_estimate(factors))
    ix, iy = problem.domain
    expansion = TensorExpansion(
        BernsteinBasis(grid.degree_x, ix),
        BernsteinBasis(grid.degree_y, iy),
        imap.scatter(b),
    )
    stage = SolveStage(
        label=label,
        size=imap.size,
        residual_inf=residual,
        rhs_norm_inf=float(np.max(np.abs(system.rhs))),
        condition=condition,
    )
    return expansion, stage


def solve_problem_detailed(problem: EllipticProblem, grid: CollocationGrid) -> SolveResult:
    """Solve and report per-stage diagnostics (size, residual, condition)."""
    _validate(problem, grid)
    if problem.boundary.regime is BoundaryRegime.BIHARMONIC_TYPE1:
        v, stage1 = _solve_assembled(type1_first_problem(problem), grid, "poisson-split-1")
        u, stage2 = _solve_assembled(type1_second_problem(problem, v), grid, "poisson-split-2")
        return SolveResult(expansion=u, stages=(stage1, stage2))
    expansion, stage = _solve_assembled(problem, grid, "collocation")
    return SolveResult(expansion=expansion, stages=(stage,))


def solve_problem(problem: EllipticProblem, grid: CollocationGrid) -> TensorExpansion:
    """Assemble, LU-solve, and scatter the solution into a tensor expansion."""
    return solve_problem_detailed(problem, grid).expansion
