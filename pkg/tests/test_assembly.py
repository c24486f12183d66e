import dataclasses
import math

import numpy as np
import pytest

from berncolloc.assembly import (
    CollocationGrid,
    GridDistribution,
    IndexMap,
    IndexMode,
    NodeKind,
    assemble,
    make_grid,
    solve_problem,
    solve_problem_detailed,
    type1_first_problem,
    type1_second_problem,
)
from berncolloc.basis import Interval
from berncolloc.problems import (
    BoundaryRegime,
    BoundarySpec,
    EdgeData,
    EllipticProblem,
    biharmonic_operator,
    catalog_example,
    laplacian_operator,
)
from berncolloc.surface import eval_grid

UNIT = (Interval(0.0, 1.0), Interval(0.0, 1.0))


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


def test_uniform_nodes():
    grid = make_grid(2, 2, UNIT)
    np.testing.assert_allclose(grid.nodes_x, [0.0, 0.5, 1.0], atol=0)
    assert grid.nodes_x[0] == 0.0 and grid.nodes_x[-1] == 1.0


def test_chebyshev_lobatto_nodes():
    domain = (Interval(-1.0, 1.0), Interval(-1.0, 1.0))
    grid = make_grid(2, 2, domain, GridDistribution.CHEBYSHEV_LOBATTO)
    np.testing.assert_allclose(grid.nodes_x, [-1.0, 0.0, 1.0], atol=1e-16)
    fine = make_grid(9, 9, domain, GridDistribution.CHEBYSHEV_LOBATTO)
    assert np.all(np.diff(fine.nodes_x) > 0)
    assert fine.nodes_x[0] == -1.0 and fine.nodes_x[-1] == 1.0


def test_grid_classification_counts():
    grid = make_grid(3, 3, UNIT)
    counts = grid.counts()
    assert counts[NodeKind.INTERIOR] == 4
    assert counts[NodeKind.EDGE] == 8
    assert counts[NodeKind.CORNER] == 4
    tallied = {NodeKind.INTERIOR: 0, NodeKind.EDGE: 0, NodeKind.CORNER: 0}
    for i in range(4):
        for j in range(4):
            kind, _ = grid.node_kind(i, j)
            tallied[kind] += 1
    assert tallied == counts


def test_grid_edge_sides():
    from berncolloc.problems import Edge

    grid = make_grid(4, 4, UNIT)
    assert grid.node_kind(0, 2) == (NodeKind.EDGE, Edge.LEFT)
    assert grid.node_kind(4, 1) == (NodeKind.EDGE, Edge.RIGHT)
    assert grid.node_kind(2, 0) == (NodeKind.EDGE, Edge.BOTTOM)
    assert grid.node_kind(3, 4) == (NodeKind.EDGE, Edge.TOP)
    assert grid.node_kind(0, 0) == (NodeKind.CORNER, None)
    assert grid.node_kind(2, 2) == (NodeKind.INTERIOR, None)


def test_make_grid_degree_guard():
    with pytest.raises(ValueError, match=">= 2"):
        make_grid(1, 4, UNIT)


# ---------------------------------------------------------------------------
# index maps
# ---------------------------------------------------------------------------


def test_full_map_is_a_bijection():
    imap = IndexMap(IndexMode.FULL, 3, 4)
    assert imap.size == 20
    seen = set()
    for i in range(4):
        for j in range(5):
            flat = imap.flat(i, j)
            assert imap.pair(flat) == (i, j)
            seen.add(flat)
    assert seen == set(range(20))


def test_interior_map_is_a_bijection():
    imap = IndexMap(IndexMode.INTERIOR_ONLY, 5, 4)
    assert imap.size == 12
    seen = set()
    for i in range(1, 5):
        for j in range(1, 4):
            flat = imap.flat(i, j)
            assert imap.pair(flat) == (i, j)
            seen.add(flat)
    assert seen == set(range(12))
    with pytest.raises(ValueError):
        imap.flat(0, 1)


def test_scatter_zeroes_eliminated_coefficients():
    imap = IndexMap(IndexMode.INTERIOR_ONLY, 3, 3)
    beta = imap.scatter(np.arange(1.0, 5.0))
    assert beta.shape == (4, 4)
    assert np.all(beta[0, :] == 0) and np.all(beta[:, 0] == 0)
    assert np.all(beta[3, :] == 0) and np.all(beta[:, 3] == 0)
    np.testing.assert_array_equal(beta[1:3, 1:3], [[1.0, 2.0], [3.0, 4.0]])


# ---------------------------------------------------------------------------
# assembly structure
# ---------------------------------------------------------------------------


def test_example1_system_size():
    problem = catalog_example(1)
    system, imap = assemble(problem, make_grid(4, 4, problem.domain))
    assert system.matrix.shape == (9, 9)
    assert imap.size == 9
    assert all(label.startswith("operator@") for label in system.row_labels)


def test_example2_system_size_and_boundary_rows():
    problem = catalog_example(2)
    system, imap = assemble(problem, make_grid(4, 4, problem.domain))
    assert system.matrix.shape == (25, 25)
    boundary_rows = [label for label in system.row_labels if label.startswith("dirichlet")]
    assert len(boundary_rows) == 16  # 2(n+m), corners included


@pytest.mark.parametrize("n", [5, 8, 11])
def test_full_mode_row_accounting(n):
    problem = catalog_example(3)
    system, imap = assemble(problem, make_grid(n, n, problem.domain))
    ops = sum(1 for label in system.row_labels if label.startswith("operator"))
    bcs = sum(1 for label in system.row_labels if label.startswith("dirichlet"))
    assert ops + bcs == (n + 1) * (n + 1)
    assert bcs == 2 * (n + n)


def test_example5a_row_partition_matches_enumeration():
    # independent enumeration of the type II row layout at n = m = 6
    problem = catalog_example("5a")
    n = m = 6
    expected = {"dirichlet": 0, "neumann": 0, "operator": 0}
    for i in range(n + 1):
        for j in range(m + 1):
            if i in (0, n) or j in (0, m):
                expected["dirichlet"] += 1
            elif i in (1, n - 1) or j in (1, m - 1):
                expected["neumann"] += 1
            else:
                expected["operator"] += 1
    assert expected == {"dirichlet": 24, "neumann": 16, "operator": 9}

    system, _ = assemble(problem, make_grid(n, m, problem.domain))
    counted = {"dirichlet": 0, "neumann": 0, "operator": 0}
    for label in system.row_labels:
        counted[label.split("[")[0].split("@")[0]] += 1
    assert counted == expected


def test_type2_neumann_rows_skip_corner_points():
    problem = catalog_example("5a")
    system, _ = assemble(problem, make_grid(6, 6, problem.domain))
    neumann = [label for label in system.row_labels if label.startswith("neumann")]
    # corner-adjacent diagonals take the left/right edge row
    assert "neumann[left]@(1,1)" in neumann
    assert "neumann[left]@(1,5)" in neumann
    assert "neumann[right]@(5,1)" in neumann
    assert "neumann[right]@(5,5)" in neumann
    assert sum(1 for lab in neumann if "[left]" in lab) == 5
    assert sum(1 for lab in neumann if "[bottom]" in lab) == 3


def test_type1_cannot_be_assembled_directly():
    problem = catalog_example(4)
    with pytest.raises(ValueError, match="coupled"):
        assemble(problem, make_grid(6, 6, problem.domain))


def test_regime_operator_mismatch_rejected():
    bad_type2 = EllipticProblem(
        domain=UNIT,
        operator=laplacian_operator(),
        source=lambda x, y: 0.0,
        boundary=BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE2, EdgeData.zero(), normal=EdgeData.zero()
        ),
    )
    with pytest.raises(ValueError, match="fourth-order"):
        assemble(bad_type2, make_grid(6, 6, UNIT))

    bad_dirichlet = EllipticProblem(
        domain=UNIT,
        operator=biharmonic_operator(),
        source=lambda x, y: 0.0,
        boundary=BoundarySpec.homogeneous_dirichlet(),
    )
    with pytest.raises(ValueError, match="second order"):
        assemble(bad_dirichlet, make_grid(6, 6, UNIT))


def test_biharmonic_degree_floor():
    problem = catalog_example("5a")
    with pytest.raises(ValueError, match=">= 4"):
        solve_problem(problem, make_grid(3, 3, problem.domain))


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------


def test_zero_source_homogeneous_dirichlet_gives_zero():
    problem = EllipticProblem(
        domain=UNIT,
        operator=laplacian_operator(),
        source=lambda x, y: 0.0,
        boundary=BoundarySpec.homogeneous_dirichlet(),
    )
    expansion = solve_problem(problem, make_grid(8, 8, UNIT))
    assert np.max(np.abs(expansion.coefficients)) <= 1e-10


def test_example1_solution_error_at_order_11(ex1_l2_by_order):
    assert 1e-6 <= ex1_l2_by_order[11] <= 1e-4
    assert ex1_l2_by_order[11] == pytest.approx(1.171e-5, rel=0.05)


def test_example4_solution_error_at_order_10():
    problem = catalog_example(4)
    grid = make_grid(10, 10, problem.domain)
    expansion = solve_problem(problem, grid)
    exact = np.array(
        [[problem.exact(x, y) for y in grid.nodes_y] for x in grid.nodes_x]
    )
    numeric = eval_grid(expansion, grid.nodes_x, grid.nodes_y)
    l2 = math.sqrt(np.sum((numeric - exact) ** 2) / np.sum(exact**2))
    assert l2 == pytest.approx(6.538e-8, rel=0.25)


@pytest.mark.parametrize("example_id", ["1", "2", "3", "4", "5a", "5b"])
@pytest.mark.parametrize("n", [10, 16])
def test_residual_bound_across_catalog(example_id, n):
    problem = catalog_example(example_id)
    result = solve_problem_detailed(problem, make_grid(n, n, problem.domain))
    for stage in result.stages:
        assert stage.residual_inf <= 1e-8 * (1.0 + stage.rhs_norm_inf)


def test_polynomial_exactness_example2():
    problem = catalog_example(2)
    grid = make_grid(12, 12, problem.domain)
    expansion = solve_problem(problem, grid)
    numeric = eval_grid(expansion, grid.nodes_x, grid.nodes_y)
    for i, x in enumerate(grid.nodes_x):
        for j, y in enumerate(grid.nodes_y):
            assert abs(numeric[i, j] - problem.exact(x, y)) <= 1e-9


def test_polynomial_exactness_example5a():
    problem = catalog_example("5a")
    grid = make_grid(8, 8, problem.domain)
    expansion = solve_problem(problem, grid)
    numeric = eval_grid(expansion, grid.nodes_x, grid.nodes_y)
    for i, x in enumerate(grid.nodes_x):
        for j, y in enumerate(grid.nodes_y):
            assert abs(numeric[i, j] - problem.exact(x, y)) <= 1e-9


def test_homogeneous_elimination_matches_full_assembly():
    problem = catalog_example(1)
    full = dataclasses.replace(
        problem, boundary=BoundarySpec.dirichlet(problem.boundary.value)
    )
    grid = make_grid(10, 10, problem.domain)
    xs = np.linspace(-1, 1, 13)
    u_elim = eval_grid(solve_problem(problem, grid), xs, xs)
    u_full = eval_grid(solve_problem(full, grid), xs, xs)
    assert np.max(np.abs(u_elim - u_full)) <= 1e-8


def test_type1_split_problems():
    problem = catalog_example(4)
    grid = make_grid(8, 8, problem.domain)
    first = type1_first_problem(problem)
    assert first.boundary.regime is BoundaryRegime.NONHOMOGENEOUS
    assert first.operator.max_order == 2
    v = solve_problem(first, grid)
    # v approximates the laplacian of u: for u = sin sin it is -2 pi^2 u
    assert v.eval(0.5, 0.5) == pytest.approx(-2 * math.pi**2, rel=1e-4)
    second = type1_second_problem(problem, v)
    u = solve_problem(second, grid)
    assert u.eval(0.5, 0.5) == pytest.approx(1.0, rel=1e-5)
    with pytest.raises(ValueError):
        type1_first_problem(catalog_example(1))


def test_detailed_type1_reports_two_stages():
    problem = catalog_example(4)
    result = solve_problem_detailed(problem, make_grid(6, 6, problem.domain))
    assert len(result.stages) == 2
    assert result.system_size == 49


def test_chebyshev_grid_solves_example1():
    problem = catalog_example(1)
    grid = make_grid(12, 12, problem.domain, GridDistribution.CHEBYSHEV_LOBATTO)
    expansion = solve_problem(problem, grid)
    assert expansion.eval(0.5, 0.5) == pytest.approx(problem.exact(0.5, 0.5), abs=1e-6)


def test_anisotropic_degrees():
    problem = catalog_example(2)
    grid = make_grid(9, 6, problem.domain)
    expansion = solve_problem(problem, grid)
    assert expansion.coefficients.shape == (10, 7)
    assert expansion.eval(0.7, 0.3) == pytest.approx(problem.exact(0.7, 0.3), abs=1e-9)
