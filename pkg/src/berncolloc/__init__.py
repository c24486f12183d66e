"""Point-collocation solver for 2D linear elliptic boundary value problems.

The unknown is a global expansion in a tensor product of Bernstein
polynomials defined over arbitrary rectangular domains. Supports Poisson,
Helmholtz, and biharmonic equations with Dirichlet and Neumann boundary
conditions, plus convergence and conditioning studies.
"""

from .analysis import (
    ConvergenceRow,
    ConvergenceTable,
    SolveReport,
    consistency_sweep,
    convergence_sweep,
    l2_relative_error,
    relative_squared_error,
    self_consistency,
    solve_report,
)
from .assembly import (
    CollocationGrid,
    GridDistribution,
    IndexMap,
    IndexMode,
    LinearSystem,
    NodeKind,
    SolveResult,
    SolveStage,
    assemble,
    make_grid,
    solve_problem,
    solve_problem_detailed,
    type1_first_problem,
    type1_second_problem,
)
from .basis import (
    BernsteinBasis,
    Interval,
    basis_values,
    binomial,
    derivative_values,
    eval_basis,
    eval_derivative,
    local_maximum,
)
from .errors import ProblemFileError, SingularMatrixError
from .linalg import LUFactors, condition_estimate, lu_factor, lu_solve
from .problemfile import load_problem, parse_problem
from .problems import (
    BoundaryRegime,
    BoundarySpec,
    ConditionKind,
    Edge,
    EdgeData,
    EllipticProblem,
    LinearOperator,
    OperatorTerm,
    biharmonic_operator,
    boundary_data_consistency,
    catalog_example,
    helmholtz_operator,
    laplacian_operator,
)
from .surface import DerivativeOrder, TensorExpansion, eval_grid

__version__ = "0.1.0"
