"""Flat key-value problem files for the command line.

One "key = value" assignment per line; blank lines and '#' comments are
ignored. Values for f, g, gn, g2, exact, and lambda are expressions in x and
y (see expressions). Example:

    # Poisson with manufactured solution
    x1 = 0
    x2 = 1
    y1 = 0
    y2 = 1
    operator = laplacian
    bc = dirichlet
    f = 6*x*y*(1-y) - 2*x^3
    g = y*(1-y)*x^3
    exact = y*(1-y)*x^3

Keys:
    x1 x2 y1 y2   domain bounds (constant expressions, e.g. -pi)
    operator      laplacian | helmholtz | biharmonic
    lambda        zeroth-order coefficient, helmholtz only (default 1)
    bc            dirichlet | dirichlet-homogeneous | biharmonic-type1
                  | biharmonic-type2
    f             source term (required)
    g             Dirichlet data for u (default 0); per-edge overrides
                  g_left g_right g_bottom g_top
    g2            d2u/dn2 data, biharmonic-type1 only (default 0, per-edge
                  overrides g2_left ...)
    gn            du/dn data (outward normal), biharmonic-type2 only
                  (default 0, per-edge overrides gn_left ...)
    exact         exact solution, optional
"""

from __future__ import annotations

from pathlib import Path

from .basis import Interval
from .errors import ProblemFileError
from .expressions import ExpressionError, parse_expression
from .problems import (
    BoundaryRegime,
    BoundarySpec,
    EdgeData,
    EllipticProblem,
    biharmonic_operator,
    helmholtz_operator,
    laplacian_operator,
)

__all__ = ["parse_problem", "load_problem"]

_OPERATORS = ("laplacian", "helmholtz", "biharmonic")
_BC_KINDS = ("dirichlet", "dirichlet-homogeneous", "biharmonic-type1", "biharmonic-type2")
_EDGES = ("left", "right", "bottom", "top")
_KNOWN_KEYS = (
    {"x1", "x2", "y1", "y2", "operator", "lambda", "bc", "f", "exact"}
    | {"g", "gn", "g2"}
    | {f"{base}_{edge}" for base in ("g", "gn", "g2") for edge in _EDGES}
)


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemFileError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ProblemFileError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        yield lineno, key, value


def _parse_entries(text: str) -> dict[str, tuple[int, str]]:
    entries: dict[str, tuple[int, str]] = {}
    for lineno, key, value in _split_lines(text):
        if key not in _KNOWN_KEYS:
            raise ProblemFileError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ProblemFileError(
                f"duplicate key {key!r} (first set on line {entries[key][0]})", lineno
            )
        entries[key] = (lineno, value)
    return entries


def _expression(entries, key: str):
    lineno, value = entries[key]
    try:
        return parse_expression(value)
    except ExpressionError as exc:
        raise ProblemFileError(f"{key}: {exc}", lineno) from None


def _constant(entries, key: str) -> float:
    lineno, _ = entries[key]
    expr = _expression(entries, key)
    if expr.variables:
        raise ProblemFileError(f"{key} must be constant, found variables {sorted(expr.variables)}", lineno)
    return expr(0.0, 0.0)


def _edge_data(entries, base: str) -> EdgeData:
    default = _expression(entries, base) if base in entries else parse_expression("0")
    funcs = {}
    for edge in _EDGES:
        key = f"{base}_{edge}"
        funcs[edge] = _expression(entries, key) if key in entries else default
    return EdgeData(**funcs)


def _forbid(entries, keys, reason: str):
    for key in keys:
        if key in entries:
            raise ProblemFileError(f"key {key!r} is only valid {reason}", entries[key][0])


def parse_problem(text: str) -> EllipticProblem:
    """Parse problem-file text into an EllipticProblem."""
    entries = _parse_entries(text)
    for key in ("x1", "x2", "y1", "y2", "operator", "bc", "f"):
        if key not in entries:
            raise ProblemFileError(f"missing required key {key!r}")

    x1, x2 = _constant(entries, "x1"), _constant(entries, "x2")
    y1, y2 = _constant(entries, "y1"), _constant(entries, "y2")
    try:
        domain = (Interval(x1, x2), Interval(y1, y2))
    except ValueError as exc:
        raise ProblemFileError(str(exc), entries["x1"][0]) from None

    op_line, op_name = entries["operator"]
    if op_name not in _OPERATORS:
        raise ProblemFileError(
            f"unknown operator {op_name!r}; valid: {', '.join(_OPERATORS)}", op_line
        )
    if op_name == "helmholtz":
        shift = _expression(entries, "lambda") if "lambda" in entries else parse_expression("1")
        operator = helmholtz_operator(shift)
    else:
        _forbid(entries, ["lambda"], "with operator = helmholtz")
        operator = laplacian_operator() if op_name == "laplacian" else biharmonic_operator()

    bc_line, bc_name = entries["bc"]
    if bc_name not in _BC_KINDS:
        raise ProblemFileError(
            f"unknown bc {bc_name!r}; valid: {', '.join(_BC_KINDS)}", bc_line
        )
    gn_keys = ["gn"] + [f"gn_{e}" for e in _EDGES]
    g2_keys = ["g2"] + [f"g2_{e}" for e in _EDGES]
    if bc_name == "dirichlet-homogeneous":
        _forbid(entries, ["g"] + [f"g_{e}" for e in _EDGES], "with non-homogeneous bc")
        _forbid(entries, gn_keys, "with bc = biharmonic-type2")
        _forbid(entries, g2_keys, "with bc = biharmonic-type1")
        boundary = BoundarySpec.homogeneous_dirichlet()
    elif bc_name == "dirichlet":
        _forbid(entries, gn_keys, "with bc = biharmonic-type2")
        _forbid(entries, g2_keys, "with bc = biharmonic-type1")
        boundary = BoundarySpec.dirichlet(_edge_data(entries, "g"))
    elif bc_name == "biharmonic-type1":
        _forbid(entries, gn_keys, "with bc = biharmonic-type2")
        boundary = BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE1,
            value=_edge_data(entries, "g"),
            second_normal=_edge_data(entries, "g2"),
        )
    else:
        _forbid(entries, g2_keys, "with bc = biharmonic-type1")
        boundary = BoundarySpec(
            BoundaryRegime.BIHARMONIC_TYPE2,
            value=_edge_data(entries, "g"),
            normal=_edge_data(entries, "gn"),
        )

    source = _expression(entries, "f")
    exact = _expression(entries, "exact") if "exact" in entries else None
    return EllipticProblem(
        domain=domain,
        operator=operator,
        source=source,
        boundary=boundary,
        exact=exact,
    )


def load_problem(path: str | Path) -> EllipticProblem:
    """Read and parse a problem file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_problem(text)
