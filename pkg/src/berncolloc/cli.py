"""Command line front end: solve, converge, and selftest.

Output files are byte-identical across runs with the same configuration.
Wall-clock timings are therefore printed to the summary only, unless the
explicitly nondeterministic --timings flag asks for a seconds column.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    SolveReport,
    consistency_sweep,
    convergence_sweep,
    solve_report,
)
from .assembly import GridDistribution
from .errors import ProblemFileError, SingularMatrixError
from .problemfile import load_problem
from .problems import CATALOG_IDS, EllipticProblem, catalog_example
from .selftest import FAULT_MODES, run_selftest
from .surface import eval_grid

__all__ = ["RunConfig", "cmd_solve", "cmd_converge", "cmd_selftest", "main", "entry"]

_FLOAT_FMT = "{:.17g}"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PARSE = 3


@dataclass
class RunConfig:
    """Everything one command invocation needs."""

    command: str
    example: str | None = None
    problem_path: str | None = None
    n: int | None = None
    m: int | None = None
    grid: GridDistribution = GridDistribution.UNIFORM
    orders: list[int] = field(default_factory=list)
    out: str | None = None
    fmt: str = "csv"
    probe: int = 41
    figures: bool = True
    timings: bool = False
    inject_fault: str | None = None


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2 for
    # numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="berncolloc",
        description=(
            "Collocation solver for 2D linear elliptic problems using "
            "tensor-product Bernstein polynomial expansions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_source(p):
        p.add_argument("--example", help=f"built-in example id ({', '.join(CATALOG_IDS)})")
        p.add_argument("--problem", dest="problem_path", help="path to a problem file")

    def add_common(p):
        p.add_argument(
            "--grid",
            choices=["uniform", "chebyshev"],
            default="uniform",
            help="collocation point distribution (default: uniform)",
        )
        p.add_argument("--out", help="output file path (default: stdout)")
        p.add_argument(
            "--format",
            dest="fmt",
            choices=["csv", "json"],
            default="csv",
            help="output format (default: csv)",
        )
        p.add_argument(
            "--no-figures",
            dest="figures",
            action="store_false",
            help="skip rendering PNG figures next to --out",
        )
        p.add_argument(
            "--timings",
            action="store_true",
            help="add a wall-clock seconds column (not deterministic)",
        )

    ps = sub.add_parser("solve", help="solve one problem at a fixed order")
    add_problem_source(ps)
    ps.add_argument("--n", type=int, required=True, help="polynomial order in x")
    ps.add_argument("--m", type=int, help="polynomial order in y (default: n)")
    ps.add_argument(
        "--probe",
        type=int,
        default=41,
        help="probe-grid resolution per axis for the solution export (default: 41)",
    )
    add_common(ps)

    pc = sub.add_parser("converge", help="sweep polynomial orders and tabulate errors")
    add_problem_source(pc)
    pc.add_argument(
        "--orders",
        required=True,
        help="comma-separated strictly increasing polynomial orders, e.g. 11,13,15",
    )
    add_common(pc)

    pt = sub.add_parser("selftest", help="run the built-in invariant checks")
    pt.add_argument("--inject-fault", choices=list(FAULT_MODES), help=argparse.SUPPRESS)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command in ("solve", "converge"):
        cfg.example = args.example
        cfg.problem_path = args.problem_path
        cfg.grid = (
            GridDistribution.UNIFORM
            if args.grid == "uniform"
            else GridDistribution.CHEBYSHEV_LOBATTO
        )
        cfg.out = args.out
        cfg.fmt = args.fmt
        cfg.figures = args.figures
        cfg.timings = args.timings
    if args.command == "solve":
        cfg.n = args.n
        cfg.m = args.m
        if args.probe < 1:
            raise ValueError(f"--probe must be >= 1, got {args.probe}")
        cfg.probe = args.probe
    if args.command == "converge":
        try:
            cfg.orders = [int(part) for part in args.orders.split(",") if part.strip()]
        except ValueError:
            raise ValueError(f"--orders must be a comma-separated integer list, got {args.orders!r}")
    if args.command == "selftest":
        cfg.inject_fault = args.inject_fault
    return cfg


def _resolve_problem(config: RunConfig) -> EllipticProblem:
    if (config.example is None) == (config.problem_path is None):
        raise ValueError("exactly one of --example or --problem is required")
    if config.example is not None:
        return catalog_example(config.example)
    return load_problem(config.problem_path)


def _fmt(value: float) -> str:
    return _FLOAT_FMT.format(float(value))


def _write_csv(path: str | None, header: list[str], rows: list[list[float]]):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _write_json(path: str | None, summary: dict, header: list[str], rows: list[list[float]]):
    payload = {"summary": summary, "columns": header, "rows": rows}
    text = json.dumps(payload, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _print_summary(summary: dict, to_stderr: bool):
    stream = sys.stderr if to_stderr else sys.stdout
    for key, value in summary.items():
        shown = _fmt(value) if isinstance(value, float) else value
        print(f"{key} = {shown}", file=stream)


def _probe_axes(problem: EllipticProblem, per_axis: int):
    ix, iy = problem.domain
    return np.linspace(ix.a, ix.b, per_axis), np.linspace(iy.a, iy.b, per_axis)


def _solve_rows(problem: EllipticProblem, report: SolveReport, per_axis: int):
    xs, ys = _probe_axes(problem, per_axis)
    values = eval_grid(report.expansion, xs, ys)
    header = ["x", "y", "u_numeric"]
    if problem.exact is not None:
        header += ["u_exact", "abs_err"]
    rows = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            row = [float(x), float(y), float(values[i, j])]
            if problem.exact is not None:
                ue = problem.exact(x, y)
                row += [float(ue), abs(values[i, j] - ue)]
            rows.append(row)
    return header, rows, xs, ys, values


def cmd_solve(config: RunConfig) -> int:
    problem = _resolve_problem(config)
    report = solve_report(problem, config.n, config.m, config.grid)
    header, rows, xs, ys, values = _solve_rows(problem, report, config.probe)
    summary = {
        "command": "solve",
        "n": report.degree_x,
        "m": report.degree_y,
        "grid": config.grid.value,
        "system_size": report.system_size,
        "condition_estimate": report.condition,
        "residual_inf": report.residual_inf,
    }
    if report.l2_rel_error is not None:
        summary["l2_rel_error"] = report.l2_rel_error

    json_summary = dict(summary)
    if config.timings:
        json_summary["seconds"] = report.seconds
    summary["seconds"] = f"{report.seconds:.3f}"
    if config.fmt == "csv":
        _write_csv(config.out, header, rows)
    else:
        _write_json(config.out, json_summary, header, rows)
    _print_summary(summary, to_stderr=config.out is None)

    if config.out is not None and config.figures:
        from . import figures

        stem = Path(config.out)
        figures.save_surface(
            stem.with_name(stem.stem + "_solution.png"),
            xs,
            ys,
            values,
            title=f"numerical solution (n={report.degree_x}, m={report.degree_y})",
        )
        if report.abs_error is not None:
            figures.save_surface(
                stem.with_name(stem.stem + "_abs_error.png"),
                report.grid.nodes_x,
                report.grid.nodes_y,
                report.abs_error,
                title=f"absolute nodal error (n={report.degree_x}, m={report.degree_y})",
                zlabel="|u - u_exact|",
            )
    return EXIT_OK


def cmd_converge(config: RunConfig) -> int:
    problem = _resolve_problem(config)
    start = time.perf_counter()
    if problem.exact is not None:
        table = convergence_sweep(problem, config.orders, config.grid)
    else:
        table = consistency_sweep(problem, config.orders, config.grid)
    total_seconds = time.perf_counter() - start

    metric = "l2_rel_error" if table.metric == "l2_rel_error" else "self_consistency"
    header = ["n", metric, "cond_estimate"]
    rows = [[float(r.order), r.error, r.condition] for r in table.rows]
    if config.timings:
        header.append("seconds")
        for row, r in zip(rows, table.rows):
            row.append(r.seconds)
    summary = {
        "command": "converge",
        "metric": metric,
        "orders": ",".join(str(r.order) for r in table.rows),
        "grid": config.grid.value,
    }
    json_summary = dict(summary)
    if config.timings:
        json_summary["seconds"] = total_seconds
    summary["seconds"] = f"{total_seconds:.3f}"
    if config.fmt == "csv":
        _write_csv(config.out, header, rows)
    else:
        _write_json(config.out, json_summary, header, rows)
    _print_summary(summary, to_stderr=config.out is None)

    if config.out is not None and config.figures:
        from . import figures

        stem = Path(config.out)
        figures.save_convergence(
            stem.with_name(stem.stem + "_convergence.png"),
            table.orders(),
            table.errors(),
            metric,
        )
    return EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    start = time.perf_counter()
    results = run_selftest(fault=config.inject_fault)
    seconds = time.perf_counter() - start
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
    failures = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failures)}/{len(results)} checks passed in {seconds:.1f}s")
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config_from_args(args)
        if config.command == "solve":
            return cmd_solve(config)
        if config.command == "converge":
            return cmd_converge(config)
        return cmd_selftest(config)
    except ProblemFileError as exc:
        print(f"berncolloc: problem file error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SingularMatrixError as exc:
        print(f"berncolloc: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ZeroDivisionError, FloatingPointError) as exc:
        print(f"berncolloc: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"berncolloc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():  # console script hook
    raise SystemExit(main())
