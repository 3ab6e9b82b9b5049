"""The `powerlog` sub-commands.

Every command takes the parsed arguments and the resolved run settings and
returns an `OutputTable`; `run` maps errors onto the exit-code contract.
"""

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Text

import numpy as np
import pandas as pd

from powerlog import prep
from powerlog.bounds import (
    BoundSide,
    TangentBoundProblem,
    monotone_p_bounds,
    tangent_bound,
)
from powerlog.cli.table import OutputTable
from powerlog.constants import (
    DEFAULT_CACHE_PATH,
    DEFAULT_FIGURE_ELL_MAX,
    DEFAULT_FIGURE_N_MAX,
    EXIT_GOLDEN_CHECK_FAILURE,
    EXIT_OK,
    EXIT_SOLVER_FAILURE,
    EXIT_USAGE,
    GOLDEN_TABLE1_FILE,
    NODES,
    Q_MAX,
    Q_MIN,
)
from powerlog.exceptions import (
    CacheFormatError,
    DatasetLookupError,
    DomainError,
    FileIOException,
    FileNotFoundException,
    GoldenCheckError,
    NumericalError,
    SolverError,
    YamlSyntaxException,
)
from powerlog.interp import (
    PDataset,
    approx_energy,
    build_p_dataset,
    interpolated_curve,
    p_interpolated,
    percentage_error,
    table1_rows,
)
from powerlog.potentials import PotentialSpec, QuantumNumbers, scale_eigenvalue
from powerlog.radial_solver import SolverConfig, solve_eigenvalue, solve_spectrum
from powerlog.storage import load_or_build_dataset, write_dataset
from powerlog.types import ConfigDict
from powerlog.utils import config_from_environment
from powerlog.version import __version__

logger = logging.getLogger(__name__)

GOLDEN_TABLE1_PATH = Path(__file__).parent.parent / "data" / GOLDEN_TABLE1_FILE

# absolute tolerances of the reference table comparison, per column
GOLDEN_TOLERANCES = {
    "P0": 2e-5,
    "P1": 2e-5,
    "E_approx_half": 2e-5,
    "E_exact_half": 2e-5,
    "pct_error": 3e-3,
}

TABLE1_FORMATS = {
    "P0": ".5f",
    "P1": ".5f",
    "E_approx_half": ".5f",
    "E_exact_half": ".5f",
    "pct_error": ".3f",
}


@dataclass(frozen=True)
class RunSettings:
    solver: SolverConfig
    workers: Optional[int]
    cache: Text


def settings_from_args(
    args: argparse.Namespace, file_config: Optional[ConfigDict] = None
) -> RunSettings:
    """Resolves flags > configuration file > defaults."""
    if file_config is None:
        file_config = config_from_environment()

    def pick(flag: Text, key: Text) -> Optional[object]:
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return file_config.get(key)  # type: ignore[misc]

    overrides = {
        field: value
        for field, value in (
            ("tolerance", pick("tol", "tolerance")),
            ("grid_points", pick("grid_points", "grid_points")),
            ("richardson", pick("richardson", "richardson")),
            ("r_max", pick("r_max", "r_max")),
            ("max_grid_points", file_config.get("max_grid_points")),
            ("tail_tolerance", file_config.get("tail_tolerance")),
        )
        if value is not None
    }
    return RunSettings(
        solver=SolverConfig(**overrides),  # type: ignore[arg-type]
        workers=pick("workers", "workers"),  # type: ignore[arg-type]
        cache=str(pick("cache", "cache") or DEFAULT_CACHE_PATH),
    )


def _bare_potential(args: argparse.Namespace) -> PotentialSpec:
    if args.kind == "power":
        if args.q is None:
            raise DomainError("--q is required with --kind power.")
        return PotentialSpec.power(args.q)
    if args.q is not None:
        raise DomainError("--q can not be combined with --kind log.")
    return PotentialSpec.log()


def _dataset(settings: RunSettings, n: int = 1, ell: int = 0) -> PDataset:
    return load_or_build_dataset(
        settings.cache,
        max(n, DEFAULT_FIGURE_N_MAX),
        max(ell, DEFAULT_FIGURE_ELL_MAX),
        settings.solver,
        settings.workers,
    )


def _q_grid(step: float, include_log: bool) -> List[float]:
    count = int(np.floor((Q_MAX - Q_MIN) / step + 1e-9))
    grid = np.round(Q_MIN + step * np.arange(count + 1), 10)
    if include_log:
        grid = np.union1d(grid, [0.0])
    else:
        grid = grid[np.abs(grid) >= step - 1e-12]
    return [float(q) for q in grid]


def cmd_solve(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    bare = _bare_potential(args)
    scaled = bare.with_scale(args.mu, args.v)
    result = solve_eigenvalue(bare, QuantumNumbers(args.n, args.ell), settings.solver)

    factor = scale_eigenvalue(scaled, 1.0) - scale_eigenvalue(scaled, 0.0)
    table = OutputTable(["n", "ell", "energy", "estimated_error"])
    table.add_row(
        args.n,
        args.ell,
        scale_eigenvalue(scaled, result.energy),
        abs(factor) * result.estimated_error,
    )
    return table


def check_table1(
    table: OutputTable, golden_path: Path = GOLDEN_TABLE1_PATH
) -> List[Text]:
    """Compares a recomputed reference table cell by cell; returns the failures."""
    golden = pd.read_csv(golden_path, comment="#")
    computed = table.to_frame()
    merged = golden.merge(computed, on=["n", "ell"], suffixes=("_ref", ""))

    failures = []
    if len(merged) != len(golden):
        missing = len(golden) - len(merged)
        failures.append(f"{missing} reference row(s) were not recomputed")
    for record in merged.to_dict("records"):
        for column, tolerance in GOLDEN_TOLERANCES.items():
            expected, actual = record[f"{column}_ref"], record[column]
            if not abs(actual - expected) <= tolerance:
                failures.append(
                    f"row ({record['n']},{record['ell']}) {column}: "
                    f"{actual:.6f} differs from {expected:.6f} by more than "
                    f"{tolerance:g}"
                )
    return failures


def cmd_table1(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    data = _dataset(settings)
    table = OutputTable(
        ["n", "ell", "P0", "P1", "E_approx_half", "E_exact_half", "pct_error"],
        formats=TABLE1_FORMATS,
    )
    for row in table1_rows(data, settings.solver, workers=settings.workers):
        table.add_row(
            row.n, row.ell, row.p0, row.p1, row.e_approx, row.e_exact, row.pct_error
        )

    if args.check:
        failures = check_table1(table)
        if failures:
            raise GoldenCheckError(failures, table)
        logger.info(f"All {len(table.rows)} rows agree with the reference table.")
    return table


def cmd_figure_data(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    energies = args.figure == 1
    q_values = _q_grid(args.q_grid_step, include_log=not energies)
    levels = [
        QuantumNumbers(n, ell)
        for ell in range(args.ell_max + 1)
        for n in range(1, args.n_max + 1)
    ]

    values: Dict[tuple, float] = {}
    if args.source == "interp":
        data = _dataset(settings, args.n_max, args.ell_max)
        for qn in levels:
            for q, p in interpolated_curve(qn, data, q_values):
                values[(qn.n, qn.ell, q)] = prep.energy_from_p(q, p) if energies else p
    else:
        for q in q_values:
            spectrum = solve_spectrum(
                PotentialSpec.from_exponent(q),
                args.n_max,
                args.ell_max,
                settings.solver,
                settings.workers,
            )
            for qn, result in spectrum:
                values[(qn.n, qn.ell, q)] = (
                    result.energy if energies else prep.p_from_energy(q, result.energy)
                )

    table = OutputTable(["n", "ell", "q", "value"])
    table.extend(
        [
            (qn.n, qn.ell, q, values[(qn.n, qn.ell, q)])
            for qn in levels
            for q in q_values
        ]
    )
    return table


def cmd_interp(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    if not Q_MIN <= args.q <= Q_MAX:
        raise DomainError(
            f"q={args.q} is outside the interpolation range [{Q_MIN:g}, {Q_MAX:g}]."
        )
    qn = QuantumNumbers(args.n, args.ell)
    data = _dataset(settings, args.n, args.ell)
    row = data.row(qn.n, qn.ell)
    if args.q in NODES:
        p = row.at_node(args.q)
    else:
        p = p_interpolated(row.coefficients(), args.q)
    e_approx = approx_energy(qn, args.q, data)

    columns = ["n", "ell", "q", "P_interp", "E_approx"]
    values = [qn.n, qn.ell, args.q, p, e_approx]
    if args.with_exact:
        exact = solve_eigenvalue(
            PotentialSpec.from_exponent(args.q), qn, settings.solver
        ).energy
        columns += ["E_exact", "pct_error"]
        values += [exact, percentage_error(e_approx, exact)]

    table = OutputTable(columns)
    table.add_row(*values)
    return table


def cmd_bounds(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    target = PotentialSpec.log() if args.log else PotentialSpec.from_exponent(args.q)
    qn = QuantumNumbers(args.n, args.ell)

    if args.method == "tangent":
        if args.base_q is None:
            raise DomainError("--base-q is required with --method tangent.")
        problem = TangentBoundProblem.create(
            PotentialSpec.from_exponent(args.base_q), target, args.side
        )
        value = tangent_bound(problem, qn, settings.solver)
        lower = value if problem.side != BoundSide.UPPER else None
        upper = value if problem.side != BoundSide.LOWER else None
    else:
        q_target = target.exponent
        needs_data = not args.exact_only and q_target not in (-1.0, 0.0, 2.0)
        data = _dataset(settings, args.n, args.ell) if needs_data else None
        lower, upper = monotone_p_bounds(q_target, qn, data, args.exact_only)

    columns = ["n", "ell", "target", "method", "lower", "upper"]
    values = [qn.n, qn.ell, target.label(), args.method, lower, upper]
    if args.with_exact:
        columns.append("exact")
        values.append(solve_eigenvalue(target, qn, settings.solver).energy)

    table = OutputTable(columns)
    table.add_row(*values)
    return table


def cmd_scale(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    spec = _bare_potential(args).with_scale(args.mu, args.v)
    table = OutputTable(["kind", "q", "mu", "v", "bare_energy", "energy"])
    table.add_row(
        spec.kind.value,
        spec.q,
        spec.mu,
        spec.v,
        float(args.e),
        scale_eigenvalue(spec, args.e),
    )
    return table


def cmd_build_cache(args: argparse.Namespace, settings: RunSettings) -> OutputTable:
    data = build_p_dataset(args.n_max, args.ell_max, settings.solver, settings.workers)
    header = write_dataset(data, settings.cache, settings.solver.cache_key())

    table = OutputTable(["cache", "n_max", "ell_max", "levels", "config"])
    table.add_row(
        settings.cache, header.n_max, header.ell_max, len(data), header.config
    )
    return table


COMMANDS: Dict[Text, Callable[[argparse.Namespace, RunSettings], OutputTable]] = {
    "solve": cmd_solve,
    "table1": cmd_table1,
    "figure-data": cmd_figure_data,
    "interp": cmd_interp,
    "bounds": cmd_bounds,
    "scale": cmd_scale,
    "build-cache": cmd_build_cache,
}

USAGE_ERRORS = (
    DomainError,
    DatasetLookupError,
    CacheFormatError,
    FileNotFoundException,
    FileIOException,
    YamlSyntaxException,
)


def run(args: argparse.Namespace) -> int:
    """Runs one sub-command, writes its table and returns the exit code."""
    try:
        settings = settings_from_args(args)
        table = COMMANDS[args.command](args, settings)
    except GoldenCheckError as e:
        for failure in e.failures:
            logger.error(failure)
        if e.table is not None:
            e.table.write(args.out, args.meta)
        return EXIT_GOLDEN_CHECK_FAILURE
    except USAGE_ERRORS as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (SolverError, NumericalError) as e:
        logger.error(f"Solver failure: {e}")
        return EXIT_SOLVER_FAILURE

    table.meta.update(
        {
            "powerlog": __version__,
            "command": args.command,
            "config": settings.solver.cache_key(),
        }
    )
    table.write(args.out, args.meta)
    return EXIT_OK
