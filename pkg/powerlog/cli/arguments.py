import argparse

from powerlog.constants import (
    DEFAULT_FIGURE_ELL_MAX,
    DEFAULT_FIGURE_N_MAX,
    DEFAULT_Q_GRID_STEP,
    Q_MAX,
    Q_MIN,
)
from powerlog.potentials import PotentialKind


def exponent_arg(value):
    try:
        q = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not a number.")
    if not Q_MIN <= q <= Q_MAX:
        raise argparse.ArgumentTypeError(
            f"q={q:g} is outside the supported range [{Q_MIN:g}, {Q_MAX:g}]."
        )
    return q


def positive_float_arg(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not a number.")
    if not number > 0:
        raise argparse.ArgumentTypeError(f"{value} must be positive.")
    return number


def positive_int_arg(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer.")
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1.")
    return number


def non_negative_int_arg(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer.")
    if number < 0:
        raise argparse.ArgumentTypeError(f"{value} must not be negative.")
    return number


def add_solver_arguments(parser):
    # defaults stay None so that the configuration file can fill them in
    parser.add_argument(
        "--tol",
        type=positive_float_arg,
        default=None,
        help="target absolute eigenvalue accuracy (default 1e-6)",
    )
    parser.add_argument(
        "--grid-points",
        type=positive_int_arg,
        default=None,
        help="interior mesh points of the coarsest grid (default 4000)",
    )
    parser.add_argument(
        "--r-max",
        type=positive_float_arg,
        default=None,
        help="fixed outer cutoff; sized per level if omitted",
    )
    parser.add_argument(
        "--no-richardson",
        dest="richardson",
        action="store_const",
        const=False,
        default=None,
        help="disable extrapolation over halved grid steps",
    )
    parser.add_argument(
        "--workers",
        type=positive_int_arg,
        default=None,
        help="number of levels solved in parallel",
    )


def add_output_arguments(parser):
    parser.add_argument(
        "--out",
        default=None,
        help="write the CSV to this file instead of stdout",
    )
    parser.add_argument(
        "--meta",
        action="store_true",
        help="prefix the CSV with comment lines describing the run",
    )


def add_cache_arguments(parser):
    parser.add_argument(
        "--cache",
        default=None,
        help="location of the P dataset cache (default ./pdata.csv)",
    )


def add_level_arguments(parser):
    parser.add_argument("--n", type=positive_int_arg, required=True, help="n >= 1")
    parser.add_argument(
        "--ell", type=non_negative_int_arg, required=True, help="angular momentum"
    )


def add_potential_arguments(parser, with_scale=True):
    parser.add_argument(
        "--kind",
        choices=[kind.value for kind in PotentialKind],
        required=True,
        help="power potential sgn(q) r^q or the log potential ln r",
    )
    parser.add_argument(
        "--q",
        type=exponent_arg,
        default=None,
        help="exponent of the power potential (required for --kind power)",
    )
    if with_scale:
        parser.add_argument(
            "--mu",
            type=positive_float_arg,
            default=1.0,
            help="kinetic coefficient of -mu Laplacian + v V",
        )
        parser.add_argument(
            "--v", type=positive_float_arg, default=1.0, help="coupling constant"
        )


def add_solve_arguments(parser):
    add_potential_arguments(parser)
    add_level_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)


def add_table1_arguments(parser):
    parser.add_argument(
        "--check",
        action="store_true",
        help="compare against the shipped reference table, exit 4 on mismatch",
    )
    add_cache_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)


def add_figure_data_arguments(parser):
    parser.add_argument(
        "--figure",
        type=int,
        choices=[1, 2],
        required=True,
        help="1: energies E(q), leaving out |q| < step around the log limit; "
        "2: P(q) including the log value at q = 0",
    )
    parser.add_argument(
        "--q-grid-step",
        type=positive_float_arg,
        default=DEFAULT_Q_GRID_STEP,
        help="spacing of the exponent grid on [-1, 2]",
    )
    parser.add_argument(
        "--n-max", type=positive_int_arg, default=DEFAULT_FIGURE_N_MAX
    )
    parser.add_argument(
        "--ell-max", type=non_negative_int_arg, default=DEFAULT_FIGURE_ELL_MAX
    )
    parser.add_argument(
        "--source",
        choices=["solver", "interp"],
        default="solver",
        help="solve every grid point, or interpolate the cached P data",
    )
    add_cache_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)


def add_interp_arguments(parser):
    parser.add_argument("--q", type=float, required=True, help="-1 <= q <= 2")
    add_level_arguments(parser)
    parser.add_argument(
        "--with-exact",
        action="store_true",
        help="add the solver energy and the percentage error",
    )
    add_cache_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)


def add_bounds_arguments(parser):
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--q", type=float, help="power-law target exponent")
    target.add_argument("--log", action="store_true", help="the log potential")
    add_level_arguments(parser)
    parser.add_argument(
        "--method", choices=["monotone", "tangent"], default="monotone"
    )
    parser.add_argument(
        "--base-q",
        type=float,
        default=None,
        help="exponent of the base potential of a tangent bound (0 for the log)",
    )
    parser.add_argument(
        "--side",
        choices=["lower", "upper"],
        default=None,
        help="expected side of a tangent bound; a contradiction is an error",
    )
    parser.add_argument(
        "--exact-only",
        action="store_true",
        help="bracket with the closed-form nodes q = -1 and q = 2 only",
    )
    parser.add_argument(
        "--with-exact", action="store_true", help="add the solver energy"
    )
    add_cache_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)


def add_scale_arguments(parser):
    add_potential_arguments(parser)
    parser.add_argument(
        "--e", type=float, required=True, help="eigenvalue of the mu = v = 1 problem"
    )
    add_output_arguments(parser)


def add_build_cache_arguments(parser):
    parser.add_argument(
        "--n-max", type=positive_int_arg, default=DEFAULT_FIGURE_N_MAX
    )
    parser.add_argument(
        "--ell-max", type=non_negative_int_arg, default=DEFAULT_FIGURE_ELL_MAX
    )
    add_cache_arguments(parser)
    add_solver_arguments(parser)
    add_output_arguments(parser)
