import argparse
import logging
import sys

from powerlog import utils
from powerlog.cli import arguments
from powerlog.cli.commands import run
from powerlog.constants import APPLICATION_ROOT_LOGGER_NAME
from powerlog.version import __version__

SUB_COMMANDS = {
    "solve": (
        arguments.add_solve_arguments,
        "solve one level of a power or log potential",
    ),
    "table1": (
        arguments.add_table1_arguments,
        "reproduce the P-data and interpolation errors at q = 1/2",
    ),
    "figure-data": (
        arguments.add_figure_data_arguments,
        "emit E(q) (figure 1) or P(q) (figure 2) over a grid of exponents",
    ),
    "interp": (
        arguments.add_interp_arguments,
        "interpolate P and the energy at an arbitrary exponent",
    ),
    "bounds": (
        arguments.add_bounds_arguments,
        "bracket a level by monotonicity of P or bound it by tangent potentials",
    ),
    "scale": (
        arguments.add_scale_arguments,
        "map a bare eigenvalue onto -mu Laplacian + v V",
    ),
    "build-cache": (
        arguments.add_build_cache_arguments,
        "compute the P dataset and write the cache file",
    ),
}


def create_argument_parser():
    """Parse all the command line arguments for the powerlog commands."""

    parser = argparse.ArgumentParser(
        prog="powerlog",
        description="eigenvalues of power-law and log potentials and their "
        "P-representation",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for name, (add_arguments, help_text) in SUB_COMMANDS.items():
        subparser = subparsers.add_parser(name, help=help_text, description=help_text)
        add_arguments(subparser)
        utils.add_logging_level_option_arguments(subparser)
        utils.add_logging_file_arguments(subparser)
    return parser


def main_from_args(args):
    """Run with arguments."""
    utils.configure_colored_logging(args.loglevel)
    utils.configure_file_logging(
        logging.getLogger(APPLICATION_ROOT_LOGGER_NAME),
        args.log_file,
        args.loglevel,
        args.logging_config_file,
    )
    utils.update_library_log_level()

    exit_code = run(args)
    if exit_code:
        sys.exit(exit_code)


def main():
    # Running as standalone python application
    arg_parser = create_argument_parser()
    cmdline_args = arg_parser.parse_args()

    main_from_args(cmdline_args)


if __name__ == "__main__":
    main()
