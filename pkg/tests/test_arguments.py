import argparse

import pytest

from powerlog.__main__ import SUB_COMMANDS, create_argument_parser
from powerlog.cli import arguments


@pytest.mark.parametrize(
    "args, expected",
    [
        (["solve", "--kind", "log", "--n", "1", "--ell", "0"], None),
        (["solve", "--kind", "log", "--n", "1", "--ell", "0", "--tol", "1e-8"], 1e-8),
    ],
)
def test_arg_parser_tolerance(args, expected):
    parser = create_argument_parser()
    cmdline_args = parser.parse_args(args)

    assert cmdline_args.command == "solve"
    assert cmdline_args.tol == expected
    assert cmdline_args.richardson is None
    assert cmdline_args.mu == cmdline_args.v == 1.0


def test_help_lists_every_command():
    help_text = create_argument_parser().format_help()

    for name in SUB_COMMANDS:
        assert name in help_text


def test_command_is_required():
    with pytest.raises(SystemExit):
        create_argument_parser().parse_args([])


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--kind", "power", "--q", "3", "--n", "1", "--ell", "0"],
        ["solve", "--kind", "cubic", "--n", "1", "--ell", "0"],
        ["solve", "--kind", "log", "--n", "0", "--ell", "0"],
        ["solve", "--kind", "log", "--n", "1", "--ell", "-1"],
        ["solve", "--kind", "log", "--n", "1", "--ell", "0", "--tol", "-1"],
        ["bounds", "--q", "0.5", "--log", "--n", "1", "--ell", "0"],
        ["figure-data", "--figure", "3"],
    ],
)
def test_invalid_arguments(args):
    with pytest.raises(SystemExit) as e:
        create_argument_parser().parse_args(args)
    assert e.value.code == 2


def test_figure_data_defaults():
    cmdline_args = create_argument_parser().parse_args(["figure-data", "--figure", "2"])

    assert cmdline_args.q_grid_step == 0.05
    assert (cmdline_args.n_max, cmdline_args.ell_max) == (5, 5)
    assert cmdline_args.source == "solver"
    assert cmdline_args.cache is None


@pytest.mark.parametrize(
    "validator, value, expected",
    [
        (arguments.exponent_arg, "-1", -1.0),
        (arguments.exponent_arg, "0.5", 0.5),
        (arguments.positive_float_arg, "1e-6", 1e-6),
        (arguments.positive_int_arg, "3", 3),
        (arguments.non_negative_int_arg, "0", 0),
    ],
)
def test_validators(validator, value, expected):
    assert validator(value) == expected


@pytest.mark.parametrize(
    "validator, value",
    [
        (arguments.exponent_arg, "2.5"),
        (arguments.exponent_arg, "q"),
        (arguments.positive_float_arg, "0"),
        (arguments.positive_int_arg, "1.5"),
        (arguments.non_negative_int_arg, "-2"),
    ],
)
def test_validators_reject(validator, value):
    with pytest.raises(argparse.ArgumentTypeError):
        validator(value)
