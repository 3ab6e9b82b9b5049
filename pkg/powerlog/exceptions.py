from pathlib import Path
from typing import Any, List, Optional, Text, Tuple, Union

from ruamel.yaml.error import (
    MarkedYAMLError,
    MarkedYAMLWarning,
    MarkedYAMLFutureWarning,
)


class PowerLogException(Exception):
    """Base exception class for all errors raised by powerlog."""


class DomainError(PowerLogException, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class NumericalError(PowerLogException):
    """Raised when a bracketing step or a 1-D optimisation fails."""


class SolverError(PowerLogException):
    """Base class for failures of the radial eigenvalue solver.

    Args:
        message: Description of the failed check.
        check: Name of the check that failed.
        level: The `(n, ell)` pair being solved, if known.
    """

    def __init__(
        self,
        message: Text,
        check: Optional[Text] = None,
        level: Optional[Tuple[int, int]] = None,
    ) -> None:
        self.message = message
        self.check = check
        self.level = level
        super().__init__(message)

    def annotate(self, level: Tuple[int, int]) -> "SolverError":
        """Return the same error, tagged with the level that was being solved."""
        self.level = level
        return self

    def __str__(self) -> Text:
        text = self.message
        if self.check:
            text = f"[{self.check}] {text}"
        if self.level:
            n, ell = self.level
            text = f"level (n={n}, ell={ell}): {text}"
        return text


class ConvergenceError(SolverError):
    """Raised when a requested level does not converge for the given config."""


class ConsistencyError(SolverError):
    """Raised when an internal consistency check on a solution fails."""


class DatasetLookupError(PowerLogException, KeyError):
    """Raised when a `(n, ell)` row is missing from a P dataset."""

    def __init__(self, n: int, ell: int) -> None:
        self.n = n
        self.ell = ell
        super().__init__(n, ell)

    def __str__(self) -> Text:
        return f"No P data for level (n={self.n}, ell={self.ell})."


class CacheFormatError(PowerLogException):
    """Raised when a P dataset cache file can not be understood."""


class GoldenCheckError(PowerLogException):
    """Raised when recomputed reference values fall outside their tolerances.

    Args:
        failures: One description per offending cell.
        table: The recomputed table, still worth writing out.
    """

    def __init__(self, failures: List[Text], table: Any = None) -> None:
        self.failures = failures
        self.table = table
        super().__init__(f"{len(failures)} value(s) outside tolerance")


class FileNotFoundException(FileNotFoundError):
    """Raised when a file, expected to exist, doesn't exist."""


class FileIOException(Exception):
    """Raised if there is an error while doing file IO."""


class YamlSyntaxException(Exception):
    """Raised when a YAML file can not be parsed properly due to a syntax error."""

    def __init__(
        self,
        filename: Optional[Union[Text, Path]] = None,
        underlying_yaml_exception: Optional[Exception] = None,
    ) -> None:
        """Represents the exception constructor."""
        self.filename = filename

        self.underlying_yaml_exception = underlying_yaml_exception

    def __str__(self) -> Text:
        if self.filename:
            exception_text = f"Failed to read '{self.filename}'."
        else:
            exception_text = "Failed to read YAML."

        if self.underlying_yaml_exception:
            if isinstance(
                self.underlying_yaml_exception,
                (MarkedYAMLError, MarkedYAMLWarning, MarkedYAMLFutureWarning),
            ):
                self.underlying_yaml_exception.note = None
            if isinstance(
                self.underlying_yaml_exception,
                (MarkedYAMLWarning, MarkedYAMLFutureWarning),
            ):
                self.underlying_yaml_exception.warn = None
            exception_text += f" {self.underlying_yaml_exception}"

        if self.filename:
            exception_text = exception_text.replace(
                'in "<unicode string>"', f'in "{self.filename}"'
            )

        return exception_text
