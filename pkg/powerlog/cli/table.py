import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Text, Union

import pandas as pd

from powerlog.constants import DATA_SIGNIFICANT_DIGITS, DEFAULT_ENCODING
from powerlog.exceptions import DomainError

logger = logging.getLogger(__name__)

DATA_FORMAT = f".{DATA_SIGNIFICANT_DIGITS}g"


def _format(value: Any, spec: Optional[Text]) -> Text:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, spec or DATA_FORMAT)
    return str(value)


@dataclass
class OutputTable:
    """A CSV table with fixed per-column number formats.

    Floats use `formats[column]` when given and 12 significant digits
    otherwise; `None` renders as an empty field.
    """

    columns: List[Text]
    rows: List[List[Any]] = field(default_factory=list)
    formats: Dict[Text, Text] = field(default_factory=dict)
    meta: Dict[Text, Any] = field(default_factory=dict)

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise DomainError(
                f"Row {values} has {len(values)} fields, the table has "
                f"{len(self.columns)} columns."
            )
        self.rows.append(list(values))

    def extend(self, rows: Sequence[Sequence[Any]]) -> None:
        for row in rows:
            self.add_row(*row)

    def to_frame(self) -> pd.DataFrame:
        """The raw values, one column per table column."""
        return pd.DataFrame(self.rows, columns=self.columns)

    def to_csv(self, with_meta: bool = False) -> Text:
        formatted = pd.DataFrame(
            [
                [
                    _format(value, self.formats.get(column))
                    for column, value in zip(self.columns, row)
                ]
                for row in self.rows
            ],
            columns=self.columns,
        )
        buffer = io.StringIO()
        if with_meta:
            for key, value in self.meta.items():
                buffer.write(f"# {key}: {value}\n")
        formatted.to_csv(buffer, index=False)
        return buffer.getvalue()

    def write(
        self, out: Optional[Union[Text, Path]] = None, with_meta: bool = False
    ) -> None:
        """Writes the CSV to `out`, or to stdout if no path is given."""
        content = self.to_csv(with_meta)
        if out is None or str(out) == "-":
            sys.stdout.write(content)
            return

        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding=DEFAULT_ENCODING, newline="") as f:
            f.write(content)
        logger.info(f"Wrote {len(self.rows)} rows to '{path}'.")
