"""Reading and writing the P dataset cache file.

The cache is a CSV file preceded by one comment line that records the format
version, the level ranges and a digest of the solver configuration:

    # powerlog-pdata version=1 n_max=5 ell_max=5 config=<sha1>
    n,ell,p_m1,p_0,p_1,p_2,prov_m1,prov_0,prov_1,prov_2
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Text, Tuple, Union

import pandas as pd

from powerlog.constants import (
    CACHE_FORMAT_VERSION,
    CACHE_MAGIC,
    DATA_SIGNIFICANT_DIGITS,
    DEFAULT_ENCODING,
)
from powerlog.exceptions import (
    CacheFormatError,
    ConsistencyError,
    FileNotFoundException,
)
from powerlog.interp import NodeValues, PDataset, Provenance, build_p_dataset
from powerlog.radial_solver import SolverConfig
from powerlog.types import DatasetRecord

logger = logging.getLogger(__name__)

CACHE_COLUMNS = [
    "n",
    "ell",
    "p_m1",
    "p_0",
    "p_1",
    "p_2",
    "prov_m1",
    "prov_0",
    "prov_1",
    "prov_2",
]


@dataclass(frozen=True)
class CacheHeader:
    version: int
    n_max: int
    ell_max: int
    config: Text

    def render(self) -> Text:
        return (
            f"# {CACHE_MAGIC} version={self.version} n_max={self.n_max} "
            f"ell_max={self.ell_max} config={self.config}"
        )

    @classmethod
    def parse(cls, line: Text) -> "CacheHeader":
        fields = line.lstrip("#").split()
        if not fields or fields[0] != CACHE_MAGIC:
            raise CacheFormatError(
                f"Not a P dataset cache, the first line is '{line.strip()}'."
            )
        try:
            values = dict(field.split("=", 1) for field in fields[1:])
            return cls(
                version=int(values["version"]),
                n_max=int(values["n_max"]),
                ell_max=int(values["ell_max"]),
                config=values["config"],
            )
        except (KeyError, ValueError) as e:
            raise CacheFormatError(f"Malformed cache header '{line.strip()}': {e}")


def _records(data: PDataset) -> List[DatasetRecord]:
    return [
        {
            "n": qn.n,
            "ell": qn.ell,
            "p_m1": row.p_m1,
            "p_0": row.p_0,
            "p_1": row.p_1,
            "p_2": row.p_2,
            "prov_m1": row.provenance[0].value,
            "prov_0": row.provenance[1].value,
            "prov_1": row.provenance[2].value,
            "prov_2": row.provenance[3].value,
        }
        for qn, row in data
    ]


def write_dataset(
    data: PDataset, path: Union[Text, Path], config_key: Text
) -> CacheHeader:
    """Writes the dataset with 12 significant digits per value."""
    header = CacheHeader(
        version=CACHE_FORMAT_VERSION,
        n_max=data.n_max,
        ell_max=data.ell_max,
        config=config_key,
    )
    frame = pd.DataFrame(_records(data), columns=CACHE_COLUMNS)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding=DEFAULT_ENCODING, newline="") as f:
        f.write(header.render() + "\n")
        frame.to_csv(f, index=False, float_format=f"%.{DATA_SIGNIFICANT_DIGITS}g")

    logger.debug(f"Wrote P data for {len(data)} levels to '{path}'.")
    return header


def read_dataset(path: Union[Text, Path]) -> Tuple[CacheHeader, PDataset]:
    path = Path(path)
    try:
        with open(path, encoding=DEFAULT_ENCODING) as f:
            header = CacheHeader.parse(f.readline())
    except FileNotFoundError:
        raise FileNotFoundException(f"Cache file '{path.absolute()}' does not exist.")

    if header.version != CACHE_FORMAT_VERSION:
        raise CacheFormatError(
            f"Cache '{path}' has format version {header.version}, expected "
            f"{CACHE_FORMAT_VERSION}."
        )

    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    if list(frame.columns) != CACHE_COLUMNS:
        raise CacheFormatError(
            f"Cache '{path}' has columns {list(frame.columns)}, expected "
            f"{CACHE_COLUMNS}."
        )

    rows: Dict = {}
    try:
        for record in frame.itertuples(index=False):
            rows[(int(record.n), int(record.ell))] = NodeValues(
                p_m1=float(record.p_m1),
                p_0=float(record.p_0),
                p_1=float(record.p_1),
                p_2=float(record.p_2),
                provenance=(
                    Provenance(record.prov_m1),
                    Provenance(record.prov_0),
                    Provenance(record.prov_1),
                    Provenance(record.prov_2),
                ),
            )
    except ValueError as e:
        raise CacheFormatError(f"Cache '{path}' holds an invalid row: {e}")

    return header, PDataset(rows)


def load_or_build_dataset(
    path: Union[Text, Path],
    n_max: int,
    ell_max: int,
    cfg: Optional[SolverConfig] = None,
    workers: Optional[int] = None,
) -> PDataset:
    """Reads the cached dataset, rebuilding it if it does not fit the request.

    A cache is reused when it was computed with the same solver configuration
    and covers every requested level.
    """
    cfg = cfg or SolverConfig()
    path = Path(path)
    config_key = cfg.cache_key()

    if path.exists():
        try:
            header, data = read_dataset(path)
        except (CacheFormatError, ConsistencyError) as e:
            logger.warning(f"Ignoring unreadable cache '{path}': {e}")
        else:
            if header.config == config_key and data.covers(n_max, ell_max):
                logger.debug(f"Using cached P data from '{path}'.")
                return data
            logger.info(
                f"Cache '{path}' does not match the request "
                f"(n_max={n_max}, ell_max={ell_max}), rebuilding it."
            )

    write_dataset(build_p_dataset(n_max, ell_max, cfg, workers), path, config_key)
    # hand back the rounded values so a warm cache gives the same numbers
    _, data = read_dataset(path)
    return data
