from pathlib import Path

import pytest

from powerlog.constants import ENV_CONFIG_FILE, ENV_WORKERS
from powerlog.interp import PDataset
from powerlog.radial_solver import SolverConfig
from powerlog.storage import write_dataset


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(ENV_CONFIG_FILE, raising=False)
    monkeypatch.delenv(ENV_WORKERS, raising=False)


@pytest.fixture
def cache_args(
    tmp_path: Path, p_dataset: PDataset, table_config: SolverConfig
) -> list:
    """Flags that point a command at a cache holding the shared P data."""
    path = tmp_path / "pdata.csv"
    write_dataset(p_dataset, path, table_config.cache_key())
    return ["--tol", str(table_config.tolerance), "--cache", str(path)]
