import logging
from typing import Dict, List

import pytest

from powerlog.interp import PDataset, Table1Row, build_p_dataset, table1_rows
from powerlog.potentials import PotentialSpec
from powerlog.radial_solver import SolverConfig, SpectrumTable, solve_spectrum

# tighter than the default so that five-decimal reference values are stable
TABLE_TOLERANCE = 1e-7


@pytest.fixture(autouse=True)
def reset_logging() -> None:
    manager = logging.root.manager
    manager.disabled = logging.NOTSET
    for logger in manager.loggerDict.values():
        if isinstance(logger, logging.Logger):
            logger.setLevel(logging.NOTSET)
            logger.propagate = True
            logger.disabled = False
            logger.filters.clear()
            handlers = logger.handlers.copy()
            for handler in handlers:
                logger.removeHandler(handler)


@pytest.fixture(scope="session")
def table_config() -> SolverConfig:
    return SolverConfig(tolerance=TABLE_TOLERANCE)


@pytest.fixture(scope="session")
def p_dataset(table_config: SolverConfig) -> PDataset:
    # the same level range the command line requests
    return build_p_dataset(5, 5, table_config)


@pytest.fixture(scope="session")
def half_rows(p_dataset: PDataset, table_config: SolverConfig) -> List[Table1Row]:
    return table1_rows(p_dataset, table_config)


@pytest.fixture(scope="session")
def power_spectra(table_config: SolverConfig) -> Dict[float, SpectrumTable]:
    """Solver spectra of the 25 printed levels between the dataset nodes."""
    return {
        q: solve_spectrum(PotentialSpec.power(q), 5, 4, table_config)
        for q in (-0.5, -0.1, 0.1, 0.5, 1.5)
    }
