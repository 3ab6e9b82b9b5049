import logging

import powerlog.version
from powerlog.potentials import PotentialSpec, QuantumNumbers  # noqa: F401
from powerlog.radial_solver import SolverConfig, solve_eigenvalue  # noqa: F401

logger = logging.getLogger(__name__)

__version__ = powerlog.version.__version__

if __name__ == "__main__":
    import powerlog.__main__

    powerlog.__main__.main()
