"""Cubic interpolation of P(q) through the nodes q = -1, 0, 1, 2.

P is known in closed form at q = -1 (Coulomb) and q = 2 (oscillator); the
log (q = 0) and linear (q = 1) values come from Airy zeros or the radial
solver. The cubic through the four node values gives approximate energies
for every exponent in [-1, 2].
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from powerlog import airy, prep
from powerlog.constants import (
    AIRY_MAX_ZERO_INDEX,
    NODES,
    Q_MAX,
    Q_MIN,
    TABLE1_ELL_MAX,
    TABLE1_N_MAX,
    TABLE1_Q,
)
from powerlog.exceptions import ConsistencyError, DatasetLookupError, DomainError
from powerlog.potentials import PotentialSpec, QuantumNumbers
from powerlog.prep import PValue
from powerlog.radial_solver import SolverConfig, solve_spectrum

logger = logging.getLogger(__name__)

# maps (P(-1), P(0), P(1), P(2)) onto (a, b, c, d)
INVERSION_MATRIX = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0 / 3.0, -1.0 / 2.0, 1.0, -1.0 / 6.0],
        [1.0 / 2.0, -1.0, 1.0 / 2.0, 0.0],
        [-1.0 / 6.0, 1.0 / 2.0, -1.0 / 2.0, 1.0 / 6.0],
    ]
)

AIRY_AGREEMENT = 1e-6
NODE_RELATIVE_TOLERANCE = 1e-12


class Provenance(str, enum.Enum):
    EXACT = "exact-formula"
    AIRY = "airy"
    SOLVER = "solver"


@dataclass(frozen=True)
class CubicCoeffs:
    """P(q) = a + b q + c q² + d q³."""

    a: float
    b: float
    c: float
    d: float

    def __call__(self, q: float) -> float:
        return self.a + q * (self.b + q * (self.c + q * self.d))


@dataclass(frozen=True)
class NodeValues:
    """The four node values of one level, with where each of them came from."""

    p_m1: float
    p_0: float
    p_1: float
    p_2: float
    provenance: Tuple[Provenance, Provenance, Provenance, Provenance] = (
        Provenance.EXACT,
        Provenance.SOLVER,
        Provenance.SOLVER,
        Provenance.EXACT,
    )

    @property
    def values(self) -> Tuple[float, float, float, float]:
        return self.p_m1, self.p_0, self.p_1, self.p_2

    def at_node(self, q: float) -> float:
        return self.values[NODES.index(q)]

    def coefficients(self) -> CubicCoeffs:
        return fit_cubic(*self.values)


class PDataset:
    """Node values of P for a set of levels.

    Rows are validated on construction: P increases strictly across the nodes
    and the q = -1 and q = 2 values are the closed-form ones.
    """

    def __init__(self, rows: Dict[Tuple[int, int], NodeValues]) -> None:
        for (n, ell), row in rows.items():
            self._validate(QuantumNumbers(n, ell), row)
        self._rows = dict(rows)

    @staticmethod
    def _validate(qn: QuantumNumbers, row: NodeValues) -> None:
        if not row.p_m1 < row.p_0 < row.p_1 < row.p_2:
            raise ConsistencyError(
                f"P values {row.values} of level {qn} are not increasing in q",
                check="monotonicity",
                level=(qn.n, qn.ell),
            )
        for q, value, provenance in (
            (-1, row.p_m1, row.provenance[0]),
            (2, row.p_2, row.provenance[3]),
        ):
            exact = prep.exact_p(q, qn)
            if provenance != Provenance.EXACT or not math.isclose(
                value, exact, rel_tol=NODE_RELATIVE_TOLERANCE
            ):
                raise ConsistencyError(
                    f"P({q}) of level {qn} must be the closed-form value {exact}, "
                    f"got {value} ({provenance.value})",
                    check="exact-node",
                    level=(qn.n, qn.ell),
                )

    def row(self, n: int, ell: int) -> NodeValues:
        try:
            return self._rows[(n, ell)]
        except KeyError:
            raise DatasetLookupError(n, ell)

    def __contains__(self, key: object) -> bool:
        return key in self._rows

    def levels(self) -> List[QuantumNumbers]:
        """All levels, ordered ℓ-major like the published table."""
        return [
            QuantumNumbers(n, ell)
            for n, ell in sorted(self._rows, key=lambda key: (key[1], key[0]))
        ]

    def __iter__(self) -> Iterator[Tuple[QuantumNumbers, NodeValues]]:
        for qn in self.levels():
            yield qn, self._rows[(qn.n, qn.ell)]

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def n_max(self) -> int:
        return max((n for n, _ in self._rows), default=0)

    @property
    def ell_max(self) -> int:
        return max((ell for _, ell in self._rows), default=-1)

    def covers(self, n_max: int, ell_max: int) -> bool:
        return all(
            (n, ell) in self._rows
            for n in range(1, n_max + 1)
            for ell in range(ell_max + 1)
        )


@dataclass(frozen=True)
class Table1Row:
    n: int
    ell: int
    p0: float
    p1: float
    e_approx: float
    e_exact: float
    pct_error: float


def fit_cubic(p_m1: float, p_0: float, p_1: float, p_2: float) -> CubicCoeffs:
    """Coefficients of the cubic through the four node values, in closed form."""
    values = np.array([p_m1, p_0, p_1, p_2], dtype=float)
    if not np.all(values > 0):
        raise DomainError(f"P node values must be positive, got {tuple(values)}.")
    a, b, c, d = INVERSION_MATRIX @ values
    return CubicCoeffs(float(a), float(b), float(c), float(d))


def p_interpolated(coeffs: CubicCoeffs, q: float) -> PValue:
    if not Q_MIN <= q <= Q_MAX:
        raise DomainError(
            f"q={q} is outside the interpolation range [{Q_MIN:g}, {Q_MAX:g}]."
        )
    p = coeffs(q)
    if not p > 0:
        raise DomainError(
            f"The interpolated P at q={q} is not positive ({p}); the node data "
            f"is inconsistent."
        )
    return PValue(p)


def approx_energy(qn: QuantumNumbers, q: float, data: PDataset) -> float:
    """The energy of the interpolated P at exponent q (q = 0 is the log)."""
    row = data.row(qn.n, qn.ell)
    if q in NODES:
        # node values are reproduced exactly, not through the cubic
        return prep.energy_from_p(q, row.at_node(q))
    return prep.energy_from_p(q, p_interpolated(row.coefficients(), q))


def percentage_error(e_approx: float, e_exact: float) -> float:
    """`100 (E_approx - E) / |E|`, signed."""
    if e_exact == 0:
        raise DomainError("The percentage error is undefined for an exact energy 0.")
    return 100.0 * (e_approx - e_exact) / abs(e_exact)


def build_p_dataset(
    n_max: int,
    ell_max: int,
    cfg: Optional[SolverConfig] = None,
    workers: Optional[int] = None,
) -> PDataset:
    """Builds the node values for 1 <= n <= n_max, 0 <= ℓ <= ell_max.

    P(-1) and P(2) are exact. P(0) is solved on the log potential. P(1) comes
    from the Airy zeros for ℓ = 0, where the solver has to agree with it, and
    from the solver for ℓ > 0.
    """
    cfg = cfg or SolverConfig()
    log_levels = solve_spectrum(PotentialSpec.log(), n_max, ell_max, cfg, workers)
    linear_levels = solve_spectrum(
        PotentialSpec.power(1.0), n_max, ell_max, cfg, workers
    )
    agreement = max(AIRY_AGREEMENT, 2.0 * cfg.tolerance)

    rows = {}
    for ell in range(ell_max + 1):
        for n in range(1, n_max + 1):
            qn = QuantumNumbers(n, ell)
            linear_energy = linear_levels.energy(n, ell)
            linear_provenance = Provenance.SOLVER
            if ell == 0 and n <= AIRY_MAX_ZERO_INDEX:
                airy_energy = airy.linear_s_state_energy(n)
                if abs(airy_energy - linear_energy) > agreement:
                    raise ConsistencyError(
                        f"solver energy {linear_energy:.12g} of the linear potential "
                        f"disagrees with the Airy value {airy_energy:.12g}",
                        check="airy",
                        level=(n, ell),
                    )
                linear_energy = airy_energy
                linear_provenance = Provenance.AIRY

            rows[(n, ell)] = NodeValues(
                p_m1=prep.exact_p(-1, qn),
                p_0=prep.p_from_energy_log(log_levels.energy(n, ell)),
                p_1=prep.p_from_energy_power(1.0, linear_energy),
                p_2=prep.exact_p(2, qn),
                provenance=(
                    Provenance.EXACT,
                    Provenance.SOLVER,
                    linear_provenance,
                    Provenance.EXACT,
                ),
            )

    logger.info(
        f"Built P data for {len(rows)} levels (n <= {n_max}, ell <= {ell_max})."
    )
    return PDataset(rows)


def table1_rows(
    data: PDataset,
    cfg: Optional[SolverConfig] = None,
    n_max: int = TABLE1_N_MAX,
    ell_max: int = TABLE1_ELL_MAX,
    q: float = TABLE1_Q,
    workers: Optional[int] = None,
) -> List[Table1Row]:
    """Interpolated against solved energies at exponent q, ℓ-major."""
    exact = solve_spectrum(PotentialSpec.from_exponent(q), n_max, ell_max, cfg, workers)
    rows = []
    for ell in range(ell_max + 1):
        for n in range(1, n_max + 1):
            qn = QuantumNumbers(n, ell)
            node_values = data.row(n, ell)
            e_approx = approx_energy(qn, q, data)
            e_exact = exact.energy(n, ell)
            rows.append(
                Table1Row(
                    n=n,
                    ell=ell,
                    p0=node_values.p_0,
                    p1=node_values.p_1,
                    e_approx=e_approx,
                    e_exact=e_exact,
                    pct_error=percentage_error(e_approx, e_exact),
                )
            )
    return rows


def interpolated_curve(
    qn: QuantumNumbers, data: PDataset, q_values: Sequence[float]
) -> List[Tuple[float, float]]:
    """(q, P) pairs of the interpolated P along a grid of exponents."""
    row = data.row(qn.n, qn.ell)
    coeffs = row.coefficients()
    return [
        (q, row.at_node(q) if q in NODES else p_interpolated(coeffs, q))
        for q in q_values
    ]
