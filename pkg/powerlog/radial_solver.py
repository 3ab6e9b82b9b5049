"""Finite-difference eigenvalues of the reduced radial problem.

The operator `-μu'' + [μℓ(ℓ+1)/r² + vV(r)]u` is discretised by central
differences on a uniform mesh with `u = 0` at the origin and at the outer
cutoff. The n-th eigenvalue of the resulting symmetric tridiagonal matrix is
isolated by Sturm-sequence bisection, and the O(h²) discretisation error is
removed by Richardson extrapolation over successively halved steps.
"""

import dataclasses
import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Text, Tuple

import numpy as np
from scipy import integrate, linalg, optimize

from powerlog import potentials, prep
from powerlog.constants import (
    BOX_GROWTH_FACTOR,
    COULOMB_BOX_FACTOR,
    DEFAULT_CONFINING_MARGIN,
    DEFAULT_DECAY_EXPONENT,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_GRID_POINTS,
    DEFAULT_TAIL_TOLERANCE,
    DEFAULT_TOLERANCE,
    MARGIN_RULE_MIN_EXPONENT,
    MAX_BOX_ATTEMPTS,
    MIN_GRID_POINTS,
    TAIL_FRACTION,
)
from powerlog.exceptions import (
    ConsistencyError,
    ConvergenceError,
    DatasetLookupError,
    DomainError,
    SolverError,
)
from powerlog.potentials import PotentialSpec, QuantumNumbers
from powerlog.utils import number_of_workers

logger = logging.getLogger(__name__)

EPSILON = float(np.finfo(float).eps)

# eigenvector entries below this fraction of the peak are not sign-counted
NODE_THRESHOLD = 1e-8

MAX_EXPANSION_STEPS = 200


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings of the radial solver.

    `r_min` and `r_max` default to automatic choices. An explicit `r_min` is
    an upper limit for the innermost mesh point, i.e. for the coarsest grid
    step; `config_used` of a result reports the finest step actually used.
    """

    grid_points: int = DEFAULT_GRID_POINTS
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    tolerance: float = DEFAULT_TOLERANCE
    richardson: bool = True
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    decay_exponent: float = DEFAULT_DECAY_EXPONENT
    confining_margin: float = DEFAULT_CONFINING_MARGIN

    def __post_init__(self) -> None:
        if self.grid_points < MIN_GRID_POINTS:
            raise DomainError(
                f"grid_points must be at least {MIN_GRID_POINTS}, "
                f"got {self.grid_points}."
            )
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}.")
        if self.r_min is not None and not self.r_min > 0:
            raise DomainError(f"r_min must be positive, got {self.r_min}.")
        if self.r_max is not None and not self.r_max > 0:
            raise DomainError(f"r_max must be positive, got {self.r_max}.")
        if (
            self.r_min is not None
            and self.r_max is not None
            and not self.r_min < self.r_max
        ):
            raise DomainError(
                f"r_min={self.r_min} must be smaller than r_max={self.r_max}."
            )
        if self.max_grid_points < self.grid_points:
            raise DomainError(
                f"max_grid_points={self.max_grid_points} is smaller than "
                f"grid_points={self.grid_points}."
            )
        if not self.tail_tolerance > 0:
            raise DomainError(
                f"tail_tolerance must be positive, got {self.tail_tolerance}."
            )

    def cache_key(self) -> Text:
        """A stable digest of every setting that influences solver output."""
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha1(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Eigenresult:
    energy: float
    node_count: int
    config_used: SolverConfig
    estimated_error: float


@dataclass(frozen=True)
class SpectrumTable:
    """Solved levels of one potential, keyed by `(n, ell)`."""

    spec: PotentialSpec
    results: Dict[Tuple[int, int], Eigenresult] = field(default_factory=dict)

    def result(self, n: int, ell: int) -> Eigenresult:
        try:
            return self.results[(n, ell)]
        except KeyError:
            raise DatasetLookupError(n, ell)

    def energy(self, n: int, ell: int) -> float:
        return self.result(n, ell).energy

    def levels(self) -> List[QuantumNumbers]:
        """The solved levels, all n for ℓ = 0 first, then ℓ = 1, and so on."""
        return [
            QuantumNumbers(n, ell)
            for n, ell in sorted(self.results, key=lambda key: (key[1], key[0]))
        ]

    def __iter__(self) -> Iterator[Tuple[QuantumNumbers, Eigenresult]]:
        for qn in self.levels():
            yield qn, self.results[(qn.n, qn.ell)]

    def __len__(self) -> int:
        return len(self.results)


def first_pass_energy(spec: PotentialSpec, qn: QuantumNumbers) -> float:
    """Cheap energy estimate from P interpolated linearly between q = -1 and 2."""
    lower = prep.exact_p(-1, qn)
    upper = prep.exact_p(2, qn)
    q = spec.exponent
    p = lower + (upper - lower) * (q + 1.0) / 3.0
    return potentials.scale_eigenvalue(spec, prep.energy_from_p(q, p))


class RadialProblem:
    """One level `(n, ℓ)` of one potential under a fixed solver config."""

    def __init__(
        self, spec: PotentialSpec, qn: QuantumNumbers, config: SolverConfig
    ) -> None:
        self.spec = spec
        self.qn = qn
        self.config = config

    def _veff(self, r: float) -> float:
        return potentials.effective_potential(self.spec, self.qn.ell, r)

    def _veff_slope(self, r: float) -> float:
        centrifugal = -2.0 * self.spec.mu * self.qn.ell * (self.qn.ell + 1) / r ** 3
        return centrifugal + potentials.derivative(self.spec, r)

    def outer_turning_point(self, energy: float) -> float:
        """The largest radius at which the effective potential reaches `energy`.

        If the energy lies below the whole effective potential, the position
        of its minimum is returned instead.
        """
        r_hi = 1.0
        for _ in range(MAX_EXPANSION_STEPS):
            if self._veff(r_hi) > energy and self._veff_slope(r_hi) > 0:
                break
            r_hi *= 2.0
        else:
            raise ConvergenceError(
                f"no classical turning point found for E={energy:g}", check="bound"
            )

        grid = np.geomspace(r_hi * 1e-8, r_hi, 2000)
        excess = (
            potentials.effective_potential_on_grid(self.spec, self.qn.ell, grid)
            - energy
        )
        allowed = np.nonzero(excess < 0)[0]
        if allowed.size == 0:
            return float(grid[np.argmin(excess)])

        i = int(allowed[-1])
        return float(
            optimize.brentq(
                lambda r: self._veff(r) - energy, grid[i], grid[i + 1], xtol=1e-12
            )
        )

    def _decay_radius(self, energy: float, turning_point: float) -> float:
        mu = self.spec.mu
        target = self.config.decay_exponent

        def momentum(r: float) -> float:
            return math.sqrt(max(self._veff(r) - energy, 0.0) / mu)

        def shortfall(r: float) -> float:
            value, _ = integrate.quad(momentum, turning_point, r, limit=200)
            return value - target

        step = max(turning_point, 1.0)
        r_hi = turning_point + step
        for _ in range(MAX_EXPANSION_STEPS):
            if shortfall(r_hi) > 0:
                break
            step *= 2.0
            r_hi = turning_point + step
        else:
            raise ConvergenceError(
                f"the decay integral never reaches {target:g} for E={energy:g}",
                check="bound",
            )
        return float(optimize.brentq(shortfall, turning_point, r_hi, rtol=1e-6))

    def _length_scale(self) -> float:
        return (self.spec.mu / self.spec.v) ** (1.0 / (2.0 + self.spec.exponent))

    def box_radius(self, energy: float) -> float:
        """Outer cutoff for a level of approximately the given energy."""
        turning_point = self.outer_turning_point(energy)
        radius = self._decay_radius(energy, turning_point)
        q = self.spec.exponent
        if q < 0:
            minimum = (
                COULOMB_BOX_FACTOR
                * (self.qn.n + self.qn.ell) ** 2
                * self._length_scale()
            )
            radius = max(radius, minimum)
        elif not self.spec.is_log and q >= MARGIN_RULE_MIN_EXPONENT:
            margin = self.outer_turning_point(energy + self.config.confining_margin)
            radius = max(radius, margin)
        return radius

    def _base_intervals(self, r_max: float) -> int:
        points = self.config.grid_points
        if self.config.r_min is not None:
            points = max(points, math.ceil(r_max / self.config.r_min) - 1)
        if points > self.config.max_grid_points:
            raise ConvergenceError(
                f"r_min={self.config.r_min:g} needs {points} mesh points on "
                f"r_max={r_max:g}, more than max_grid_points="
                f"{self.config.max_grid_points}",
                check="refinement",
            )
        return points + 1

    def _level(
        self, r_max: float, intervals: int, with_vector: bool = False
    ) -> Tuple[float, Optional[np.ndarray]]:
        mu = self.spec.mu
        h = r_max / intervals
        mesh = h * np.arange(1, intervals)
        diagonal = 2.0 * mu / h ** 2 + potentials.effective_potential_on_grid(
            self.spec, self.qn.ell, mesh
        )
        off_diagonal = np.full(intervals - 2, -mu / h ** 2)
        index = self.qn.n - 1
        if index >= mesh.size:
            raise ConvergenceError(
                f"the mesh of {mesh.size} points has no level {self.qn.n}",
                check="refinement",
            )

        if with_vector:
            values, vectors = linalg.eigh_tridiagonal(
                diagonal,
                off_diagonal,
                select="i",
                select_range=(index, index),
                lapack_driver="stebz",
            )
            return float(values[0]), vectors[:, 0]

        values = linalg.eigh_tridiagonal(
            diagonal,
            off_diagonal,
            eigvals_only=True,
            select="i",
            select_range=(index, index),
            lapack_driver="stebz",
        )
        return float(values[0]), None

    @staticmethod
    def tail_amplitude(u: np.ndarray) -> float:
        """max |u| over the outer part of the box relative to max |u|."""
        magnitude = np.abs(u)
        start = int(len(u) * (1.0 - TAIL_FRACTION))
        return float(magnitude[start:].max() / magnitude.max())

    @staticmethod
    def count_nodes(u: np.ndarray) -> int:
        magnitude = np.abs(u)
        significant = u[magnitude > NODE_THRESHOLD * magnitude.max()]
        return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))

    def _box_failure(
        self, energy: float, u: np.ndarray, r_max: float
    ) -> Optional[Tuple[Text, Text]]:
        if not self.spec.is_confining and energy >= 0:
            return "bound", f"level is not bound inside r_max={r_max:g} (E={energy:g})"
        tail = self.tail_amplitude(u)
        if tail >= self.config.tail_tolerance:
            return (
                "tail",
                f"relative tail amplitude {tail:.3g} at r_max={r_max:g} exceeds "
                f"{self.config.tail_tolerance:g}",
            )
        return None

    def size_box(self) -> Tuple[float, int]:
        """Finds an outer cutoff that holds the level, returns it with the mesh."""
        fixed = self.config.r_max is not None
        if fixed:
            r_max = float(self.config.r_max)  # type: ignore[arg-type]
        else:
            r_max = self.box_radius(first_pass_energy(self.spec, self.qn))

        failure = None
        for attempt in range(MAX_BOX_ATTEMPTS):
            intervals = self._base_intervals(r_max)
            energy, u = self._level(r_max, intervals, with_vector=True)
            failure = self._box_failure(energy, u, r_max)  # type: ignore[arg-type]

            if failure is None:
                if fixed:
                    return r_max, intervals
                resized = self.box_radius(energy)
                if resized <= r_max * 1.01:
                    return r_max, intervals
                logger.debug(
                    f"{self.spec.label()} {self.qn}: resizing box "
                    f"{r_max:g} -> {resized:g} from E={energy:.8g}."
                )
                r_max = resized
                continue

            check, message = failure
            if fixed:
                raise ConvergenceError(message, check=check)
            logger.debug(
                f"{self.spec.label()} {self.qn}: {message}, enlarging the box "
                f"(attempt {attempt + 1})."
            )
            r_max *= BOX_GROWTH_FACTOR

        check, message = failure or ("tail", "the box kept growing")
        raise ConvergenceError(
            f"{message} after {MAX_BOX_ATTEMPTS} box enlargements", check=check
        )

    def _extrapolate(self, energies: Sequence[float]) -> Tuple[float, float]:
        if self.config.richardson:
            coarse = (4.0 * energies[1] - energies[0]) / 3.0
            fine = (4.0 * energies[2] - energies[1]) / 3.0
            error = abs(fine - coarse)
        else:
            fine = energies[-1]
            error = abs(energies[-1] - energies[-2]) / 3.0
        return fine, max(error, EPSILON * max(1.0, abs(fine)))

    def solve(self) -> Eigenresult:
        r_max, intervals = self.size_box()
        cfg = self.config

        depth = 3 if cfg.richardson else 2
        energies = [
            self._level(r_max, intervals * 2 ** k)[0] for k in range(depth)
        ]
        energy, error = self._extrapolate(energies)
        while error > cfg.tolerance:
            finest = intervals * 2 ** depth
            if finest - 1 > cfg.max_grid_points:
                raise ConvergenceError(
                    f"estimated error {error:.3g} still exceeds tolerance "
                    f"{cfg.tolerance:g} at {intervals * 2 ** (depth - 1) - 1} "
                    f"mesh points",
                    check="refinement",
                )
            intervals *= 2
            logger.debug(
                f"{self.spec.label()} {self.qn}: error {error:.3g} > "
                f"{cfg.tolerance:g}, refining to {finest - 1} mesh points."
            )
            energies = energies[1:] + [self._level(r_max, finest)[0]]
            energy, error = self._extrapolate(energies)

        finest = intervals * 2 ** (depth - 1)
        _, u = self._level(r_max, finest, with_vector=True)
        node_count = self.count_nodes(u)  # type: ignore[arg-type]
        if node_count != self.qn.n - 1:
            raise ConsistencyError(
                f"eigenfunction has {node_count} nodes, expected {self.qn.n - 1}",
                check="nodes",
            )

        config_used = dataclasses.replace(
            cfg, grid_points=finest - 1, r_min=r_max / finest, r_max=r_max
        )
        return Eigenresult(
            energy=energy,
            node_count=node_count,
            config_used=config_used,
            estimated_error=error,
        )


def solve_eigenvalue(
    spec: PotentialSpec, qn: QuantumNumbers, cfg: Optional[SolverConfig] = None
) -> Eigenresult:
    """Computes the n-th eigenvalue in the ℓ subspace of `-μΔ + vV`.

    Args:
        spec: The potential, including the kinetic coefficient μ and coupling v.
        qn: The level to solve for.
        cfg: Solver settings, the defaults if omitted.

    Returns:
        The extrapolated eigenvalue with its error estimate and node count.

    Raises:
        ConvergenceError: if the level can not be resolved within `cfg`.
        ConsistencyError: if the eigenfunction has the wrong number of nodes.
    """
    cfg = cfg or SolverConfig()
    try:
        result = RadialProblem(spec, qn, cfg).solve()
    except SolverError as e:
        raise e.annotate((qn.n, qn.ell))

    logger.debug(
        f"{spec.label()} {qn}: E={result.energy:.12g} "
        f"(±{result.estimated_error:.2g}, {result.config_used.grid_points} points, "
        f"r_max={result.config_used.r_max:.4g})."
    )
    return result


def _check_monotone(table: SpectrumTable, n_max: int, ell_max: int) -> None:
    # energies rise with n at fixed ell, and with ell at fixed n
    pairs = [
        ((n, ell), (n + 1, ell))
        for ell in range(ell_max + 1)
        for n in range(1, n_max)
    ]
    pairs += [
        ((n, ell), (n, ell + 1))
        for n in range(1, n_max + 1)
        for ell in range(ell_max)
    ]
    for (n, ell), (n_up, ell_up) in pairs:
        lower, upper = table.energy(n, ell), table.energy(n_up, ell_up)
        if not upper > lower:
            raise ConsistencyError(
                f"E({n_up},{ell_up})={upper:.12g} does not exceed "
                f"E({n},{ell})={lower:.12g}",
                check="ordering",
                level=(n_up, ell_up),
            )


def solve_spectrum(
    spec: PotentialSpec,
    n_max: int,
    ell_max: int,
    cfg: Optional[SolverConfig] = None,
    workers: Optional[int] = None,
) -> SpectrumTable:
    """Solves every level with 1 <= n <= n_max and 0 <= ℓ <= ell_max.

    Levels are independent and are solved on `workers` threads (see
    `utils.number_of_workers`).
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}.")
    if ell_max < 0:
        raise DomainError(f"ell_max must be non-negative, got {ell_max}.")

    cfg = cfg or SolverConfig()
    levels = [
        QuantumNumbers(n, ell)
        for ell in range(ell_max + 1)
        for n in range(1, n_max + 1)
    ]
    worker_count = number_of_workers(workers)
    logger.info(
        f"Solving {len(levels)} levels of {spec.label()} on {worker_count} "
        f"worker(s)."
    )

    if worker_count > 1:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            solved = list(pool.map(lambda qn: solve_eigenvalue(spec, qn, cfg), levels))
    else:
        solved = [solve_eigenvalue(spec, qn, cfg) for qn in levels]

    table = SpectrumTable(
        spec=spec,
        results={(qn.n, qn.ell): result for qn, result in zip(levels, solved)},
    )
    _check_monotone(table, n_max, ell_max)
    return table
