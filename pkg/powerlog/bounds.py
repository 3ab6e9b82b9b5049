"""One-sided energy bounds from the envelope of tangential potentials.

If the target potential is a smooth transformation `V = g(U)` of a base
potential with known spectrum, each tangent `α(t)U + β(t)` of g lies on one
side of V. Optimising the spectrum of the tangents over the contact point t
gives an upper bound when g is concave and a lower bound when g is convex.
Monotonicity of P in q gives a second, simpler bracket.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Text, Tuple

import numpy as np
from scipy import optimize

from powerlog import airy, potentials, prep
from powerlog.constants import (
    AIRY_MAX_ZERO_INDEX,
    NODES,
    Q_MAX,
    Q_MIN,
    TANGENT_GRID_SIZE,
    TANGENT_LOG_T_RANGE,
    TANGENT_XATOL,
)
from powerlog.exceptions import DomainError, NumericalError
from powerlog.interp import PDataset
from powerlog.potentials import PotentialSpec, QuantumNumbers
from powerlog.radial_solver import SolverConfig, solve_eigenvalue

logger = logging.getLogger(__name__)


class Convexity(str, enum.Enum):
    CONCAVE = "concave"
    CONVEX = "convex"
    LINEAR = "linear"


class BoundSide(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    EXACT = "exact"


SIDE_OF_CONVEXITY = {
    Convexity.CONCAVE: BoundSide.UPPER,
    Convexity.CONVEX: BoundSide.LOWER,
    Convexity.LINEAR: BoundSide.EXACT,
}


def convexity(base: PotentialSpec, target: PotentialSpec) -> Convexity:
    """Shape of g in `target = g(base)`; the log counts as exponent 0."""
    if target.exponent > base.exponent:
        return Convexity.CONVEX
    if target.exponent < base.exponent:
        return Convexity.CONCAVE
    return Convexity.LINEAR


@dataclass(frozen=True)
class TangentBoundProblem:
    """Bound the spectrum of `-μΔ + v·target` through tangents to `target(base)`.

    Only the shapes of `base` and `target` matter; the kinetic coefficient and
    coupling are taken from `target` (`coupling` is its v).
    """

    base: PotentialSpec
    target: PotentialSpec
    convexity: Convexity
    coupling: float

    @classmethod
    def create(
        cls,
        base: PotentialSpec,
        target: PotentialSpec,
        side: Optional[Text] = None,
    ) -> "TangentBoundProblem":
        shape = convexity(base, target)
        if side is not None and BoundSide(side) != SIDE_OF_CONVEXITY[shape]:
            raise DomainError(
                f"{target.label()} is {shape.value} in {base.label()}, so its "
                f"tangents give a {SIDE_OF_CONVEXITY[shape].value} bound, not a "
                f"{side} bound."
            )
        return cls(
            base=base.bare(), target=target, convexity=shape, coupling=target.v
        )

    @property
    def side(self) -> BoundSide:
        return SIDE_OF_CONVEXITY[self.convexity]

    def slope(self, t: float) -> float:
        """α(t) = V'(t) / U'(t) for the bare potentials."""
        return potentials.derivative(self.target.bare(), t) / potentials.derivative(
            self.base, t
        )

    def intercept(self, t: float) -> float:
        """β(t) = V(t) - α(t) U(t) for the bare potentials."""
        return potentials.evaluate(self.target.bare(), t) - self.slope(
            t
        ) * potentials.evaluate(self.base, t)


def base_energy(
    base: PotentialSpec, qn: QuantumNumbers, cfg: Optional[SolverConfig] = None
) -> float:
    """Bare eigenvalue of the base potential, in closed form where one exists."""
    base = base.bare()
    q = base.exponent
    if not base.is_log and q in (-1.0, 2.0):
        return prep.exact_energy(q, qn)
    if not base.is_log and q == 1.0 and qn.ell == 0 and qn.n <= AIRY_MAX_ZERO_INDEX:
        return airy.linear_s_state_energy(qn.n)
    return solve_eigenvalue(base, qn, cfg).energy


def tangent_bound(
    problem: TangentBoundProblem,
    qn: QuantumNumbers,
    cfg: Optional[SolverConfig] = None,
) -> float:
    """Optimised tangential-potential bound on the target eigenvalue.

    For a concave transformation this is `min_t {E_U(vα(t)) + vβ(t)}`, an upper
    bound; for a convex one the maximum over t, a lower bound. A linear
    transformation returns the exact eigenvalue.

    Raises:
        NumericalError: if the optimum can not be bracketed in the search range.
    """
    bare = base_energy(problem.base, qn, cfg)
    mu, v = problem.target.mu, problem.coupling

    if problem.convexity == Convexity.LINEAR:
        return potentials.scale_eigenvalue(problem.target, bare)

    def bound(s: float) -> float:
        t = math.exp(s)
        coupling = v * problem.slope(t)
        inner = potentials.scale_eigenvalue(problem.base.with_scale(mu, coupling), bare)
        return inner + v * problem.intercept(t)

    sign = 1.0 if problem.side == BoundSide.UPPER else -1.0

    def objective(s: float) -> float:
        return sign * bound(s)

    grid = np.linspace(*TANGENT_LOG_T_RANGE, TANGENT_GRID_SIZE)
    values = np.array([objective(s) for s in grid])
    best = int(np.argmin(values))
    if best in (0, len(grid) - 1):
        raise NumericalError(
            f"The tangent bound for {problem.target.label()} from "
            f"{problem.base.label()} at {qn} has no interior optimum for "
            f"ln t in {TANGENT_LOG_T_RANGE}."
        )

    result = optimize.minimize_scalar(
        objective,
        bounds=(grid[best - 1], grid[best + 1]),
        method="bounded",
        options={"xatol": TANGENT_XATOL},
    )
    if not result.success:
        raise NumericalError(f"Tangent bound refinement failed: {result.message}")

    logger.debug(
        f"Tangent bound {problem.target.label()} <- {problem.base.label()} {qn}: "
        f"{problem.side.value} {bound(result.x):.10g} at t={math.exp(result.x):.6g}."
    )
    return bound(float(result.x))


def _enclosing_nodes(q_target: float, exact_only: bool) -> Tuple[float, float]:
    if exact_only or q_target == 0:
        return -1.0, 2.0
    upper_index = next(i for i, node in enumerate(NODES) if node > q_target)
    return NODES[upper_index - 1], NODES[upper_index]


def _node_p(node: float, qn: QuantumNumbers, data: Optional[PDataset]) -> float:
    if node in (-1.0, 2.0):
        return prep.exact_p(node, qn)
    if data is None:
        raise DomainError(
            f"The bracket at node q={node:g} needs P data; pass a dataset or "
            f"use the exact nodes only."
        )
    return data.row(qn.n, qn.ell).at_node(node)


def monotone_p_bounds(
    q_target: float,
    qn: QuantumNumbers,
    data: Optional[PDataset] = None,
    exact_only: bool = False,
) -> Tuple[float, float]:
    """Brackets the eigenvalue at q_target between the energies of node P values.

    P grows with q and, at fixed q, the energy grows with P, so the P values of
    the nodes just below and above q_target bound the eigenvalue. For the log
    potential (q_target = 0) and with `exact_only` the closed-form nodes -1
    and 2 are used.

    Returns:
        `(lower, upper)`; both equal the exact energy at a node.
    """
    if not Q_MIN <= q_target <= Q_MAX:
        raise DomainError(
            f"q_target={q_target} is outside the node hull [{Q_MIN:g}, {Q_MAX:g}]."
        )

    exact_node = q_target in (-1.0, 2.0)
    if exact_node or (q_target in NODES and q_target != 0 and not exact_only):
        energy = prep.energy_from_p(q_target, _node_p(q_target, qn, data))
        return energy, energy

    lower_node, upper_node = _enclosing_nodes(q_target, exact_only)
    lower = prep.energy_from_p(q_target, _node_p(lower_node, qn, data))
    upper = prep.energy_from_p(q_target, _node_p(upper_node, qn, data))
    return lower, upper
