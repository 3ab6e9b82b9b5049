"""The power-law and logarithmic potential family.

The bare problems are `-Δ + sgn(q) r^q` and `-Δ + ln r`; the general
Hamiltonian `-μΔ + v V(r)` is reduced to them by exact scaling laws.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Text

import numpy as np

from powerlog.constants import Q_MAX, Q_MIN
from powerlog.exceptions import DomainError

logger = logging.getLogger(__name__)


class PotentialKind(str, enum.Enum):
    POWER = "power"
    LOG = "log"


@dataclass(frozen=True)
class PotentialSpec:
    """A member of the power/log family with kinetic coefficient and coupling.

    Use the `power` and `log` constructors rather than building it by hand.
    """

    kind: PotentialKind
    q: Optional[float] = None
    mu: float = 1.0
    v: float = 1.0

    def __post_init__(self) -> None:
        if self.kind == PotentialKind.POWER:
            if self.q is None:
                raise DomainError("A power potential needs an exponent q.")
            if self.q == 0:
                raise DomainError(
                    "q = 0 is not a power exponent, use PotentialSpec.log() for "
                    "the logarithmic potential."
                )
            if not Q_MIN <= self.q <= Q_MAX:
                raise DomainError(
                    f"Power exponent q={self.q} is outside [{Q_MIN:g}, {Q_MAX:g}]."
                )
        elif self.q is not None:
            raise DomainError("The logarithmic potential takes no exponent.")
        if not self.mu > 0:
            raise DomainError(
                f"The kinetic coefficient must be positive, got {self.mu}."
            )
        if not self.v > 0:
            raise DomainError(f"The coupling must be positive, got {self.v}.")

    @classmethod
    def power(cls, q: float, mu: float = 1.0, v: float = 1.0) -> "PotentialSpec":
        return cls(PotentialKind.POWER, float(q), float(mu), float(v))

    @classmethod
    def log(cls, mu: float = 1.0, v: float = 1.0) -> "PotentialSpec":
        return cls(PotentialKind.LOG, None, float(mu), float(v))

    @classmethod
    def from_exponent(
        cls, q: float, mu: float = 1.0, v: float = 1.0
    ) -> "PotentialSpec":
        """Family member at exponent q, where q = 0 stands for the log potential."""
        if q == 0:
            return cls.log(mu, v)
        return cls.power(q, mu, v)

    @property
    def is_log(self) -> bool:
        return self.kind == PotentialKind.LOG

    @property
    def exponent(self) -> float:
        """The position of the potential on the q axis (0 for the log case)."""
        return 0.0 if self.q is None else self.q

    @property
    def is_confining(self) -> bool:
        return self.exponent >= 0

    @property
    def is_bare(self) -> bool:
        return self.mu == 1.0 and self.v == 1.0

    def bare(self) -> "PotentialSpec":
        """The same potential with μ = v = 1."""
        return PotentialSpec(self.kind, self.q)

    def with_scale(self, mu: float = 1.0, v: float = 1.0) -> "PotentialSpec":
        return PotentialSpec(self.kind, self.q, float(mu), float(v))

    def label(self) -> Text:
        if self.is_log:
            return "log"
        return f"power(q={self.q:g})"


@dataclass(frozen=True)
class QuantumNumbers:
    """The pair (n, ℓ) labelling a level within an angular-momentum subspace."""

    n: int
    ell: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"n must be at least 1, got {self.n}.")
        if self.ell < 0:
            raise DomainError(f"ell must be non-negative, got {self.ell}.")

    @property
    def degeneracy(self) -> int:
        return 2 * self.ell + 1

    def __str__(self) -> Text:
        return f"({self.n},{self.ell})"


def _check_radius(r: float) -> None:
    if not r > 0:
        raise DomainError(f"The radius must be positive, got r={r}.")


def evaluate(spec: PotentialSpec, r: float) -> float:
    """Returns `v sgn(q) r^q` for power potentials and `v ln r` for the log."""
    _check_radius(r)
    if spec.is_log:
        return spec.v * math.log(r)
    return spec.v * math.copysign(r ** spec.q, spec.q)


def derivative(spec: PotentialSpec, r: float) -> float:
    """Returns V'(r); positive everywhere for every member of the family."""
    _check_radius(r)
    if spec.is_log:
        return spec.v / r
    return spec.v * abs(spec.q) * r ** (spec.q - 1.0)


def effective_potential(spec: PotentialSpec, ell: int, r: float) -> float:
    """Returns `μ ℓ(ℓ+1)/r² + V(r)`, the potential of the reduced radial problem."""
    _check_radius(r)
    if ell < 0:
        raise DomainError(f"ell must be non-negative, got {ell}.")
    return spec.mu * ell * (ell + 1) / r ** 2 + evaluate(spec, r)


def effective_potential_on_grid(
    spec: PotentialSpec, ell: int, r: np.ndarray
) -> np.ndarray:
    """Vectorised `effective_potential` for a mesh of positive radii."""
    centrifugal = spec.mu * ell * (ell + 1) / r ** 2
    if spec.is_log:
        return centrifugal + spec.v * np.log(r)
    return centrifugal + spec.v * np.sign(spec.q) * np.power(r, spec.q)


def scale_eigenvalue(spec: PotentialSpec, bare_energy: float) -> float:
    """Maps an eigenvalue of the μ = v = 1 problem onto `-μΔ + vV`.

    Args:
        spec: The scaled problem; its kind and exponent select the bare problem.
        bare_energy: An eigenvalue of the bare problem.

    Returns:
        `μ (v/μ)^(2/(2+q)) E` for power potentials and
        `v E - ½ v ln(v/μ)` for the log potential.
    """
    ratio = spec.v / spec.mu
    if spec.is_log:
        return spec.v * bare_energy - 0.5 * spec.v * math.log(ratio)
    return spec.mu * ratio ** (2.0 / (2.0 + spec.q)) * bare_energy
