"""The P-representation of the power and log spectra.

Every eigenvalue is written as `E = min_{r>0} {P²/r² + V(r)}` for a single
positive number P. For the power and log potentials the minimum has a closed
form, so E and P convert into each other exactly.
"""

import logging
import math
from dataclasses import dataclass
from typing import NewType

from scipy import optimize

from powerlog import potentials
from powerlog.constants import ENVELOPE_XATOL, Q_MAX, Q_MIN
from powerlog.exceptions import DomainError, NumericalError
from powerlog.potentials import PotentialSpec, QuantumNumbers

logger = logging.getLogger(__name__)

PValue = NewType("PValue", float)

# ½ ln(2e), the energy of the log potential at P = 1
LOG_ENERGY_OFFSET = 0.5 * math.log(2.0 * math.e)

MAX_BRACKET_STEPS = 200


@dataclass(frozen=True)
class EnvelopeMinimum:
    r_star: float
    energy: float


def _check_p(p: float) -> PValue:
    if not p > 0:
        raise DomainError(f"P must be positive, got {p}.")
    return PValue(float(p))


def _check_power_exponent(q: float) -> None:
    if q == 0:
        raise DomainError(
            "q = 0 is the logarithmic potential, use energy_from_p_log / "
            "p_from_energy_log instead."
        )
    if not Q_MIN <= q <= Q_MAX:
        raise DomainError(f"q={q} is outside [{Q_MIN:g}, {Q_MAX:g}].")


def energy_from_p_power(q: float, p: float) -> float:
    """Returns `sgn(q) (q/2 + 1) (2P²/|q|)^(q/(q+2))`."""
    _check_power_exponent(q)
    p = _check_p(p)
    magnitude = (q / 2.0 + 1.0) * (2.0 * p * p / abs(q)) ** (q / (q + 2.0))
    return math.copysign(magnitude, q)


def p_from_energy_power(q: float, e: float) -> PValue:
    """Inverts `energy_from_p_power` in closed form.

    Raises:
        DomainError: if the energy does not carry the sign of q.
    """
    _check_power_exponent(q)
    reduced = e / math.copysign(q / 2.0 + 1.0, q)
    if not reduced > 0:
        raise DomainError(
            f"Energy {e} is not attainable for q={q}: power potentials with "
            f"{'positive' if q > 0 else 'negative'} q only have "
            f"{'positive' if q > 0 else 'negative'} eigenvalues."
        )
    return PValue(math.sqrt(0.5 * abs(q) * reduced ** ((q + 2.0) / q)))


def energy_from_p_log(p: float) -> float:
    """Returns `ln((2e)^½ P)`."""
    p = _check_p(p)
    return LOG_ENERGY_OFFSET + math.log(p)


def p_from_energy_log(e: float) -> PValue:
    """Returns `(2e)^(-½) exp(E)`, the inverse of `energy_from_p_log`."""
    return PValue(math.exp(e - LOG_ENERGY_OFFSET))


def energy_from_p(q: float, p: float) -> float:
    """Energy of P at position q on the family axis (q = 0 is the log)."""
    if q == 0:
        return energy_from_p_log(p)
    return energy_from_p_power(q, p)


def p_from_energy(q: float, e: float) -> PValue:
    """P of an energy at position q on the family axis (q = 0 is the log)."""
    if q == 0:
        return p_from_energy_log(e)
    return p_from_energy_power(q, e)


def exact_p(q: float, qn: QuantumNumbers) -> PValue:
    """The exactly known P numbers of the Coulomb and oscillator problems."""
    if q == -1:
        return PValue(float(qn.n + qn.ell))
    if q == 2:
        return PValue(2.0 * qn.n + qn.ell - 0.5)
    raise DomainError(f"P is only known exactly at q = -1 and q = 2, not q={q}.")


def exact_energy(q: float, qn: QuantumNumbers) -> float:
    """The closed-form Coulomb (`-[2(n+ℓ)]^-2`) or oscillator (`4n+2ℓ-1`) level."""
    return energy_from_p_power(q, exact_p(q, qn))


def _stationarity(p: float, spec: PotentialSpec):
    # r³V'(r) - 2μp² is increasing in r for every member of the family
    target = 2.0 * spec.mu * p * p

    def residual(r: float) -> float:
        return r ** 3 * potentials.derivative(spec, r) - target

    return residual


def _bracket_minimum(p: float, spec: PotentialSpec):
    residual = _stationarity(p, spec)
    lower, upper = 0.5, 2.0
    for _ in range(MAX_BRACKET_STEPS):
        if residual(upper) > 0:
            break
        upper *= 2.0
    else:
        raise NumericalError(f"Could not bracket the envelope minimum for P={p}.")
    for _ in range(MAX_BRACKET_STEPS):
        if residual(lower) < 0:
            break
        lower /= 2.0
    else:
        raise NumericalError(f"Could not bracket the envelope minimum for P={p}.")
    return lower, upper


def minimize_envelope(p: float, spec: PotentialSpec) -> EnvelopeMinimum:
    """Minimises `μP²/r² + vV(r)` over r > 0.

    The minimum is unique because r³V'(r) is monotone for every member of the
    family. It is bracketed on the stationarity condition `2μP²/r³ = V'(r)` and
    located by bounded Brent minimisation.

    Args:
        p: The P number.
        spec: The potential; μ and v do not change the P number.

    Returns:
        The minimising radius and the minimum.
    """
    p = _check_p(p)
    lower, upper = _bracket_minimum(p, spec)

    def envelope(r: float) -> float:
        return spec.mu * p * p / (r * r) + potentials.evaluate(spec, r)

    result = optimize.minimize_scalar(
        envelope,
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": ENVELOPE_XATOL},
    )
    if not result.success:
        raise NumericalError(
            f"Envelope minimisation for P={p} on {spec.label()} failed: "
            f"{result.message}"
        )

    r_star = float(result.x)
    return EnvelopeMinimum(r_star=r_star, energy=envelope(r_star))
