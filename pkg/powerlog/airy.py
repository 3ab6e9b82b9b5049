"""Airy function Ai, its negative zeros and the linear-potential S-states.

Ai is summed from its Maclaurin series on the central interval and from the
standard asymptotic expansions outside it; zeros are polished with Newton's
method from their asymptotic estimate. The module serves as an oracle that
does not depend on the radial solver.
"""

import functools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from scipy import optimize

from powerlog.constants import (
    AIRY_MAX_ARGUMENT,
    AIRY_MAX_ZERO_INDEX,
    AIRY_SERIES_LOWER,
    AIRY_SERIES_UPPER,
)
from powerlog.exceptions import DomainError, NumericalError

logger = logging.getLogger(__name__)

# Ai(0) and -Ai'(0)
AI_0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AI_PRIME_0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))

MAX_SERIES_TERMS = 400
MAX_ASYMPTOTIC_TERMS = 60
EPSILON = 2.0 ** -53


@dataclass(frozen=True)
class AiryZero:
    index: int
    location: float


def _series(x: float) -> Tuple[float, float]:
    """Ai(x) and Ai'(x) from the two auxiliary Maclaurin series."""
    x3 = x * x * x
    # f = Σ 3^k (1/3)_k x^3k / (3k)!,  g = Σ 3^k (2/3)_k x^(3k+1) / (3k+1)!
    f_term, g_term = 1.0, x
    f_sum, g_sum = f_term, g_term
    # derivatives: f' starts at x²/2, g' at 1
    df_term, dg_term = 0.5 * x * x, 1.0
    df_sum, dg_sum = df_term, dg_term
    for k in range(1, MAX_SERIES_TERMS):
        f_term *= x3 / ((3 * k - 1) * (3 * k))
        g_term *= x3 / ((3 * k) * (3 * k + 1))
        dg_term *= x3 / ((3 * k) * (3 * k - 2))
        if k > 1:
            df_term *= x3 / ((3 * k - 1) * (3 * k - 3))
            df_sum += df_term
        f_sum += f_term
        g_sum += g_term
        dg_sum += dg_term
        scale = abs(f_sum) + abs(g_sum) + abs(df_sum) + abs(dg_sum)
        if (
            abs(f_term) + abs(g_term) + abs(df_term) + abs(dg_term)
            <= EPSILON * scale
        ):
            break
    value = AI_0 * f_sum + AI_PRIME_0 * g_sum
    slope = AI_0 * df_sum + AI_PRIME_0 * dg_sum
    return value, slope


@functools.lru_cache(maxsize=1)
def _asymptotic_coefficients() -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    u = [1.0]
    for k in range(1, MAX_ASYMPTOTIC_TERMS):
        u.append(
            u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        )
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, len(u))]
    return tuple(u), tuple(v)


def _truncated(coefficients, zeta: float, alternate_in_pairs: bool, start: int = 0):
    """Sums an asymptotic series up to its smallest term."""
    total = 0.0
    previous = math.inf
    sign = 1.0
    for k in range(start, len(coefficients), 2 if alternate_in_pairs else 1):
        term = coefficients[k] / zeta ** k
        if abs(term) > previous:
            break
        total += sign * term
        previous = abs(term)
        sign = -sign
        if abs(term) < EPSILON * abs(total):
            break
    return total


def _asymptotic_positive(x: float) -> Tuple[float, float]:
    u, v = _asymptotic_coefficients()
    zeta = 2.0 / 3.0 * x ** 1.5
    decay = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    value = decay / x ** 0.25 * _truncated(u, zeta, alternate_in_pairs=False)
    slope = -decay * x ** 0.25 * _truncated(v, zeta, alternate_in_pairs=False)
    return value, slope


def _asymptotic_negative(x: float) -> Tuple[float, float]:
    u, v = _asymptotic_coefficients()
    z = -x
    zeta = 2.0 / 3.0 * z ** 1.5
    phase = zeta - math.pi / 4.0
    cos_phase, sin_phase = math.cos(phase), math.sin(phase)
    amplitude = 1.0 / math.sqrt(math.pi)
    value = (
        amplitude
        / z ** 0.25
        * (
            cos_phase * _truncated(u, zeta, alternate_in_pairs=True)
            + sin_phase * _truncated(u, zeta, alternate_in_pairs=True, start=1)
        )
    )
    slope = (
        amplitude
        * z ** 0.25
        * (
            sin_phase * _truncated(v, zeta, alternate_in_pairs=True)
            - cos_phase * _truncated(v, zeta, alternate_in_pairs=True, start=1)
        )
    )
    return value, slope


def _airy(x: float) -> Tuple[float, float]:
    if AIRY_SERIES_LOWER <= x <= AIRY_SERIES_UPPER:
        return _series(x)
    if x > AIRY_SERIES_UPPER:
        return _asymptotic_positive(x)
    return _asymptotic_negative(x)


def _check_argument(x: float) -> None:
    if not abs(x) <= AIRY_MAX_ARGUMENT:
        raise DomainError(
            f"Ai is only supported for |x| <= {AIRY_MAX_ARGUMENT:g}, got x={x}."
        )


def airy_ai(x: float) -> float:
    """Evaluates the Airy function Ai(x) for |x| <= 25."""
    _check_argument(x)
    return _airy(x)[0]


def airy_ai_prime(x: float) -> float:
    """Evaluates the derivative Ai'(x) for |x| <= 25."""
    _check_argument(x)
    return _airy(x)[1]


def zero_estimate(k: int) -> float:
    """Asymptotic estimate of the k-th zero, used to seed Newton's method."""
    t = 3.0 * math.pi * (4 * k - 1) / 8.0
    return -(t ** (2.0 / 3.0)) * (1.0 + 5.0 / 48.0 / t ** 2)


@functools.lru_cache(maxsize=AIRY_MAX_ZERO_INDEX)
def airy_zero(k: int) -> AiryZero:
    """Returns the k-th negative zero a_k of Ai, 1 <= k <= 20."""
    if not 1 <= k <= AIRY_MAX_ZERO_INDEX:
        raise DomainError(
            f"Airy zeros are supported for 1 <= k <= {AIRY_MAX_ZERO_INDEX}, got k={k}."
        )

    seed = zero_estimate(k)
    try:
        location = optimize.newton(
            airy_ai, seed, fprime=airy_ai_prime, tol=1e-13, maxiter=50
        )
    except RuntimeError as e:
        raise NumericalError(f"Newton iteration for the Airy zero {k} failed: {e}")

    logger.debug(f"Airy zero a_{k} = {location:.12f} (seed {seed:.6f}).")
    return AiryZero(index=k, location=float(location))


def linear_s_state_energy(n: int) -> float:
    """The n-th eigenvalue of `-u'' + r u = E u` with u(0) = 0, i.e. `-a_n`."""
    return -airy_zero(n).location
