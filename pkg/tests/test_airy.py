import pytest
from scipy import special

from powerlog import airy
from powerlog.constants import AIRY_MAX_ZERO_INDEX
from powerlog.exceptions import DomainError


@pytest.mark.parametrize("x", [-25.0, -12.0, -7.6, -7.5, -3.0, 0.0, 1.0, 4.9])
def test_airy_ai_on_the_oscillating_side(x):
    ai, ai_prime, _, _ = special.airy(x)

    assert airy.airy_ai(x) == pytest.approx(ai, abs=1e-9)
    assert airy.airy_ai_prime(x) == pytest.approx(ai_prime, abs=1e-8)


@pytest.mark.parametrize("x", [5.0, 6.0, 8.0, 15.0, 25.0])
def test_airy_ai_on_the_decaying_side(x):
    ai, ai_prime, _, _ = special.airy(x)

    assert airy.airy_ai(x) == pytest.approx(ai, rel=1e-6)
    assert airy.airy_ai_prime(x) == pytest.approx(ai_prime, rel=1e-6)


def test_airy_values_at_the_origin():
    assert airy.airy_ai(0.0) == pytest.approx(0.355028053887817)
    assert airy.airy_ai_prime(0.0) == pytest.approx(-0.258819403792807)


@pytest.mark.parametrize("x", [-25.5, 30.0])
def test_airy_ai_outside_supported_range(x):
    with pytest.raises(DomainError):
        airy.airy_ai(x)


def test_airy_zeros_agree_with_scipy():
    expected = special.ai_zeros(AIRY_MAX_ZERO_INDEX)[0]

    for k in range(1, AIRY_MAX_ZERO_INDEX + 1):
        zero = airy.airy_zero(k)
        assert zero.index == k
        assert zero.location == pytest.approx(expected[k - 1], abs=1e-9)


@pytest.mark.parametrize("k", [0, AIRY_MAX_ZERO_INDEX + 1])
def test_airy_zero_index_out_of_range(k):
    with pytest.raises(DomainError):
        airy.airy_zero(k)


def test_zero_estimate_is_close():
    assert airy.zero_estimate(1) == pytest.approx(-2.33811, abs=1e-2)


@pytest.mark.parametrize(
    "n, expected", [(1, 2.338107410459767), (2, 4.087949444130970)]
)
def test_linear_s_state_energy(n, expected):
    assert airy.linear_s_state_energy(n) == pytest.approx(expected, abs=1e-10)
