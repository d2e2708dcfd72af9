from fractions import Fraction

import pytest

from orthoforms.constants import Q_SCALE
from orthoforms.qseries import QSeries, bernoulli, eisenstein, eta_power, format_exponent, sigma


def test_sigma_and_bernoulli():
    assert sigma(3, 4) == 73
    assert sigma(0, 12) == 6
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_eta_is_euler_pentagonal():
    eta = eta_power(1, Q_SCALE * 9)
    got = {(k - 1) // Q_SCALE: v for k, v in eta.coeffs.items()}
    assert got == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1}


def test_discriminant_coefficients():
    delta = eta_power(24, Q_SCALE * 5)
    assert [delta[Q_SCALE * n] for n in range(1, 5)] == [1, -24, 252, -1472]


def test_eisenstein_normalization():
    e4 = eisenstein(4, Q_SCALE * 4)
    assert e4[0] == 1
    assert e4[Q_SCALE] == 240
    assert eisenstein(6, Q_SCALE * 2)[Q_SCALE] == -504


def test_e4_squared_is_e8():
    e4 = eisenstein(4, Q_SCALE * 6)
    assert e4 * e4 == eisenstein(8, Q_SCALE * 6)


def test_eisenstein_rejects_odd_weight():
    with pytest.raises(ValueError):
        eisenstein(3)


def test_product_precision_follows_valuations():
    a = QSeries({Q_SCALE: Fraction(1)}, 2 * Q_SCALE)
    b = QSeries.one(2 * Q_SCALE)
    assert (a * b).prec == 2 * Q_SCALE
    assert (a * a).prec == 3 * Q_SCALE


@pytest.mark.parametrize(
    "scaled, text",
    [(0, ""), (24, "q"), (48, "q^2"), (12, "q^(1/2)"), (1, "q^(1/24)")],
)
def test_format_exponent(scaled, text):
    assert format_exponent(scaled) == text


def test_str_shows_truncation():
    assert str(QSeries.one(Q_SCALE)) == "1 + O(q)"
