from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from highway_pricing.bounds import (
    alpha_root, cut_bound, harmonic_factor, line_random_bound, log_ratio, satisfies,
    single_val_ratio, theorem3_bound, tree_bound,
)


def test_alpha():
    alpha = alpha_root()
    assert round(alpha, 4) == Decimal("0.3824")
    assert abs(3 / alpha - 4 * (1 - alpha.ln())) < Decimal("1e-10")


def test_bracket_has_sign_change():
    h = lambda x: 3 / Decimal(x) - 4 * (1 - Decimal(x).ln())
    assert h("0.3") * h("0.5") < 0


def test_combined_bound_examples():
    assert theorem3_bound(1) == (4, "4(1-ln r)")
    assert theorem3_bound(Fraction(1, 2)) == (6, "3/r")
    b = theorem3_bound(Fraction(1, 4))
    assert b.regime == "4(1-ln r)" and abs(b.ratio - Decimal("9.5451774445")) < Decimal("1e-9")
    assert theorem3_bound(Fraction(3, 5)).regime == "6"
    assert theorem3_bound(Fraction(2, 5)).regime == "3/r"


@pytest.mark.parametrize("r", [0, Fraction(3, 2), -1])
def test_bad_ratio(r):
    with pytest.raises(ValueError):
        theorem3_bound(r)


@given(st.fractions(min_value=Fraction(1, 50), max_value=1))
def test_combined_is_best_of_components(r):
    combined = theorem3_bound(r).ratio
    assert combined <= cut_bound(r).ratio
    assert combined <= line_random_bound(r).ratio


@given(st.integers(1, 30), st.integers(0, 30))
def test_harmonic_factor_below_log(s, extra):
    ell = s + extra
    assert 4 * harmonic_factor(s, ell) <= log_ratio(Fraction(s, ell))


def test_other_ratios():
    assert tree_bound(Fraction(1, 2)).ratio == pytest.approx(Decimal(32) / 3)
    assert single_val_ratio(2) == Fraction(5, 2)
    assert single_val_ratio(4) == 4


def test_satisfies():
    assert satisfies(10, 4, Decimal("2.5"))
    assert not satisfies(10, 3, Decimal("2.5"))
    assert satisfies(10, 3, Decimal("2.5"), slack=1)
