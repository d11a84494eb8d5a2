import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mdpcert.solvers.rounding import DOWN, NEAREST, UP, add_dir, mul_dir, round_directed, to_float


def test_round_directed_examples():
    assert round_directed(Fraction(1, 3), "down", 4) == Fraction(5, 16)
    assert round_directed(Fraction(1, 3), "up", 4) == Fraction(11, 32)
    assert round_directed(Fraction(1, 2), "down", 53) == Fraction(1, 2)
    assert round_directed(Fraction(0), "up", 8) == 0


def test_round_directed_rejects_bad_input():
    with pytest.raises(ValueError):
        round_directed(Fraction(1, 3), "sideways")
    with pytest.raises(ValueError):
        round_directed(Fraction(-1, 3), "up")
    with pytest.raises(ValueError):
        round_directed(Fraction(1, 3), "up", 1)


positive = st.fractions(min_value=0, max_value=10 ** 6, max_denominator=10 ** 6)


@given(positive, st.integers(2, 80))
def test_round_directed_brackets(v, bits):
    lo = round_directed(v, "down", bits)
    hi = round_directed(v, "up", bits)
    assert lo <= v <= hi
    if lo != hi:
        # adjacent representable values: one unit in the last place apart
        assert hi - lo <= hi / 2 ** (bits - 1)
    for r in (lo, hi):
        if r:
            num = r.numerator
            while num % 2 == 0:
                num //= 2
            assert num.bit_length() <= bits


@given(positive)
def test_53_bits_matches_float_conversion(v):
    assert round_directed(v, "down", 53) == Fraction(to_float(v, DOWN))
    assert round_directed(v, "up", 53) == Fraction(to_float(v, UP))


finite = st.floats(min_value=0, max_value=1e300, allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_add_dir_is_direction_correct(a, b):
    exact = Fraction(a) + Fraction(b)
    lo, hi = add_dir(a, b, DOWN), add_dir(a, b, UP)
    if math.isfinite(hi):
        assert Fraction(lo) <= exact <= Fraction(hi)
        assert math.nextafter(lo, math.inf) >= hi


@given(st.floats(min_value=0, max_value=1e150), st.floats(min_value=0, max_value=1e150))
def test_mul_dir_is_direction_correct(a, b):
    exact = Fraction(a) * Fraction(b)
    lo, hi = mul_dir(a, b, DOWN), mul_dir(a, b, UP)
    assert Fraction(lo) <= exact <= Fraction(hi)
    assert mul_dir(a, b, NEAREST) == a * b


def test_tiny_products_step_outwards():
    a = b = 2.0 ** -600  # the product underflows to zero
    assert mul_dir(a, b, DOWN) == 0.0
    assert mul_dir(a, b, UP) > 0.0
