"""Directed rounding, both as exact rational emulation and for IEEE doubles.

The float helpers give direction-correct results for the four operations the
sweeps need.  The exact error of a sum comes from Knuth's TwoSum and the
error of a product from Dekker's TwoProduct; when a product is so small that
the error term could itself underflow we step conservatively by one ulp.
"""

from __future__ import annotations

import math
from fractions import Fraction

DOWN, NEAREST, UP = -1, 0, 1

# Below this magnitude Dekker's error term is not guaranteed exact.
TINY = 2.0 ** -969
_SPLIT = 134217729.0  # 2**27 + 1


def round_directed(v: Fraction, direction: str, bits: int = 53) -> Fraction:
    """Round ``v >= 0`` to a binary rational with at most ``bits`` significant bits.

    >>> round_directed(Fraction(1, 3), "down", 4)
    Fraction(5, 16)
    >>> round_directed(Fraction(1, 3), "up", 4)
    Fraction(11, 32)
    """
    if bits < 2:
        raise ValueError("precision_bits must be at least 2")
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be 'down' or 'up', not {direction!r}")
    v = Fraction(v)
    if v < 0:
        raise ValueError("round_directed expects a nonnegative value")
    if v == 0:
        return v
    num, den = v.numerator, v.denominator
    # e = floor(log2 v)
    e = num.bit_length() - den.bit_length()
    if (num << max(0, -e)) < (den << max(0, e)):
        e -= 1
    shift = bits - 1 - e
    scaled_num = num << shift if shift >= 0 else num
    scaled_den = den if shift >= 0 else den << -shift
    q, r = divmod(scaled_num, scaled_den)
    if r and direction == "up":
        q += 1
    return Fraction(q) / Fraction(2) ** shift if shift >= 0 else Fraction(q * 2 ** -shift)


def to_float(v: Fraction, direction: int) -> float:
    """Nearest double to ``v`` on the requested side (``DOWN``/``NEAREST``/``UP``)."""
    if v == math.inf:
        return math.inf
    f = float(v)
    if direction == NEAREST or math.isinf(f):
        if math.isinf(f) and direction == DOWN:
            return math.nextafter(f, 0.0)
        return f
    exact = Fraction(f)
    if direction == DOWN and exact > v:
        f = math.nextafter(f, -math.inf)
    elif direction == UP and exact < v:
        f = math.nextafter(f, math.inf)
    return f


def _two_sum_err(a: float, b: float, s: float) -> float:
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def add_dir(a: float, b: float, direction: int) -> float:
    s = a + b
    if direction == NEAREST or not math.isfinite(s):
        return s
    err = _two_sum_err(a, b, s)
    if direction == DOWN and err < 0:
        return math.nextafter(s, -math.inf)
    if direction == UP and err > 0:
        return math.nextafter(s, math.inf)
    return s


def _split(a: float):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def mul_dir(a: float, b: float, direction: int) -> float:
    """Product of nonnegative doubles rounded in ``direction``."""
    p = a * b
    if direction == NEAREST or not math.isfinite(p):
        return p
    if a == 0.0 or b == 0.0:
        return p
    if p < TINY:
        if direction == DOWN:
            return max(0.0, math.nextafter(p, -math.inf))
        return math.nextafter(p, math.inf)
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    if direction == DOWN and err < 0:
        return math.nextafter(p, -math.inf)
    if direction == UP and err > 0:
        return math.nextafter(p, math.inf)
    return p
