"""Extended nonnegative numbers: exact rationals or naturals plus infinity.

Infinity is represented by ``math.inf``.  It compares correctly against
``Fraction`` and ``int`` and absorbs addition.  The only rule Python gets
wrong for our purposes is ``0 * inf`` (NaN), so multiplication goes through
:func:`ext_mul`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

#: A nonnegative exact rational, or ``INF``.
ExtValue = Union[Fraction, float]
#: A natural number, or ``INF``.
ExtNat = Union[int, float]

LESS, EQUAL, GREATER = -1, 0, 1


def is_inf(v) -> bool:
    return v == INF


def ext_add(a, b):
    if a == INF or b == INF:
        return INF
    return a + b


def ext_mul(p, v):
    """Product with the convention ``0 * inf = 0`` and ``p * inf = inf``."""
    if v == INF:
        return INF if p > 0 else Fraction(0)
    if p == INF:
        return INF if v > 0 else Fraction(0)
    return p * v


def compare_ext(a, b) -> int:
    """Three-way comparison in the extended order; returns -1, 0 or 1."""
    if a == b:
        return EQUAL
    return LESS if a < b else GREATER


def to_ext_value(v) -> ExtValue:
    """Normalize ``v`` to a ``Fraction`` or ``INF``; floats are converted exactly."""
    if v == INF:
        return INF
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float) and not math.isfinite(v):
        raise ValueError(f"not an extended value: {v!r}")
    return Fraction(v)


def parse_rat(token: str) -> Fraction:
    """Parse ``num/den`` or a decimal literal exactly.

    >>> parse_rat("1/3")
    Fraction(1, 3)
    >>> parse_rat("0.1")
    Fraction(1, 10)
    """
    token = token.strip()
    if not token:
        raise ValueError("empty rational")
    try:
        v = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {token!r}") from exc
    return v


def parse_ext(token: str) -> ExtValue:
    if token.strip() == "inf":
        return INF
    return parse_rat(token)


def parse_ext_nat(token: str) -> ExtNat:
    token = token.strip()
    if token == "inf":
        return INF
    if not token.isdigit():
        raise ValueError(f"malformed rank {token!r}")
    return int(token)


def format_ext(v) -> str:
    """Render as ``num/den``, an integer, or ``inf``; lossless."""
    if v == INF:
        return "inf"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
