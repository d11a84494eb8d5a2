"""Exact Bellman operators and their smoothed variants."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from ..ext import INF, ext_add, ext_mul
from ..mdp import Mdp

_ZERO = Fraction(0)
_ONE = Fraction(1)


def expected(m: Mdp, s: int, a: int, x: Sequence):
    total = _ZERO
    for t, p in m.transitions[s][a]:
        total = ext_add(total, ext_mul(p, x[t]))
    return total


def _opt_part(m: Mdp, opt: str, T: frozenset, x: Sequence) -> List:
    pick = min if opt == "min" else max
    return [
        _ZERO if s in T else pick(expected(m, s, a, x) for a in m.enabled(s))
        for s in range(m.n_states)
    ]


class ReachOperator:
    """``x -> 1`` on T, opt over actions of the expected successor value elsewhere."""

    def __init__(self, m: Mdp, opt: str, T: Iterable[int]):
        if opt not in ("min", "max"):
            raise ValueError(f"opt must be 'min' or 'max', not {opt!r}")
        self.m, self.opt, self.T = m, opt, frozenset(T)

    def opt_part(self, x: Sequence) -> List:
        return [_ONE if s in self.T else v for s, v in enumerate(_opt_part(self.m, self.opt, self.T, x))]

    def __call__(self, x: Sequence) -> List:
        return self.opt_part(x)


class RewardOperator:
    """``x -> 0`` on T, ``rew(s)`` plus opt over actions elsewhere (absorbing infinity)."""

    def __init__(self, m: Mdp, opt: str, T: Iterable[int], rew: Optional[Sequence] = None):
        if opt not in ("min", "max"):
            raise ValueError(f"opt must be 'min' or 'max', not {opt!r}")
        self.m, self.opt, self.T = m, opt, frozenset(T)
        self.rew = tuple(Fraction(r) for r in (m.reward_vector() if rew is None else rew))

    def opt_part(self, x: Sequence) -> List:
        return _opt_part(self.m, self.opt, self.T, x)

    def __call__(self, x: Sequence) -> List:
        return [
            _ZERO if s in self.T else ext_add(self.rew[s], v)
            for s, v in enumerate(self.opt_part(x))
        ]


def bellman_reach(m: Mdp, opt: str, T: Iterable[int], x: Sequence) -> List:
    return ReachOperator(m, opt, T)(x)


def bellman_reward(m: Mdp, opt: str, T: Iterable[int], rew: Optional[Sequence], x: Sequence) -> List:
    return RewardOperator(m, opt, T, rew)(x)


def smooth_step(base, gamma, x: Sequence) -> List:
    """``gamma * x + (1 - gamma) * base(x)``, componentwise.

    The blend keeps the fixed points of ``base`` and (co-)inductivity transfers
    both ways.  Note that the reward is scaled by ``1 - gamma`` together with
    the rest of ``base(x)``; leaving it unscaled would move the fixed point.
    """
    gamma = Fraction(gamma)
    if not 0 <= gamma < 1:
        raise ValueError("gamma must lie in [0, 1)")
    y = base(x)
    if gamma == 0:
        return list(y)
    om = 1 - gamma
    return [ext_add(ext_mul(gamma, xv), ext_mul(om, yv)) for xv, yv in zip(x, y)]


def is_coinductive(op, x: Sequence) -> Optional[int]:
    """First state where ``x <= op(x)`` fails, or ``None``."""
    for s, (xv, yv) in enumerate(zip(x, op(x))):
        if xv > yv:
            return s
    return None


def is_inductive(op, x: Sequence) -> Optional[int]:
    """First state where ``op(x) <= x`` fails, or ``None``."""
    for s, (xv, yv) in enumerate(zip(x, op(x))):
        if yv > xv:
            return s
    return None


__all__ = [
    "INF",
    "ReachOperator",
    "RewardOperator",
    "bellman_reach",
    "bellman_reward",
    "smooth_step",
    "expected",
    "is_coinductive",
    "is_inductive",
]
