"""Qualitative pre-analysis shared by policy and interval iteration.

Every objective is reduced to the same shape: a working MDP (the input or
an end-component quotient of it), a set of states whose value is known from
graph analysis alone, and the remaining free states on which the Bellman
equation has a unique solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..ext import INF
from ..graph import (
    MecPartition,
    can_reach,
    collapse_mecs,
    mec_decomposition,
    prob0_states,
    prob1_states,
)
from ..mdp import Mdp, make_absorbing
from .config import Objective

_ZERO, _ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class Reduction:
    objective: Objective
    original: Mdp
    work: Mdp
    lift: Tuple[int, ...]
    origin: Optional[Tuple]
    fixed: Dict[int, object]
    free: Tuple[int, ...]
    rew: Tuple[Fraction, ...]

    def lift_values(self, w) -> list:
        return [w[q] for q in self.lift]

    def goal(self) -> frozenset:
        """Fixed states with a finite value."""
        return frozenset(q for q, v in self.fixed.items() if v != INF)

    def infinite(self) -> frozenset:
        return frozenset(q for q, v in self.fixed.items() if v == INF)


def positive_states(m: Mdp, T) -> frozenset:
    """States outside T carrying positive reward (target rewards are never collected)."""
    return frozenset(s for s in range(m.n_states) if s not in T and m.reward(s) > 0)


def zero_sets(m: Mdp, opt: str, T, semantics: str) -> frozenset:
    """States whose optimal expected reward is 0."""
    T = frozenset(T)
    pos = positive_states(m, T)
    if semantics == "rho":
        return prob0_states(make_absorbing(m, T), opt, pos)
    if opt == "min":
        return prob1_states(make_absorbing(m, pos), "max", T)
    finite = prob1_states(m, "min", T)
    return finite - can_reach(m, pos, avoid=T)


def infinite_states(m: Mdp, opt: str, T, semantics: str) -> frozenset:
    """States whose optimal expected reward is infinite."""
    T = frozenset(T)
    S = frozenset(range(m.n_states))
    if semantics == "inf":
        return S - prob1_states(m, "max" if opt == "min" else "min", T)
    if opt == "min":
        return S - prob1_states(m, "max", zero_sets(m, "min", T, "rho"))
    pos = positive_states(m, T)
    mecs = mec_decomposition(m, within=S - T)
    hot = set()
    for states, _ in mecs.components:
        if states & pos:
            hot |= states
    return can_reach(m, hot, avoid=T) if hot else frozenset()


def _identity(m: Mdp, obj: Objective, fixed: Dict[int, object], rew) -> Reduction:
    free = tuple(s for s in range(m.n_states) if s not in fixed)
    return Reduction(obj, m, m, tuple(range(m.n_states)), None, fixed, free, tuple(rew))


def _collapsed(m: Mdp, obj: Objective, part: MecPartition, fixed_orig: Dict[int, object], rew) -> Reduction:
    col = collapse_mecs(m, part, obj.target)
    fixed = {}
    for q, members in enumerate(col.members):
        vals = {fixed_orig[s] for s in members if s in fixed_orig}
        if vals:
            if len(vals) != 1 or any(s not in fixed_orig for s in members):
                raise AssertionError("end component straddles value classes")
            fixed[q] = vals.pop()
    qrew = tuple(max(rew[s] for s in members) for members in col.members)
    free = tuple(q for q in range(col.mdp.n_states) if q not in fixed)
    return Reduction(obj, m, col.mdp, col.lift, col.origin, fixed, free, qrew)


def reduce_problem(m: Mdp, obj: Objective) -> Reduction:
    T = obj.target
    n = m.n_states
    S = frozenset(range(n))
    if obj.kind == "P":
        zero = prob0_states(m, obj.opt, T)
        one = prob1_states(m, obj.opt, T) | T
        fixed = {s: _ONE for s in one}
        fixed.update({s: _ZERO for s in zero})
        rew = (_ZERO,) * n
        if obj.opt == "min":
            return _identity(m, obj, fixed, rew)
        return _collapsed(m, obj, mec_decomposition(m), fixed, rew)

    rew = m.reward_vector()
    inf = infinite_states(m, obj.opt, T, obj.semantics)
    zero = zero_sets(m, obj.opt, T, obj.semantics) | T
    assert not (inf & zero), "zero and infinite classes overlap"
    fixed = {s: INF for s in inf}
    fixed.update({s: _ZERO for s in zero})
    free = S - inf - zero
    if obj.opt == "max" and obj.semantics == "inf":
        return _identity(m, obj, fixed, rew)
    flat = frozenset(s for s in free if rew[s] == 0)
    part = mec_decomposition(m, within=flat)
    if not part.components:
        return _identity(m, obj, fixed, rew)
    return _collapsed(m, obj, part, fixed, rew)
