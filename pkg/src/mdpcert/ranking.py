"""Distance operators, their fixed points, and action filters.

Rank vectors are lists of ``int`` or ``INF``.  An action filter is a tuple
giving, per state, the tuple of allowed local action indices.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .ext import INF, ext_add, ext_mul
from .mdp import Mdp

ActionFilter = Tuple[Tuple[int, ...], ...]


class EmptyFilterError(ValueError):
    """Raised when a non-target state has no allowed action."""

    def __init__(self, state: int, name: str):
        self.state = state
        super().__init__(f"no inductive action at state {name}")


def _opt_fn(opt: str):
    if opt == "min":
        return min
    if opt == "max":
        return max
    raise ValueError(f"opt must be 'min' or 'max', not {opt!r}")


def full_filter(m: Mdp) -> ActionFilter:
    return tuple(tuple(m.enabled(s)) for s in range(m.n_states))


def _actions(m: Mdp, allowed: Optional[ActionFilter], s: int) -> Sequence[int]:
    return m.enabled(s) if allowed is None else allowed[s]


def apply_distance_op(
    m: Mdp, opt: str, T: Iterable[int], r: Sequence, allowed: Optional[ActionFilter] = None
) -> List:
    """One application of the distance operator (optionally over filtered actions)."""
    pick = _opt_fn(opt)
    T = frozenset(T)
    out = []
    for s in range(m.n_states):
        if s in T:
            out.append(0)
            continue
        acts = _actions(m, allowed, s)
        if not acts:
            raise EmptyFilterError(s, m.state_name(s))
        best = pick(min(r[t] for t, _ in m.transitions[s][a]) for a in acts)
        out.append(ext_add(1, best))
    return out


def _filtered_predecessors(m: Mdp, allowed: Optional[ActionFilter]):
    if allowed is None:
        return m.predecessors
    pre = [set() for _ in range(m.n_states)]
    for s in range(m.n_states):
        for a in allowed[s]:
            for t, _ in m.transitions[s][a]:
                pre[t].add(s)
    return [sorted(p) for p in pre]


def fixed_point_distance(
    m: Mdp, opt: str, T: Iterable[int], allowed: Optional[ActionFilter] = None
) -> List:
    """Unique fixed point of the distance operator by FIFO propagation from T.

    Ranks are assigned once, in nondecreasing order; finite ranks are never
    overwritten.
    """
    pick = _opt_fn(opt)
    T = frozenset(T)
    r: List = [INF] * m.n_states
    queue = deque()
    for s in sorted(T):
        r[s] = 0
        queue.append(s)
    pre = _filtered_predecessors(m, allowed)
    while queue:
        hat = queue.popleft()
        for s in pre[hat]:
            if r[s] != INF:
                continue
            acts = _actions(m, allowed, s)
            tmp = ext_add(1, pick(min(r[t] for t, _ in m.transitions[s][a]) for a in acts))
            if tmp == r[hat] + 1:
                r[s] = tmp
                queue.append(s)
    return r


def _complementary_value(m: Mdp, pick, s: int, r: Sequence, acts: Sequence[int]):
    vals = []
    for a in acts:
        succ = [r[t] for t, _ in m.transitions[s][a]]
        lo = min(succ)
        uneven = any(v != succ[0] for v in succ)
        vals.append(ext_add(lo, 1 if uneven else 0))
    return pick(vals)


def apply_complementary_op(
    m: Mdp, opt: str, T: Iterable[int], r: Sequence, allowed: Optional[ActionFilter] = None
) -> List:
    """One application of the complementary distance operator."""
    pick = _opt_fn(opt)
    T = frozenset(T)
    out = []
    for s in range(m.n_states):
        if s in T:
            out.append(INF)
            continue
        acts = _actions(m, allowed, s)
        if not acts:
            raise EmptyFilterError(s, m.state_name(s))
        out.append(_complementary_value(m, pick, s, r, acts))
    return out


def lfp_complementary(m: Mdp, opt: str, T: Iterable[int]) -> List:
    """Least fixed point of the complementary operator.

    Starts at ``INF`` exactly on the almost-sure set for ``opt`` and 0
    elsewhere, then propagates increases through predecessors.
    """
    from .graph import prob1_states

    pick = _opt_fn(opt)
    T = frozenset(T)
    sure = prob1_states(m, opt, T)
    r: List = [INF if s in sure else 0 for s in range(m.n_states)]
    queue = deque(sorted(sure))
    pre = m.predecessors
    while queue:
        hat = queue.popleft()
        for s in pre[hat]:
            if s in T:
                continue
            tmp = _complementary_value(m, pick, s, r, m.enabled(s))
            if tmp != r[s]:
                r[s] = tmp
                queue.append(s)
    return r


def _expected(m: Mdp, s: int, a: int, x: Sequence):
    total = Fraction(0)
    for t, p in m.transitions[s][a]:
        total = ext_add(total, ext_mul(p, x[t]))
    return total


def increasing_actions(m: Mdp, x: Sequence, rew: Optional[Sequence] = None) -> ActionFilter:
    """Actions with ``x(s) <= rew(s) + sum P x`` (``rew`` defaults to zero)."""
    out = []
    for s in range(m.n_states):
        base = Fraction(0) if rew is None else rew[s]
        out.append(
            tuple(a for a in m.enabled(s) if x[s] <= ext_add(base, _expected(m, s, a, x)))
        )
    return tuple(out)


def decreasing_actions(m: Mdp, x: Sequence, rew: Optional[Sequence] = None) -> ActionFilter:
    """Actions with ``x(s) >= rew(s) + sum P x``."""
    out = []
    for s in range(m.n_states):
        base = Fraction(0) if rew is None else rew[s]
        out.append(
            tuple(a for a in m.enabled(s) if x[s] >= ext_add(base, _expected(m, s, a, x)))
        )
    return tuple(out)


def strategy_filter(sigma: Sequence[int]) -> ActionFilter:
    return tuple((a,) for a in sigma)


def first_empty(m: Mdp, allowed: ActionFilter, T: Iterable[int]) -> Optional[int]:
    T = frozenset(T)
    for s in range(m.n_states):
        if s not in T and not allowed[s]:
            return s
    return None


def restricted_distance_fp(m: Mdp, allowed: ActionFilter, T: Iterable[int]) -> List:
    """Distance fixed point (opt = min) of the sub-MDP keeping only filtered actions.

    Target states may have an empty filter since their rank is 0 regardless.
    """
    T = frozenset(T)
    bad = first_empty(m, allowed, T)
    if bad is not None:
        raise EmptyFilterError(bad, m.state_name(bad))
    return fixed_point_distance(m, "min", T, allowed)
