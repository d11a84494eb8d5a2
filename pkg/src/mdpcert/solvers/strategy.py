"""Reading memoryless deterministic strategies off exact value vectors.

Greedy choice alone is not enough: inside end components every internal
action is greedy, and picking one can loop forever.  Among the greedy
actions we therefore prefer those that make progress towards a goal set,
measured by the distance fixed point of the greedy sub-MDP.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from ..ext import INF
from ..graph import avoid_forever, mec_decomposition
from ..mdp import Mdp, make_absorbing
from ..ranking import decreasing_actions, fixed_point_distance, increasing_actions
from .config import Objective
from .reduction import positive_states, zero_sets


def _best_by_rank(m: Mdp, s: int, acts: Sequence[int], r: Sequence) -> int:
    return min(acts, key=lambda a: (min(r[t] for t, _ in m.transitions[s][a]), a))


def progress_strategy(m: Mdp, allowed, goal: Iterable[int]) -> List[int]:
    """Per state, the allowed action whose best successor is closest to ``goal``.

    States without allowed actions fall back to all enabled actions; ties go
    to the lowest action index.
    """
    goal = frozenset(goal)
    sub = tuple(allowed[s] if s not in goal else () for s in range(m.n_states))
    r = fixed_point_distance(m, "min", goal, sub)
    return [
        _best_by_rank(m, s, allowed[s] or tuple(m.enabled(s)), r) for s in range(m.n_states)
    ]


def _escape_to(m: Mdp, sigma: List[int], states: Iterable[int], trap: frozenset, T) -> None:
    """Route ``states`` towards ``trap`` (T absorbing) with positive probability."""
    r = fixed_point_distance(make_absorbing(m, T), "min", trap)
    for s in states:
        if s not in trap:
            sigma[s] = _best_by_rank(m, s, tuple(m.enabled(s)), r)


def optimal_strategy(m: Mdp, obj: Objective, x: Sequence) -> List[int]:
    """An optimal strategy given the exact optimal values ``x``."""
    T = obj.target
    n = m.n_states
    S = frozenset(range(n))
    if obj.kind == "P":
        if obj.opt == "min":
            return [next(iter(a), 0) for a in decreasing_actions(m, x)]
        return progress_strategy(m, increasing_actions(m, x), T)

    rew = m.reward_vector()
    if obj.opt == "min":
        goal = T if obj.semantics == "inf" else zero_sets(m, "min", T, "rho") | T
        return progress_strategy(m, decreasing_actions(m, x, rew), goal)

    if obj.semantics == "inf":
        sigma = progress_strategy(m, increasing_actions(m, x, rew), T)
        inf = [s for s in range(n) if x[s] == INF]
        if inf:
            trap = avoid_forever(m, S - T)
            for s in trap:
                sigma[s] = next(a for a, d in enumerate(m.transitions[s]) if all(t in trap for t, _ in d))
            _escape_to(m, sigma, inf, trap, T)
        return sigma

    zero = zero_sets(m, "max", T, "rho") | T
    sigma = progress_strategy(m, increasing_actions(m, x, rew), zero)
    inf = [s for s in range(n) if x[s] == INF]
    if inf:
        pos = positive_states(m, T)
        hot, internal = set(), {}
        for states, acts in mec_decomposition(m, within=S - T).components:
            if states & pos:
                hot |= states
                internal.update(acts)
        sub = tuple(tuple(sorted(internal[s])) if s in hot else () for s in range(n))
        hot_pos = frozenset(hot & pos)
        r = fixed_point_distance(m, "min", hot_pos, sub)
        for s in hot:
            sigma[s] = _best_by_rank(m, s, sub[s], r)
        _escape_to(m, sigma, inf, frozenset(hot), T)
    return sigma
