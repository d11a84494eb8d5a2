"""Exact policy iteration over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from ..ext import INF, ext_add, ext_mul
from ..mdp import Mdp, resolve_target
from ..ranking import fixed_point_distance
from .config import Objective, SolverError
from .linalg import SingularMatrix, lu_solve
from .reduction import Reduction, reduce_problem
from .strategy import optimal_strategy


def as_objective(m: Mdp, objective, target=None, semantics: str = "inf") -> Objective:
    if isinstance(objective, Objective):
        return objective
    return Objective.parse(objective, resolve_target(m, "target" if target is None else target), semantics)


def _q_value(W: Mdp, q: int, a: int, rew, vals):
    total = rew[q]
    for t, p in W.transitions[q][a]:
        total = ext_add(total, ext_mul(p, vals[t]))
    return total


def _initial_strategy(red: Reduction) -> dict:
    W = red.work
    bad = red.infinite()
    free = set(red.free)
    allowed = tuple(
        tuple(a for a, d in enumerate(W.transitions[q]) if not any(t in bad for t, _ in d))
        if q in free else ()
        for q in range(W.n_states)
    )
    r = fixed_point_distance(W, "min", red.goal(), allowed)
    sigma = {}
    for q in red.free:
        if not allowed[q] or r[q] == INF:
            raise SolverError(f"no proper initial choice at state {W.state_name(q)}")
        sigma[q] = min(allowed[q], key=lambda a: (min(r[t] for t, _ in W.transitions[q][a]), a))
    return sigma


def _evaluate(red: Reduction, sigma: dict) -> list:
    W = red.work
    pos = {q: i for i, q in enumerate(red.free)}
    A, b = [], []
    for q in red.free:
        row = [Fraction(0)] * len(pos)
        row[pos[q]] += 1
        c = red.rew[q]
        for t, p in W.transitions[q][sigma[q]]:
            if t in pos:
                row[pos[t]] -= p
            else:
                v = red.fixed[t]
                if v == INF:
                    raise SolverError("strategy under evaluation reaches an infinite state")
                c += p * v
        A.append(row)
        b.append(c)
    try:
        sol = lu_solve(A, b)
    except SingularMatrix as e:
        raise SolverError(f"improper strategy during policy iteration: {e}") from e
    vals = [red.fixed.get(q) for q in range(W.n_states)]
    for q, v in zip(red.free, sol):
        vals[q] = v
    return vals


def solve_reduction(red: Reduction) -> Tuple[list, int]:
    """Optimal values on the working MDP and the number of improvement rounds."""
    W = red.work
    vals = [red.fixed.get(q) for q in range(W.n_states)]
    if not red.free:
        return vals, 0
    is_min = red.objective.opt == "min"
    sigma = _initial_strategy(red)
    rounds = 0
    while True:
        vals = _evaluate(red, sigma)
        improved = False
        for q in red.free:
            qs = [_q_value(W, q, a, red.rew, vals) for a in W.enabled(q)]
            best = min(qs) if is_min else max(qs)
            if (best < qs[sigma[q]]) if is_min else (best > qs[sigma[q]]):
                sigma[q] = qs.index(best)
                improved = True
        if not improved:
            return vals, rounds
        rounds += 1


def policy_iteration_exact(m: Mdp, objective, target=None, semantics: str = "inf"):
    """Exact optimal values and an optimal memoryless deterministic strategy.

    ``objective`` is an :class:`Objective` or one of ``Pmin``/``Pmax``/
    ``Emin``/``Emax`` together with ``target`` (label name or state set,
    default label ``target``) and ``semantics``.
    """
    obj = as_objective(m, objective, target, semantics)
    red = reduce_problem(m, obj)
    w, _ = solve_reduction(red)
    x = red.lift_values(w)
    return x, optimal_strategy(m, obj, x)
