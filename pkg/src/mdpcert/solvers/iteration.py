"""Value iteration and interval iteration on floats, re-verified exactly.

Sweeps run in doubles (or, for ``precision_bits != 53``, in an exact
emulation of a shorter significand).  Whatever comes out is converted to
rationals and checked against the exact Bellman operator before it is
returned, so a float artefact can never leak out as a bound.
"""

from __future__ import annotations

import math
from array import array
from fractions import Fraction
from typing import List, Optional

from ..ext import INF
from ..mdp import Mdp
from ..ranking import fixed_point_distance
from . import kernels
from .bellman import ReachOperator, RewardOperator, is_coinductive, is_inductive
from .config import BoundPair, FloatingPointBreakage, IterationCapExceeded, SolverConfig, SolverError
from .policy import as_objective
from .reduction import Reduction, reduce_problem
from .rounding import DOWN, NEAREST, UP, to_float

# Keep the float convergence test a hair stricter than the exact one.
_EPS_MARGIN = 1 - 2.0 ** -20
_MAX_BOUND = 1e300


def _operator(m: Mdp, obj, W: Optional[Mdp] = None, T=None, rew=None):
    W = m if W is None else W
    T = obj.target if T is None else T
    if obj.kind == "P":
        return ReachOperator(W, obj.opt, T)
    return RewardOperator(W, obj.opt, T, rew)


def reward_upper_bound(red: Reduction) -> List:
    """A finite inductive upper start on the working MDP (free states only; fixed keep their value).

    Uses the visit-count recurrence: with ``d`` the distance of a free state
    to the finite fixed states and ``p`` the smallest relevant transition
    probability, ``u = R * (g(0) - g(d))`` where ``g(M) = 0`` and
    ``g(k - 1) = (g(k) + 2) / p``.  Every relevant action then satisfies
    ``rew + sum P u <= u - R``.
    """
    W = red.work
    free = set(red.free)
    goal = red.goal()
    if red.objective.opt == "min":
        bad = red.infinite()
        allowed = tuple(
            tuple(a for a, dist in enumerate(W.transitions[q]) if not any(t in bad for t, _ in dist))
            if q in free else ()
            for q in range(W.n_states)
        )
        d = fixed_point_distance(W, "min", goal, allowed)
        chosen = {
            q: [min(allowed[q], key=lambda a: (min(d[t] for t, _ in W.transitions[q][a]), a))]
            for q in free
        }
    else:
        d = fixed_point_distance(W, "max", goal)
        chosen = {q: list(W.enabled(q)) for q in free}
    vals = [red.fixed.get(q) for q in range(W.n_states)]
    if not free:
        return vals
    if any(d[q] == INF for q in free):
        raise SolverError("free state without a finite distance to the fixed states")
    p = min(pr for q in free for a in chosen[q] for _, pr in W.transitions[q][a])
    M = max(d[q] for q in free)
    R = max(red.rew[q] for q in free) or Fraction(1)
    g = [Fraction(0)] * (M + 1)
    for k in range(M, 0, -1):
        g[k - 1] = (g[k] + 2) / p
        if g[k - 1] > _MAX_BOUND:
            raise SolverError("reward upper bound exceeds the float range")
    for q in free:
        vals[q] = R * (g[0] - g[d[q]])
    return vals


def _floats(vals, direction) -> array:
    return array("d", (math.inf if v == INF else to_float(v, direction) for v in vals))


def _exact(xs) -> list:
    return [INF if v == math.inf else Fraction(v) for v in xs]


def _gamma_parts(gamma: Fraction, safe: bool):
    g = to_float(gamma, NEAREST)
    om = 1 - Fraction(g)
    return g, to_float(om, DOWN if safe else NEAREST), to_float(om, UP if safe else NEAREST)


def interval_iteration(m: Mdp, objective, cfg: Optional[SolverConfig] = None, target=None,
                       semantics: str = "inf") -> BoundPair:
    """Two-sided bounds from lower and upper value iteration on the reduced problem.

    Raises :class:`FloatingPointBreakage` if the float vectors fail the exact
    (co-)inductivity check and :class:`IterationCapExceeded` if the gap does
    not close within ``cfg.max_sweeps``.
    """
    cfg = cfg or SolverConfig(method="ii")
    obj = as_objective(m, objective, target, semantics)
    red = reduce_problem(m, obj)
    W = red.work
    safe = cfg.rounding == "safe"
    gamma = cfg.effective_gamma
    smooth = gamma > 0

    lo_exact = [red.fixed.get(q, Fraction(0)) for q in range(W.n_states)]
    if obj.kind == "P":
        hi_exact = [red.fixed.get(q, Fraction(1)) for q in range(W.n_states)]
    else:
        hi_exact = reward_upper_bound(red)
        if is_inductive(_operator(m, obj, W, _reduced_target(red), red.rew), _exact(_floats(hi_exact, UP))) is not None:
            raise SolverError("computed reward upper bound is not inductive after rounding")

    pk = kernels.pack(W, red.rew, red.free, safe)
    eps = to_float(cfg.epsilon, DOWN) * _EPS_MARGIN
    is_max = obj.opt == "max"
    if cfg.precision_bits == 53:
        lo, hi = _floats(lo_exact, DOWN), _floats(hi_exact, UP)
        g, om_lo, om_hi = _gamma_parts(gamma, safe)
        sweeps, ok = kernels.active().interval_sweeps(
            pk.act_ptr, pk.tr_ptr, pk.succ, pk.p_lo, pk.p_hi, pk.rew_lo, pk.rew_hi, pk.free,
            lo, hi, is_max, g, om_lo, g, om_hi, smooth, safe, eps, cfg.max_sweeps,
        )
        lo, hi = _exact(lo), _exact(hi)
    else:
        bits = cfg.precision_bits
        g = kernels._round(gamma, NEAREST, bits)
        om_lo = kernels._round(1 - g, DOWN if safe else NEAREST, bits)
        om_hi = kernels._round(1 - g, UP if safe else NEAREST, bits)
        lo = [kernels._round(v, DOWN, bits) for v in lo_exact]
        hi = [kernels._round(v, UP, bits) for v in hi_exact]
        sweeps, ok = kernels.emulated_interval_sweeps(
            pk, lo, hi, is_max, g, om_lo, om_hi, smooth, safe, Fraction(eps), cfg.max_sweeps, bits
        )
    if not ok:
        raise IterationCapExceeded(f"interval iteration did not converge within {cfg.max_sweeps} sweeps")

    lower, upper = red.lift_values(lo), red.lift_values(hi)
    verify_pair(m, obj, lower, upper)
    return BoundPair(tuple(lower), tuple(upper), sweeps,
                     {"backend": kernels.backend_name(), "gamma": gamma, "rounding": cfg.rounding})


def _reduced_target(red: Reduction) -> frozenset:
    return frozenset(red.lift[s] for s in red.objective.target)


def verify_pair(m: Mdp, obj, lower, upper) -> None:
    op = _operator(m, obj)
    s = is_coinductive(op, lower)
    if s is not None:
        raise FloatingPointBreakage("lower", s)
    s = is_inductive(op, upper)
    if s is not None:
        raise FloatingPointBreakage("upper", s)
    for s, (a, b) in enumerate(zip(lower, upper)):
        if a > b:
            raise FloatingPointBreakage("lower", s, "lower exceeds upper")


def value_iteration(m: Mdp, objective, frm: str = "below", cfg: Optional[SolverConfig] = None,
                    target=None, semantics: str = "inf", start=None) -> list:
    """Plain (optionally smoothed and directed-rounded) value iteration on ``m`` itself.

    No qualitative pre-analysis happens here; iterating from above on
    max-reachability needs an end-component-free model.  For rewards from
    above, ``start`` defaults to the bound used by interval iteration.
    """
    cfg = cfg or SolverConfig()
    if frm not in ("below", "above"):
        raise ValueError("frm must be 'below' or 'above'")
    obj = as_objective(m, objective, target, semantics)
    T = obj.target
    n = m.n_states
    free = [s for s in range(n) if s not in T]
    tval = Fraction(1) if obj.kind == "P" else Fraction(0)
    if start is not None:
        x0 = [Fraction(v) if v != INF else INF for v in start]
    elif frm == "below":
        x0 = [tval if s in T else Fraction(0) for s in range(n)]
    elif obj.kind == "P":
        x0 = [Fraction(1)] * n
    else:
        red = reduce_problem(m, obj)
        x0 = red.lift_values(reward_upper_bound(red))
    for s in T:
        x0[s] = tval
    safe = cfg.rounding == "safe"
    direction = (DOWN if frm == "below" else UP) if safe else NEAREST
    gamma = cfg.effective_gamma
    rew = [Fraction(0)] * n if obj.kind == "P" else list(m.reward_vector())
    pk = kernels.pack(m, rew, free, safe)
    eps = to_float(cfg.epsilon, DOWN)
    if cfg.precision_bits == 53:
        x = _floats(x0, direction)
        g, om_lo, om_hi = _gamma_parts(gamma, safe)
        prob = pk.p_lo if direction == DOWN else pk.p_hi
        rw = pk.rew_lo if direction == DOWN else pk.rew_hi
        sweeps, ok = kernels.active().vi_sweeps(
            pk.act_ptr, pk.tr_ptr, pk.succ, prob, rw, pk.free, x, obj.opt == "max",
            g, om_hi if direction == UP else om_lo, gamma > 0, direction, eps, cfg.max_sweeps,
        )
        x = _exact(x)
    else:
        bits = cfg.precision_bits
        g = kernels._round(gamma, NEAREST, bits)
        om = kernels._round(1 - g, direction, bits)
        x = [kernels._round(v, direction, bits) for v in x0]
        sweeps, ok = kernels.emulated_vi_sweeps(
            pk, x, obj.opt == "max", g, om, gamma > 0, direction, Fraction(eps), cfg.max_sweeps, bits
        )
    if not ok:
        raise IterationCapExceeded(f"value iteration did not converge within {cfg.max_sweeps} sweeps")
    return x
