"""Certificate generation: solve, read off ranks and strategies, re-check."""

from __future__ import annotations

from typing import List, Optional

from ..ext import INF
from ..graph import can_reach, negate
from ..mdp import Mdp, induced_dtmc, make_absorbing
from ..ranking import (
    decreasing_actions,
    fixed_point_distance,
    increasing_actions,
    lfp_complementary,
)
from ..solvers.config import Objective, SolverConfig, SolverError
from ..solvers.iteration import interval_iteration
from ..solvers.policy import policy_iteration_exact
from ..solvers.reduction import positive_states, zero_sets
from ..solvers.strategy import optimal_strategy
from .check import Verdict, check_certificate
from .model import Certificate, CertificateError, Query


class CertificateGenerationError(RuntimeError):
    """The generated certificate failed its own validity check."""

    def __init__(self, message: str, verdict: Optional[Verdict] = None):
        super().__init__(message)
        self.verdict = verdict


def objective_for(m: Mdp, q: Query) -> Objective:
    try:
        T = m.label(q.target)
    except KeyError as e:
        raise CertificateError(str(e.args[0])) from e
    return Objective.parse(q.objective, T, q.semantics or "inf")


def _values(m: Mdp, obj: Objective, cfg: SolverConfig):
    if cfg.method == "pi":
        x, _ = policy_iteration_exact(m, obj)
        return list(x), list(x)
    bp = interval_iteration(m, obj, cfg)
    return list(bp.lower), list(bp.upper)


def build_certificate(m: Mdp, q: Query, x, obj: Objective) -> Certificate:
    """Attach ranks, witness strategy and zero set to a value vector for ``q.bound``."""
    T = obj.target
    rew = m.reward_vector()
    x = tuple(x)
    meta = {}
    if q.objective.startswith("P"):
        if q.bound == "upper":
            return Certificate(q, x, meta=meta)
        if q.opt == "min":
            return Certificate(q, x, r=tuple(fixed_point_distance(m, "max", T)), meta=meta)
        r = fixed_point_distance(m, "min", T, increasing_actions(m, x))
        return Certificate(q, x, r=tuple(r), meta=meta)

    if q.semantics == "inf":
        if q.bound == "lower":
            return Certificate(q, x, r=tuple(lfp_complementary(m, negate(q.opt), T)), meta=meta)
        if q.opt == "max":
            return Certificate(q, x, r=tuple(fixed_point_distance(m, "max", T)), meta=meta)
        r = fixed_point_distance(m, "min", T, decreasing_actions(m, x, rew))
        return Certificate(q, x, r=tuple(r), meta=meta)

    if q.bound == "upper":
        return Certificate(q, x, meta=meta)
    pos = positive_states(m, T)
    if q.opt == "min":
        tin = zero_sets(m, "min", T, "rho") | T
        r1 = lfp_complementary(m, "max", tin)
        r2 = fixed_point_distance(make_absorbing(m, T), "max", pos)
        return Certificate(q, x, r=tuple(r1), r2=tuple(r2), tin=frozenset(tin), meta=meta)
    sigma = optimal_strategy(m, obj, x)
    d = induced_dtmc(m, sigma)
    tin = (frozenset(range(m.n_states)) - can_reach(d, pos, avoid=T)) | T
    r1 = lfp_complementary(d, "max", tin)
    r2 = fixed_point_distance(make_absorbing(d, T), "max", pos)
    return Certificate(q, x, r=tuple(r1), r2=tuple(r2), sigma=tuple(sigma), tin=tin, meta=meta)


def generate_certificate(m: Mdp, q: Query, cfg: Optional[SolverConfig] = None) -> Certificate:
    """One certificate for ``q.bound`` (``lower`` or ``upper``).

    Never returns an invalid certificate: a failed self-check raises
    :class:`CertificateGenerationError`; solver failures propagate as
    :class:`SolverError`.
    """
    return generate_certificates(m, q, cfg)[0]


def generate_certificates(m: Mdp, q: Query, cfg: Optional[SolverConfig] = None) -> List[Certificate]:
    """Certificates for every bound direction ``q`` asks for (lower first)."""
    cfg = cfg or SolverConfig()
    obj = objective_for(m, q)
    lower, upper = _values(m, obj, cfg)
    bounds = ["lower", "upper"] if q.bound == "both" else [q.bound]
    out = []
    for b in bounds:
        qb = q.with_bound(b)
        c = build_certificate(m, qb, lower if b == "lower" else upper, obj)
        c.meta.update({
            "generator": "mdpcert",
            "method": cfg.method,
            "rounding": cfg.rounding if cfg.method == "ii" else "exact",
            "gamma": str(cfg.effective_gamma) if cfg.method == "ii" else "-",
        })
        verdict = check_certificate(m, c, obj.target)
        if not verdict.valid:
            f = verdict.failures[0]
            raise CertificateGenerationError(
                f"generated {b} certificate is invalid: {f.condition} at state {m.state_name(f.state)}",
                verdict,
            )
        out.append(c)
    return out
