"""Independent certificate checker.

Everything here is exact rational arithmetic written against the model
alone; nothing from the numeric solvers is imported.  Each check evaluates
its conditions state by state and records the first failures as
``(condition, state, lhs, rhs)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from ..ext import INF, ext_add, ext_mul
from ..mdp import Mdp
from .model import Certificate, CertificateError, check_presence, check_shape

MAX_FAILURES = 32

# condition identifiers (one token each, used verbatim in diagnostics)
BELLMAN_DECREASE = "Bellman-decrease"
BELLMAN_INCREASE = "Bellman-increase"
RANK_DECREASE = "rank-decrease"
COMPLEMENT_DECREASE = "complementary-decrease"
POSITIVE_NEEDS_RANK = "positive-needs-rank"
FINITE_NEEDS_RANK = "finite-needs-rank"
INFINITE_NEEDS_RANK = "infinite-needs-rank"
SURE_NEEDS_FINITE = "sure-needs-finite"
ZERO_SET_COVER = "zero-set-cover"
NO_CONSISTENT_STRATEGY = "no-consistent-strategy"
STRATEGY_RANGE = "strategy-range"


@dataclass(frozen=True)
class Failure:
    condition: str
    state: int
    lhs: object
    rhs: object


@dataclass
class Verdict:
    failures: List[Failure] = field(default_factory=list)
    truncated: bool = False

    @property
    def valid(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.valid

    def add(self, cond: str, s: int, lhs, rhs) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(Failure(cond, s, lhs, rhs))
        else:
            self.truncated = True

    def merge(self, other: "Verdict") -> "Verdict":
        for f in other.failures:
            self.add(f.condition, f.state, f.lhs, f.rhs)
        self.truncated = self.truncated or other.truncated
        return self


# per-state evaluation -------------------------------------------------------

def _pick(opt: str):
    if opt == "min":
        return min
    if opt == "max":
        return max
    raise ValueError(f"opt must be 'min' or 'max', not {opt!r}")


def _acts(m: Mdp, s: int, allowed) -> Sequence[int]:
    if allowed is None:
        return range(len(m.transitions[s]))
    return allowed[s]


def _expected(m: Mdp, s: int, a: int, x: Sequence):
    total = Fraction(0)
    for t, p in m.transitions[s][a]:
        total = ext_add(total, ext_mul(p, x[t]))
    return total


def _bellman(m, s, opt, T, x, rew, allowed=None):
    """Reachability (``rew is None``) or reward Bellman value at ``s``."""
    if s in T:
        return Fraction(1) if rew is None else Fraction(0)
    vals = [_expected(m, s, a, x) for a in _acts(m, s, allowed)]
    best = _pick(opt)(vals)
    return best if rew is None else ext_add(rew[s], best)


def _distance(m, s, opt, T, r, allowed=None, blocked=frozenset()):
    """Distance operator at ``s``; an empty action set yields infinity.

    States in ``blocked`` are treated as absorbing non-goals.
    """
    if s in T:
        return 0
    if s in blocked:
        return ext_add(1, r[s])
    acts = _acts(m, s, allowed)
    if not acts:
        return INF
    best = _pick(opt)(min(r[t] for t, _ in m.transitions[s][a]) for a in acts)
    return ext_add(1, best)


def _complementary(m, s, opt, T, r, allowed=None):
    if s in T:
        return INF
    acts = _acts(m, s, allowed)
    if not acts:
        return INF
    vals = []
    for a in acts:
        succ = [r[t] for t, _ in m.transitions[s][a]]
        lo = min(succ)
        vals.append(ext_add(lo, 0 if all(v == succ[0] for v in succ) else 1))
    return _pick(opt)(vals)


def _neg(opt: str) -> str:
    return "max" if opt == "min" else "min"


def _increasing(m, x, rew=None):
    out = []
    for s in range(m.n_states):
        base = Fraction(0) if rew is None else rew[s]
        out.append(tuple(a for a in range(len(m.transitions[s]))
                         if x[s] <= ext_add(base, _expected(m, s, a, x))))
    return tuple(out)


def _decreasing(m, x, rew=None):
    out = []
    for s in range(m.n_states):
        base = Fraction(0) if rew is None else rew[s]
        out.append(tuple(a for a in range(len(m.transitions[s]))
                         if x[s] >= ext_add(base, _expected(m, s, a, x))))
    return tuple(out)


def _single(sigma):
    return tuple((a,) for a in sigma)


# condition scanners -----------------------------------------------------------

def _upper_bellman(v, m, opt, T, x, rew=None, allowed=None):
    for s in range(m.n_states):
        b = _bellman(m, s, opt, T, x, rew, allowed)
        if b > x[s]:
            v.add(BELLMAN_DECREASE, s, b, x[s])


def _lower_bellman(v, m, opt, T, x, rew=None, allowed=None):
    for s in range(m.n_states):
        b = _bellman(m, s, opt, T, x, rew, allowed)
        if x[s] > b:
            v.add(BELLMAN_INCREASE, s, x[s], b)


def _rank_decrease(v, m, opt, T, r, allowed=None, blocked=frozenset()):
    for s in range(m.n_states):
        d = _distance(m, s, opt, T, r, allowed, blocked)
        if d > r[s]:
            v.add(RANK_DECREASE, s, d, r[s])


def _complement_decrease(v, m, opt, T, r, allowed=None):
    for s in range(m.n_states):
        c = _complementary(m, s, opt, T, r, allowed)
        if c > r[s]:
            v.add(COMPLEMENT_DECREASE, s, c, r[s])


def _check_sigma(m: Mdp, sigma) -> Verdict:
    v = Verdict()
    for s, a in enumerate(sigma):
        if not 0 <= a < len(m.transitions[s]):
            v.add(STRATEGY_RANGE, s, a, len(m.transitions[s]))
    return v


def _rewards(m: Mdp, rew):
    return tuple(Fraction(r) for r in (m.reward_vector() if rew is None else rew))


def _pos(m: Mdp, T, rew) -> frozenset:
    return frozenset(s for s in range(m.n_states) if s not in T and rew[s] > 0)


# propositions -------------------------------------------------------------------

def check_reach_upper(m: Mdp, opt: str, T: Iterable[int], x: Sequence) -> Verdict:
    v = Verdict()
    _upper_bellman(v, m, opt, frozenset(T), x)
    return v


def check_positive_reach(m: Mdp, opt: str, T: Iterable[int], r: Sequence) -> Verdict:
    """Finite ``r(s)`` certifies a positive ``opt``-probability of reaching T."""
    v = Verdict()
    _rank_decrease(v, m, _neg(opt), frozenset(T), r)
    return v


def check_non_as_reach(m: Mdp, opt: str, T: Iterable[int], r: Sequence) -> Verdict:
    """Finite ``r(s)`` certifies that T is not reached almost surely under ``opt``."""
    v = Verdict()
    _complement_decrease(v, m, opt, frozenset(T), r)
    return v


def _positive_needs_rank(v, m, T, x, r):
    for s in range(m.n_states):
        if s not in T and x[s] > 0 and r[s] == INF:
            v.add(POSITIVE_NEEDS_RANK, s, x[s], r[s])


def check_reach_lower_min(m: Mdp, T: Iterable[int], x: Sequence, r: Sequence) -> Verdict:
    T = frozenset(T)
    v = Verdict()
    _rank_decrease(v, m, "max", T, r)
    _lower_bellman(v, m, "min", T, x)
    _positive_needs_rank(v, m, T, x, r)
    return v


def check_reach_lower_max(m: Mdp, T: Iterable[int], x: Sequence, r: Sequence) -> Verdict:
    T = frozenset(T)
    v = Verdict()
    _rank_decrease(v, m, "min", T, r, _increasing(m, x))
    _lower_bellman(v, m, "max", T, x)
    _positive_needs_rank(v, m, T, x, r)
    return v


def check_reach_lower_max_witness(m: Mdp, T: Iterable[int], x: Sequence, r: Sequence, sigma) -> Verdict:
    T = frozenset(T)
    v = _check_sigma(m, sigma)
    if not v.valid:
        return v
    only = _single(sigma)
    _rank_decrease(v, m, "min", T, r, only)
    _lower_bellman(v, m, "max", T, x, allowed=only)
    _positive_needs_rank(v, m, T, x, r)
    return v


def check_rew_inf_lower(m: Mdp, opt: str, T: Iterable[int], rew, x: Sequence, r: Sequence) -> Verdict:
    T = frozenset(T)
    rew = _rewards(m, rew)
    v = Verdict()
    _complement_decrease(v, m, _neg(opt), T, r)
    _lower_bellman(v, m, opt, T, x, rew)
    for s in range(m.n_states):
        if x[s] == INF and r[s] == INF:
            v.add(INFINITE_NEEDS_RANK, s, x[s], r[s])
    return v


def _finite_needs_rank(v, m, x, r):
    for s in range(m.n_states):
        if x[s] != INF and r[s] == INF:
            v.add(FINITE_NEEDS_RANK, s, x[s], r[s])


def check_rew_inf_upper_max(m: Mdp, T: Iterable[int], rew, x: Sequence, r: Sequence) -> Verdict:
    T = frozenset(T)
    rew = _rewards(m, rew)
    v = Verdict()
    _rank_decrease(v, m, "max", T, r)
    _upper_bellman(v, m, "max", T, x, rew)
    _finite_needs_rank(v, m, x, r)
    return v


def check_rew_inf_upper_min(m: Mdp, T: Iterable[int], rew, x: Sequence, r: Sequence) -> Verdict:
    T = frozenset(T)
    rew = _rewards(m, rew)
    v = Verdict()
    _rank_decrease(v, m, "min", T, r, _decreasing(m, x, rew))
    _upper_bellman(v, m, "min", T, x, rew)
    _finite_needs_rank(v, m, x, r)
    return v


def check_rew_inf_upper_min_witness(m: Mdp, T: Iterable[int], rew, x: Sequence, r: Sequence, sigma) -> Verdict:
    T = frozenset(T)
    rew = _rewards(m, rew)
    v = _check_sigma(m, sigma)
    if not v.valid:
        return v
    only = _single(sigma)
    _rank_decrease(v, m, "min", T, r, only)
    _upper_bellman(v, m, "min", T, x, rew, only)
    _finite_needs_rank(v, m, x, r)
    return v


def check_rew_rho_upper(m: Mdp, opt: str, T: Iterable[int], rew, x: Sequence) -> Verdict:
    v = Verdict()
    _upper_bellman(v, m, opt, frozenset(T), x, _rewards(m, rew))
    return v


def _rho_common(v, m, T, rew, x, r1, r2, tin, opt, allowed, r2_allowed, r2_opt):
    _complement_decrease(v, m, opt, tin, r1, allowed)
    _lower_bellman(v, m, opt, tin, x, rew, allowed)
    for s in range(m.n_states):
        if r1[s] == INF and x[s] == INF:
            v.add(SURE_NEEDS_FINITE, s, r1[s], x[s])
    # reward collected after T never counts, so T is absorbing for the Pos distance
    _rank_decrease(v, m, r2_opt, _pos(m, T, rew), r2, r2_allowed, blocked=T)
    for s in range(m.n_states):
        if r2[s] == INF and s not in tin:
            v.add(ZERO_SET_COVER, s, r2[s], "notin")


def check_rew_rho_lower_min(m: Mdp, T: Iterable[int], rew, x: Sequence, r1: Sequence,
                            r2: Sequence, tin: Iterable[int]) -> Verdict:
    T, tin = frozenset(T), frozenset(tin)
    v = Verdict()
    _rho_common(v, m, T, _rewards(m, rew), x, r1, r2, tin, "min", None, None, "max")
    return v


def check_rew_rho_lower_max(m: Mdp, T: Iterable[int], rew, x: Sequence, r1: Sequence,
                            r2: Sequence, sigma, tin: Iterable[int]) -> Verdict:
    T, tin = frozenset(T), frozenset(tin)
    v = _check_sigma(m, sigma)
    if not v.valid:
        return v
    only = _single(sigma)
    _rho_common(v, m, T, _rewards(m, rew), x, r1, r2, tin, "max", only, only, "min")
    return v


def _argmax_min(m, s, acts, r):
    if not acts:
        return set()
    scores = {a: min(r[t] for t, _ in m.transitions[s][a]) for a in acts}
    best = max(scores.values())
    return {a for a, sc in scores.items() if sc == best}


def check_rew_rho_lower_max_nostrat(m: Mdp, T: Iterable[int], rew, x: Sequence, r1: Sequence,
                                    r2: Sequence, tin: Iterable[int]) -> Verdict:
    """Literal form: some strategy must pick, in every state, a reward-increasing
    action that is simultaneously an argmax for both ranking functions."""
    T, tin = frozenset(T), frozenset(tin)
    rew = _rewards(m, rew)
    v = Verdict()
    inc = _increasing(m, x, rew)
    for s in range(m.n_states):
        a1 = _argmax_min(m, s, inc[s], r1)
        a2 = _argmax_min(m, s, inc[s], r2)
        if not a1 & a2:
            v.add(NO_CONSISTENT_STRATEGY, s, "-", "-")
    _rho_common(v, m, T, rew, x, r1, r2, tin, "max", None, inc, "max")
    return v


def check_certificate(m: Mdp, c: Certificate, T: Optional[Iterable[int]] = None) -> Verdict:
    """Dispatch on the certificate's proposition.

    ``T`` defaults to the model label named in the query.  Raises
    :class:`CertificateError` for structural problems.
    """
    check_presence(c)
    check_shape(c, m.n_states)
    if T is None:
        try:
            T = m.label(c.query.target)
        except KeyError as e:
            raise CertificateError(str(e.args[0])) from e
    T = frozenset(T)
    q = c.query
    kind = c.kind
    rew = None if not q.is_reward else m.reward_vector()
    if kind == "reach-upper":
        return check_reach_upper(m, q.opt, T, c.x)
    if kind == "reach-lower-min":
        return check_reach_lower_min(m, T, c.x, c.r)
    if kind == "reach-lower-max":
        return check_reach_lower_max(m, T, c.x, c.r)
    if kind == "reach-lower-max-witness":
        return check_reach_lower_max_witness(m, T, c.x, c.r, c.sigma)
    if kind == "rew-inf-lower":
        return check_rew_inf_lower(m, q.opt, T, rew, c.x, c.r)
    if kind == "rew-inf-upper-max":
        return check_rew_inf_upper_max(m, T, rew, c.x, c.r)
    if kind == "rew-inf-upper-min":
        return check_rew_inf_upper_min(m, T, rew, c.x, c.r)
    if kind == "rew-inf-upper-min-witness":
        return check_rew_inf_upper_min_witness(m, T, rew, c.x, c.r, c.sigma)
    if kind == "rew-rho-upper":
        return check_rew_rho_upper(m, q.opt, T, rew, c.x)
    if kind == "rew-rho-lower-min":
        return check_rew_rho_lower_min(m, T, rew, c.x, c.r, c.r2, c.tin)
    if kind == "rew-rho-lower-max":
        return check_rew_rho_lower_max(m, T, rew, c.x, c.r, c.r2, c.sigma, c.tin)
    return check_rew_rho_lower_max_nostrat(m, T, rew, c.x, c.r, c.r2, c.tin)
