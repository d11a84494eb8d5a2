"""Brute-force ground truth: enumerate every memoryless deterministic strategy.

Deliberately self-contained.  The graph searches and the linear solver here
share no code with the solvers package, so agreement between the two is
meaningful evidence.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ext import INF
from .mdp import Mdp, induced_dtmc

DEFAULT_CAP = 10 ** 5


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    values: Tuple
    strategy: Tuple[int, ...]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def solve_fraction_free(A: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    """Solve ``A x = b`` exactly with Bareiss elimination over the integers.

    Rows are scaled to integers first; pivots are chosen by largest magnitude
    among the nonzero candidates.  Raises ``ZeroDivisionError`` if singular.
    """
    n = len(A)
    if n == 0:
        return []
    M = []
    for row, rhs in zip(A, b):
        den = 1
        for v in row:
            den = _lcm(den, v.denominator)
        den = _lcm(den, rhs.denominator)
        M.append([int(v * den) for v in row] + [int(rhs * den)])
    prev = 1
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(M[i][k]))
        if M[piv][k] == 0:
            raise ZeroDivisionError("singular system")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i = M[i]
            row_k = M[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            if M[i][j]:
                acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


def _succ_lists(d: Mdp) -> List[List[Tuple[int, Fraction]]]:
    if not d.is_dtmc():
        raise ValueError("expected a DTMC (one action per state)")
    return [list(acts[0]) for acts in d.transitions]


def _backward(succ, goal: Iterable[int], blocked: Iterable[int] = ()) -> set:
    n = len(succ)
    pre = [[] for _ in range(n)]
    for s in range(n):
        for t, _ in succ[s]:
            pre[t].append(s)
    blocked = set(blocked)
    seen = set(goal)
    work = deque(seen)
    while work:
        t = work.popleft()
        for s in pre[t]:
            if s not in seen and s not in blocked:
                seen.add(s)
                work.append(s)
    return seen


def _solve_on(succ, unknown: List[int], rhs: Dict[int, Fraction], fixed: Dict[int, Fraction]):
    """Solve x_s = rhs_s + sum_t P(s,t) x_t over ``unknown``; other states read ``fixed``."""
    pos = {s: i for i, s in enumerate(unknown)}
    A = []
    b = []
    for s in unknown:
        row = [Fraction(0)] * len(unknown)
        row[pos[s]] += 1
        c = rhs.get(s, Fraction(0))
        for t, p in succ[s]:
            if t in pos:
                row[pos[t]] -= p
            else:
                c += p * fixed[t]
        A.append(row)
        b.append(c)
    return dict(zip(unknown, solve_fraction_free(A, b)))


def dtmc_reach_exact(d: Mdp, T: Iterable[int]) -> List[Fraction]:
    """Exact reachability probabilities in a DTMC."""
    succ = _succ_lists(d)
    n = len(succ)
    T = set(T)
    reach = _backward(succ, T)
    zero = set(range(n)) - reach
    doomed = _backward(succ, zero, blocked=T)
    one = set(range(n)) - doomed
    fixed = {s: Fraction(0) for s in zero}
    fixed.update({s: Fraction(1) for s in one})
    rest = sorted(set(range(n)) - zero - one)
    sol = _solve_on(succ, rest, {}, fixed)
    return [sol[s] if s in sol else fixed[s] for s in range(n)]


def _bottom_components(succ, nodes: set) -> List[set]:
    """Bottom SCCs of the graph restricted to ``nodes`` (edges leaving ``nodes`` count as exits)."""
    fwd = {}
    for s in nodes:
        seen = {s}
        work = [s]
        leaks = False
        while work:
            u = work.pop()
            for t, _ in succ[u]:
                if t not in nodes:
                    leaks = True
                elif t not in seen:
                    seen.add(t)
                    work.append(t)
        fwd[s] = (seen, leaks)
    out = []
    done = set()
    for s in sorted(nodes):
        if s in done:
            continue
        seen, leaks = fwd[s]
        if not leaks and all(s in fwd[t][0] for t in seen):
            out.append(seen)
            done |= seen
    return out


def dtmc_reward_exact(d: Mdp, T: Iterable[int], rew: Sequence, semantics: str = "inf") -> List:
    """Exact expected reward collected before reaching T (target rewards are not counted)."""
    succ = _succ_lists(d)
    n = len(succ)
    T = set(T)
    rew = [Fraction(r) for r in rew]
    if semantics == "inf":
        p = dtmc_reach_exact(d, T)
        finite = [s for s in range(n) if p[s] == 1]
        fixed = {s: Fraction(0) for s in T}
        rest = [s for s in finite if s not in T]
        sol = _solve_on(succ, rest, {s: rew[s] for s in rest}, fixed)
        return [Fraction(0) if s in T else (sol[s] if s in sol else INF) for s in range(n)]
    if semantics != "rho":
        raise ValueError(f"unknown reward semantics {semantics!r}")
    free = set(range(n)) - T
    hot = set()
    for comp in _bottom_components(succ, free):
        if any(rew[s] > 0 for s in comp):
            hot |= comp
    infinite = _backward(succ, hot, blocked=T)
    positive = {s for s in free if rew[s] > 0}
    earning = _backward(succ, positive, blocked=T)
    fixed = {s: Fraction(0) for s in range(n) if s not in earning}
    rest = sorted(earning - infinite)
    sol = _solve_on(succ, rest, {s: rew[s] for s in rest}, fixed)
    out = []
    for s in range(n):
        if s in infinite:
            out.append(INF)
        elif s in sol:
            out.append(sol[s])
        else:
            out.append(Fraction(0))
    return out


def strategy_count(m: Mdp) -> int:
    total = 1
    for acts in m.transitions:
        total *= len(acts)
    return total


def _strategies(m: Mdp, cap: int):
    if strategy_count(m) > cap:
        raise OracleCapExceeded(
            f"{strategy_count(m)} strategies exceed the enumeration cap of {cap}"
        )
    return itertools.product(*[range(len(a)) for a in m.transitions])


def evaluate_strategy(m: Mdp, sigma: Sequence[int], objective: str, T, semantics: str = "inf"):
    d = induced_dtmc(m, sigma)
    if objective.startswith("P"):
        return dtmc_reach_exact(d, T)
    return dtmc_reward_exact(d, T, m.reward_vector(), semantics)


def _pointwise(vectors, objective: str) -> OracleResult:
    better = (lambda a, b: a < b) if objective.endswith("min") else (lambda a, b: a > b)
    best = None
    for sigma, vec in vectors:
        if best is None:
            best = list(vec)
            continue
        for s, v in enumerate(vec):
            if better(v, best[s]):
                best[s] = v
    arg = None
    for sigma, vec in vectors:
        if all(v == b for v, b in zip(vec, best)):
            arg = tuple(sigma)
            break
    if arg is None:
        arg = max(vectors, key=lambda sv: sum(v == b for v, b in zip(sv[1], best)))[0]
    return OracleResult(tuple(best), tuple(arg))


def optimal_exact(
    m: Mdp,
    objective: str,
    target,
    semantics: str = "inf",
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Pointwise optimum over all memoryless deterministic strategies.

    Args:
        m: the model.
        objective: one of ``Pmin``, ``Pmax``, ``Emin``, ``Emax``.
        target: label name or iterable of target states.
        semantics: ``inf`` or ``rho`` (expected rewards only).
        cap: maximum number of strategies to enumerate.
    """
    T = m.label(target) if isinstance(target, str) else frozenset(target)
    vectors = [
        (sigma, evaluate_strategy(m, sigma, objective, T, semantics))
        for sigma in _strategies(m, cap)
    ]
    return _pointwise(vectors, objective)


def optimal_all(m: Mdp, target, cap: int = DEFAULT_CAP) -> Dict[Tuple[str, str], OracleResult]:
    """All six objective/semantics combinations from a single enumeration.

    Keys are ``(objective, semantics)`` with semantics ``"-"`` for probabilities.
    """
    T = m.label(target) if isinstance(target, str) else frozenset(target)
    rew = m.reward_vector()
    reach, einf, erho = [], [], []
    for sigma in _strategies(m, cap):
        d = induced_dtmc(m, sigma)
        reach.append((sigma, dtmc_reach_exact(d, T)))
        einf.append((sigma, dtmc_reward_exact(d, T, rew, "inf")))
        erho.append((sigma, dtmc_reward_exact(d, T, rew, "rho")))
    return {
        ("Pmin", "-"): _pointwise(reach, "Pmin"),
        ("Pmax", "-"): _pointwise(reach, "Pmax"),
        ("Emin", "inf"): _pointwise(einf, "Emin"),
        ("Emax", "inf"): _pointwise(einf, "Emax"),
        ("Emin", "rho"): _pointwise(erho, "Emin"),
        ("Emax", "rho"): _pointwise(erho, "Emax"),
    }
