"""Qualitative graph analysis: almost-sure / zero reachability, MECs, collapsing."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .mdp import Mdp


def _check_opt(opt: str) -> None:
    if opt not in ("min", "max"):
        raise ValueError(f"opt must be 'min' or 'max', not {opt!r}")


def negate(opt: str) -> str:
    _check_opt(opt)
    return "max" if opt == "min" else "min"


def can_reach(m: Mdp, goal: Iterable[int], avoid: Iterable[int] = ()) -> frozenset:
    """States with a path (under some choice of actions) into ``goal``.

    Paths may not pass through ``avoid`` before reaching ``goal``.
    """
    avoid = frozenset(avoid)
    seen = set(goal)
    queue = deque(seen)
    pre = m.predecessors
    while queue:
        t = queue.popleft()
        for s in pre[t]:
            if s not in seen and s not in avoid:
                seen.add(s)
                queue.append(s)
    return frozenset(seen)


def avoid_forever(m: Mdp, allowed: Iterable[int]) -> frozenset:
    """Largest subset of ``allowed`` in which some action keeps every state inside."""
    inside = set(allowed)
    changed = True
    while changed:
        changed = False
        for s in sorted(inside):
            if not any(all(t in inside for t, _ in d) for d in m.transitions[s]):
                inside.discard(s)
                changed = True
    return frozenset(inside)


def prob0_states_graph(m: Mdp, opt: str, T: Iterable[int]) -> frozenset:
    """{s | P^opt_s(reach T) = 0} by classical graph iteration."""
    _check_opt(opt)
    T = frozenset(T)
    if opt == "max":
        return frozenset(range(m.n_states)) - can_reach(m, T)
    return avoid_forever(m, set(range(m.n_states)) - T)


def prob0_states(m: Mdp, opt: str, T: Iterable[int]) -> frozenset:
    """{s | P^opt_s(reach T) = 0}, read off the distance fixed point for the other opt."""
    from .ranking import fixed_point_distance

    r = fixed_point_distance(m, negate(opt), frozenset(T))
    return frozenset(s for s, v in enumerate(r) if v == float("inf"))


def prob1_states(m: Mdp, opt: str, T: Iterable[int]) -> frozenset:
    """{s | P^opt_s(reach T) = 1} by the classical nested set iterations."""
    _check_opt(opt)
    T = frozenset(T)
    n = m.n_states
    if opt == "min":
        # P^min < 1 iff some path avoiding T leads into a set the strategy can stay in forever.
        trap = avoid_forever(m, set(range(n)) - T)
        return frozenset(range(n)) - can_reach(m, trap, avoid=T)
    u = set(range(n))
    while True:
        r = set(T & u)
        changed = True
        while changed:
            changed = False
            for s in range(n):
                if s in r or s not in u:
                    continue
                for d in m.transitions[s]:
                    if all(t in u for t, _ in d) and any(t in r for t, _ in d):
                        r.add(s)
                        changed = True
                        break
        if r == u:
            return frozenset(u)
        u = r


def strongly_connected_components(
    nodes: Sequence[int], edges: Dict[int, Iterable[int]]
) -> List[List[int]]:
    """Tarjan's algorithm, iterative.  ``edges[v]`` may mention nodes outside ``nodes``."""
    node_set = set(nodes)
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack = set()
    stack: List[int] = []
    out: List[List[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in node_set:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class MecPartition:
    """Maximal end components.

    ``components[i]`` is ``(states, actions)`` where ``actions[s]`` is the set
    of EC-internal actions of ``s``.  ``quotient_map[s]`` is the component
    index of ``s`` or ``None`` when ``s`` is in no MEC.
    """

    components: Tuple[Tuple[FrozenSet[int], Dict[int, FrozenSet[int]]], ...]
    quotient_map: Tuple[Optional[int], ...]

    def component_of(self, s: int) -> Optional[int]:
        return self.quotient_map[s]


def mec_decomposition(m: Mdp, within: Optional[Iterable[int]] = None) -> MecPartition:
    """MECs of ``m`` (or of the sub-MDP induced by ``within``) via SCC refinement."""
    alive = set(range(m.n_states)) if within is None else set(within)
    allowed = {
        s: {a for a, d in enumerate(m.transitions[s]) if all(t in alive for t, _ in d)}
        for s in alive
    }
    while True:
        for s in [s for s in alive if not allowed[s]]:
            alive.discard(s)
            del allowed[s]
        edges = {
            s: {t for a in allowed[s] for t, _ in m.transitions[s][a]} for s in alive
        }
        comps = strongly_connected_components(sorted(alive), edges)
        comp_of = {s: i for i, c in enumerate(comps) for s in c}
        changed = False
        for s in alive:
            keep = {
                a
                for a in allowed[s]
                if all(t in comp_of and comp_of[t] == comp_of[s] for t, _ in m.transitions[s][a])
            }
            if keep != allowed[s]:
                allowed[s] = keep
                changed = True
        if not changed and all(allowed[s] for s in alive):
            break
    comps = sorted((c for c in comps), key=lambda c: c[0])
    qmap: List[Optional[int]] = [None] * m.n_states
    out = []
    for i, c in enumerate(comps):
        for s in c:
            qmap[s] = i
        out.append((frozenset(c), {s: frozenset(allowed[s]) for s in c}))
    return MecPartition(tuple(out), tuple(qmap))


def is_end_component(m: Mdp, states: Iterable[int], actions: Dict[int, Iterable[int]]) -> bool:
    """Closure and strong connectivity under the given actions."""
    states = frozenset(states)
    if not states:
        return False
    edges = {}
    for s in states:
        acts = list(actions.get(s, ()))
        if not acts:
            return False
        succ = set()
        for a in acts:
            post = {t for t, _ in m.transitions[s][a]}
            if not post <= states:
                return False
            succ |= post
        edges[s] = succ
    return len(strongly_connected_components(sorted(states), edges)) == 1


@dataclass(frozen=True)
class Collapsed:
    """Result of :func:`collapse_mecs`.

    ``lift[s]`` is the quotient state of original state ``s``.  ``origin[q][k]``
    is the original ``(state, action)`` behind quotient action ``k`` of ``q``,
    or ``None`` for an added self-loop.
    """

    mdp: Mdp
    lift: Tuple[int, ...]
    target: FrozenSet[int]
    origin: Tuple[Tuple[Optional[Tuple[int, int]], ...], ...]
    members: Tuple[Tuple[int, ...], ...]


def collapse_mecs(m: Mdp, p: MecPartition, T: Iterable[int]) -> Collapsed:
    """Quotient where each MEC of ``p`` becomes one state keeping EC-leaving actions."""
    T = frozenset(T)
    groups: List[List[int]] = []
    lift = [-1] * m.n_states
    comp_q: Dict[int, int] = {}
    for s in range(m.n_states):
        c = p.quotient_map[s]
        if c is None:
            lift[s] = len(groups)
            groups.append([s])
        elif c in comp_q:
            lift[s] = comp_q[c]
            groups[comp_q[c]].append(s)
        else:
            comp_q[c] = lift[s] = len(groups)
            groups.append([s])
    trans = []
    origin = []
    names = []
    for q, members in enumerate(groups):
        c = p.quotient_map[members[0]]
        internal = p.components[c][1] if c is not None else {}
        acts, orig, anames = [], [], []
        for s in members:
            for a, d in enumerate(m.transitions[s]):
                if a in internal.get(s, ()):
                    continue
                agg: Dict[int, Fraction] = {}
                for t, pr in d:
                    agg[lift[t]] = agg.get(lift[t], Fraction(0)) + pr
                acts.append(tuple(sorted(agg.items())))
                orig.append((s, a))
                anames.append(f"{m.state_name(s)}.{m.action_name(s, a)}")
        if not acts:
            acts.append(((q, Fraction(1)),))
            orig.append(None)
            anames.append("loop")
        trans.append(tuple(acts))
        origin.append(tuple(orig))
        names.append(tuple(anames))
    target = frozenset(lift[s] for s in T)
    labels = {k: frozenset(lift[s] for s in v) for k, v in m.labels.items()}
    rewards = None
    if m.rewards is not None:
        rewards = tuple(max(m.rewards[s] for s in g) for g in groups)
    qm = Mdp(
        tuple(trans),
        labels,
        rewards,
        tuple("+".join(m.state_name(s) for s in g) for g in groups),
        tuple(names),
    )
    return Collapsed(qm, tuple(lift), target, tuple(origin), tuple(tuple(g) for g in groups))
