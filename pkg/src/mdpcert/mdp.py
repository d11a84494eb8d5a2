"""Exact MDP model, strategies and induced DTMCs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Tuple

Distribution = Tuple[Tuple[int, Fraction], ...]
Strategy = Tuple[int, ...]
StateSet = frozenset


class ModelError(ValueError):
    """Raised when an MDP violates a well-formedness invariant."""

    def __init__(self, diagnostics: Sequence[str]):
        self.diagnostics = list(diagnostics)
        super().__init__(self.diagnostics[0] if self.diagnostics else "invalid model")


@dataclass(frozen=True, eq=False)
class Mdp:
    """A finite MDP with dense state and action indices.

    ``transitions[s][a]`` is the sparse distribution of action ``a`` (a local
    index into the enabled actions of ``s``) as ``(successor, probability)``
    pairs.  Names are optional and only used for display and file formats.
    """

    transitions: Tuple[Tuple[Distribution, ...], ...]
    labels: Mapping[str, frozenset] = field(default_factory=dict)
    rewards: Optional[Tuple[Fraction, ...]] = None
    state_names: Optional[Tuple[str, ...]] = None
    action_names: Optional[Tuple[Tuple[str, ...], ...]] = None

    @classmethod
    def build(
        cls,
        transitions: Iterable[Iterable[Iterable[Tuple[int, object]]]],
        labels: Optional[Mapping[str, Iterable[int]]] = None,
        rewards: Optional[Iterable[object]] = None,
        state_names: Optional[Iterable[str]] = None,
        action_names: Optional[Iterable[Iterable[str]]] = None,
        validate: bool = True,
    ) -> "Mdp":
        """Construct from plain nested lists, converting numbers to ``Fraction``."""
        trans = tuple(
            tuple(tuple((int(t), Fraction(p)) for t, p in dist) for dist in acts)
            for acts in transitions
        )
        m = cls(
            transitions=trans,
            labels={k: frozenset(v) for k, v in (labels or {}).items()},
            rewards=None if rewards is None else tuple(Fraction(r) for r in rewards),
            state_names=None if state_names is None else tuple(state_names),
            action_names=None if action_names is None else tuple(tuple(a) for a in action_names),
        )
        if validate:
            diags = validate_mdp(m)
            if diags:
                raise ModelError(diags)
        return m

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    @property
    def n_choices(self) -> int:
        return sum(len(a) for a in self.transitions)

    @property
    def n_transitions(self) -> int:
        return sum(len(d) for acts in self.transitions for d in acts)

    def enabled(self, s: int) -> range:
        return range(len(self.transitions[s]))

    def post(self, s: int, a: int) -> Distribution:
        return self.transitions[s][a]

    def successors(self, s: int, a: int) -> Tuple[int, ...]:
        return tuple(t for t, _ in self.transitions[s][a])

    def reward(self, s: int) -> Fraction:
        return Fraction(0) if self.rewards is None else self.rewards[s]

    def reward_vector(self) -> Tuple[Fraction, ...]:
        if self.rewards is None:
            return (Fraction(0),) * self.n_states
        return self.rewards

    def label(self, name: str) -> frozenset:
        try:
            return self.labels[name]
        except KeyError:
            raise KeyError(f"unknown label {name!r}") from None

    def state_name(self, s: int) -> str:
        if self.state_names is not None and self.state_names[s]:
            return self.state_names[s]
        return str(s)

    def action_name(self, s: int, a: int) -> str:
        if self.action_names is not None:
            return self.action_names[s][a]
        return str(a)

    def same_as(self, other: "Mdp") -> bool:
        """Field-wise equality (instances compare by identity otherwise)."""
        return (
            self.transitions == other.transitions
            and dict(self.labels) == dict(other.labels)
            and self.reward_vector() == other.reward_vector()
            and [self.state_name(s) for s in range(self.n_states)]
            == [other.state_name(s) for s in range(other.n_states)]
            and [[self.action_name(s, a) for a in self.enabled(s)] for s in range(self.n_states)]
            == [[other.action_name(s, a) for a in other.enabled(s)] for s in range(other.n_states)]
        )

    def is_dtmc(self) -> bool:
        return all(len(a) == 1 for a in self.transitions)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[int, ...], ...]:
        """``predecessors[t]``: states with some action reaching ``t``."""
        pre = [set() for _ in range(self.n_states)]
        for s, acts in enumerate(self.transitions):
            for dist in acts:
                for t, _ in dist:
                    pre[t].add(s)
        return tuple(tuple(sorted(p)) for p in pre)

    def with_rewards(self, rewards: Iterable[object]) -> "Mdp":
        return Mdp(
            self.transitions,
            self.labels,
            tuple(Fraction(r) for r in rewards),
            self.state_names,
            self.action_names,
        )


def validate_mdp(m: Mdp) -> list:
    """Return a list of diagnostics; empty means the model is well formed.

    Diagnostics are ordered by (state, action) so the first entry names the
    first violation.
    """
    diags = []
    n = m.n_states
    if n == 0:
        return ["no states declared"]
    for s, acts in enumerate(m.transitions):
        if not acts:
            diags.append(f"empty action set at state {m.state_name(s)}")
            continue
        for a, dist in enumerate(acts):
            where = f"state {m.state_name(s)} action {m.action_name(s, a)}"
            if not dist:
                diags.append(f"empty distribution at {where}")
                continue
            seen = set()
            for t, p in dist:
                if not (0 <= t < n):
                    diags.append(f"out-of-range successor {t} at {where}")
                elif t in seen:
                    diags.append(f"duplicate successor {m.state_name(t)} at {where}")
                seen.add(t)
                if p <= 0:
                    diags.append(f"non-positive probability {p} at {where}")
            total = sum((p for _, p in dist), Fraction(0))
            if total != 1:
                diags.append(f"distribution-sum mismatch at {where}: sums to {total}")
    if m.rewards is not None:
        if len(m.rewards) != n:
            diags.append("reward vector length does not match state count")
        else:
            for s, r in enumerate(m.rewards):
                if r < 0:
                    diags.append(f"negative reward {r} at state {m.state_name(s)}")
    for name, states in m.labels.items():
        for s in states:
            if not (0 <= s < n):
                diags.append(f"label {name!r} names out-of-range state {s}")
    if m.state_names is not None and len(m.state_names) != n:
        diags.append("state name count does not match state count")
    return diags


def check_strategy(m: Mdp, sigma: Sequence[int]) -> None:
    if len(sigma) != m.n_states:
        raise ValueError("strategy length does not match state count")
    for s, a in enumerate(sigma):
        if not (0 <= a < len(m.transitions[s])):
            raise ValueError(f"strategy picks a disabled action at state {m.state_name(s)}")


def induced_dtmc(m: Mdp, sigma: Sequence[int]) -> Mdp:
    """The DTMC keeping only the action chosen by ``sigma`` in each state."""
    check_strategy(m, sigma)
    trans = tuple((m.transitions[s][a],) for s, a in enumerate(sigma))
    names = None
    if m.action_names is not None:
        names = tuple((m.action_names[s][a],) for s, a in enumerate(sigma))
    return Mdp(trans, m.labels, m.rewards, m.state_names, names)


def restrict_actions(m: Mdp, allowed: Sequence[Sequence[int]]) -> Mdp:
    """Sub-MDP keeping only ``allowed[s]`` at each state (which must be nonempty)."""
    trans = tuple(tuple(m.transitions[s][a] for a in allowed[s]) for s in range(m.n_states))
    names = None
    if m.action_names is not None:
        names = tuple(tuple(m.action_names[s][a] for a in allowed[s]) for s in range(m.n_states))
    return Mdp(trans, m.labels, m.rewards, m.state_names, names)


def make_absorbing(m: Mdp, states: Iterable[int]) -> Mdp:
    """Replace every action of the given states by a single self-loop."""
    states = frozenset(states)
    one = Fraction(1)
    trans = tuple(
        (((s, one),),) if s in states else acts for s, acts in enumerate(m.transitions)
    )
    names = None
    if m.action_names is not None:
        names = tuple(
            ("loop",) if s in states else acts for s, acts in enumerate(m.action_names)
        )
    return Mdp(trans, m.labels, m.rewards, m.state_names, names)


def resolve_target(m: Mdp, target) -> frozenset:
    """Accept a label name or an iterable of state indices."""
    if isinstance(target, str):
        return m.label(target)
    return frozenset(target)
