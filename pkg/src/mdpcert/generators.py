"""Random small MDPs with exact rational probabilities, for tests and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .mdp import Mdp


def random_distribution(rng: random.Random, n_states: int, max_den: int = 10):
    """A distribution whose probabilities share a denominator of at most ``max_den``."""
    den = rng.randint(1, max_den)
    k = rng.randint(1, min(n_states, den, 3))
    cuts = sorted(rng.sample(range(1, den), k - 1)) if k > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    succ = rng.sample(range(n_states), k)
    return [(t, Fraction(c, den)) for t, c in zip(succ, parts)]


def random_mdp(
    rng: random.Random,
    max_states: int = 8,
    max_actions: int = 3,
    max_den: int = 10,
    n_states: Optional[int] = None,
    reward_zero_prob: float = 0.4,
) -> Mdp:
    """Random MDP with a random ``target`` label (possibly empty) and random rewards."""
    n = n_states if n_states is not None else rng.randint(1, max_states)
    trans = [
        [random_distribution(rng, n, max_den) for _ in range(rng.randint(1, max_actions))]
        for _ in range(n)
    ]
    n_target = rng.choice([0, 1, 1, 1, 2, 2, 3])
    target = rng.sample(range(n), min(n_target, n))
    rewards = [
        Fraction(0) if rng.random() < reward_zero_prob else Fraction(rng.randint(1, 10), rng.randint(1, max_den))
        for _ in range(n)
    ]
    return Mdp.build(trans, labels={"target": target}, rewards=rewards)


def corpus(seed: int = 2024, size: int = 500, **kwargs):
    """A reproducible list of random MDPs."""
    rng = random.Random(seed)
    return [random_mdp(rng, **kwargs) for _ in range(size)]
