import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mdpcert import models
from mdpcert.generators import random_mdp

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def fig1():
    return models.three_state()


@pytest.fixture
def coin():
    return models.coin_loop()


@pytest.fixture
def split():
    return models.split_loops()


@pytest.fixture
def costly():
    return models.costly_exit()


# Random models are drawn from a seed so hypothesis shrinks over integers
# instead of nested structures.
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def mdp_from_seed(seed, **kw):
    return random_mdp(random.Random(seed), **kw)



QUERIES = [
    ("Pmin", None), ("Pmax", None),
    ("Emin", "inf"), ("Emax", "inf"),
    ("Emin", "rho"), ("Emax", "rho"),
]


def _tweak_value(rng, v, truth, bound):
    """A nearby or random replacement for one value entry."""
    from mdpcert.ext import INF

    options = [Fraction(0), Fraction(1), Fraction(rng.randint(0, 20), rng.randint(1, 10)), INF]
    if truth != INF:
        delta = Fraction(1, rng.choice([2, 10, 1000, 10 ** 9]))
        options += [truth + delta, truth - delta if truth >= delta else Fraction(0)]
    if v != INF:
        options += [v + Fraction(1, 10 ** 6), v * 2]
    return rng.choice(options)


def perturb(cert, rng, truth):
    """Return a copy of ``cert`` with exactly one entry changed, plus a description."""
    import dataclasses

    from mdpcert.ext import INF

    fields = ["x"] * 4 + [f for f in ("r", "r2", "sigma", "tin") if getattr(cert, f) is not None]
    name = rng.choice(fields)
    n = len(cert.x)
    s = rng.randrange(n)
    if name == "x":
        vec = list(cert.x)
        new = _tweak_value(rng, vec[s], truth[s], cert.query.bound)
        vec[s] = new
        return dataclasses.replace(cert, x=tuple(vec)), (name, s)
    if name in ("r", "r2"):
        vec = list(getattr(cert, name))
        old = vec[s]
        choices = [INF, 0, rng.randint(0, n + 1)]
        if old != INF:
            choices += [old + 1, max(0, old - 1)]
        vec[s] = rng.choice(choices)
        return dataclasses.replace(cert, **{name: tuple(vec)}), (name, s)
    if name == "sigma":
        vec = list(cert.sigma)
        vec[s] = rng.randrange(4)
        return dataclasses.replace(cert, sigma=tuple(vec)), (name, s)
    tin = set(cert.tin) ^ {s}
    return dataclasses.replace(cert, tin=frozenset(tin)), (name, s)


def bound_holds(cert, truth):
    if cert.query.bound == "lower":
        return all(a <= b for a, b in zip(cert.x, truth))
    return all(a >= b for a, b in zip(cert.x, truth))
