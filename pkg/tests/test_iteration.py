from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mdp_from_seed, seeds
from mdpcert import models
from mdpcert.ext import INF
from mdpcert.mdp import Mdp
from mdpcert.solvers.config import FloatingPointBreakage, IterationCapExceeded, Objective, SolverConfig
from mdpcert.solvers.iteration import interval_iteration, reward_upper_bound, value_iteration, verify_pair
from mdpcert.solvers.policy import policy_iteration_exact
from mdpcert.solvers.reduction import reduce_problem

H = Fraction(1, 2)
EPS = Fraction(1, 10 ** 6)
SAFE = SolverConfig(method="ii", rounding="safe", gamma=Fraction(1, 20))
QUERIES = [("Pmin", "inf"), ("Pmax", "inf"), ("Emin", "inf"), ("Emax", "inf"), ("Emin", "rho"), ("Emax", "rho")]


def _close(lo, hi, eps=EPS):
    return all(l == h or (h != INF and h - l <= eps * l) for l, h in zip(lo, hi))


def test_value_iteration_three_state(fig1):
    x = value_iteration(fig1, "Pmin")
    assert H - EPS <= x[1] <= H


def test_value_iteration_all_targets():
    m = Mdp.build([[[(1, 1)]], [[(0, 1)]]], labels={"target": [0, 1]})
    assert value_iteration(m, "Pmax") == [1, 1]


def test_value_iteration_coin_reward(coin):
    x = value_iteration(coin, "Emin")
    assert 2 - 2 * EPS <= x[0] <= 2


def test_interval_iteration_three_state(fig1):
    bp = interval_iteration(fig1, "Pmin", SAFE)
    assert bp.lower[1] <= H <= bp.upper[1]
    assert bp.upper[1] - bp.lower[1] <= EPS
    assert bp.meta["gamma"] == Fraction(1, 20)


def test_interval_iteration_split_loops(split):
    bp = interval_iteration(split, "Pmax", SAFE)
    assert bp.lower[0] <= H <= bp.upper[0]
    assert bp.upper[0] - bp.lower[0] <= EPS


def test_interval_iteration_single_target():
    m = Mdp.build([[[(0, 1)]]], labels={"target": [0]})
    bp = interval_iteration(m, "Pmin", SAFE)
    assert bp.lower == bp.upper == (1,)


def test_interval_iteration_infinite_states(fig1):
    m = fig1.with_rewards([1, 1, 0])
    bp = interval_iteration(m, "Emax", SAFE)
    assert bp.lower[:2] == bp.upper[:2] == (INF, INF)


def test_reward_upper_bound_dominates(costly):
    red = reduce_problem(costly, Objective.parse("Emin", {2}))
    ub = red.lift_values(reward_upper_bound(red))
    x, _ = policy_iteration_exact(costly, "Emin")
    assert all(u >= v for u, v in zip(ub, x))


def test_iteration_cap(fig1):
    with pytest.raises(IterationCapExceeded):
        interval_iteration(fig1, "Pmin", SolverConfig(method="ii", max_sweeps=3, epsilon=Fraction(1, 10 ** 12)))


def test_verify_pair_rejects_bad_vectors(fig1):
    obj = Objective.parse("Pmin", {2})
    with pytest.raises(FloatingPointBreakage) as exc:
        verify_pair(fig1, obj, [0, Fraction(6, 10), 1], [0, H, 1])
    assert exc.value.side == "lower" and exc.value.state == 1
    with pytest.raises(FloatingPointBreakage) as exc:
        verify_pair(fig1, obj, [0, H, 1], [0, Fraction(4, 10), 1])
    assert exc.value.side == "upper"


def test_emulated_precision(fig1):
    cfg = SolverConfig(method="ii", precision_bits=24, epsilon=Fraction(1, 10 ** 5))
    bp = interval_iteration(fig1, "Pmin", cfg)
    assert bp.lower[1] <= H <= bp.upper[1]
    assert all(v.denominator & (v.denominator - 1) == 0 for v in bp.lower + bp.upper)


@settings(max_examples=40)
@given(seeds, st.sampled_from(QUERIES))
def test_interval_iteration_brackets_exact_values(seed, query):
    m = mdp_from_seed(seed)
    name, sem = query
    exact, _ = policy_iteration_exact(m, name, semantics=sem)
    bp = interval_iteration(m, name, SAFE, semantics=sem)
    assert all(l <= v <= u for l, v, u in zip(bp.lower, exact, bp.upper))
    assert _close(bp.lower, bp.upper)


@settings(max_examples=30)
@given(seeds, st.sampled_from(["Pmin", "Pmax", "Emin"]))
def test_safe_value_iteration_from_below_is_sound(seed, name):
    m = mdp_from_seed(seed)
    exact, _ = policy_iteration_exact(m, name)
    cfg = SolverConfig(max_sweeps=10 ** 5)
    try:
        x = value_iteration(m, name, "below", cfg)
    except IterationCapExceeded:
        return
    assert all(a <= b for a, b in zip(x, exact))
