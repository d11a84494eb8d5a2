import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conftest import mdp_from_seed, seeds
from mdpcert.ext import INF
from mdpcert.solvers.bellman import (
    ReachOperator,
    RewardOperator,
    bellman_reach,
    bellman_reward,
    is_coinductive,
    is_inductive,
    smooth_step,
)

H = Fraction(1, 2)
gammas = st.sampled_from([Fraction(1, 20), Fraction(1, 2), Fraction(9, 10)])


def test_reach_examples(fig1):
    x = [0, H, 1]
    assert bellman_reach(fig1, "min", {2}, x) == x
    assert bellman_reach(fig1, "min", {2}, [0, 0, 0]) == [0, 0, 1]
    assert bellman_reach(fig1, "max", {2}, [1, 1, 1]) == [1, 1, 1]


def test_reward_examples(coin):
    rew = coin.reward_vector()
    assert bellman_reward(coin, "min", {1}, rew, [2, 0]) == [2, 0]
    assert bellman_reward(coin, "min", {1}, rew, [0, 0]) == [1, 0]
    assert bellman_reward(coin, "min", {1}, rew, [INF, 0]) == [INF, 0]


def test_smoothing_examples(fig1, coin):
    op = ReachOperator(fig1, "min", {2})
    assert smooth_step(op, 0, [0, H, 1]) == op([0, H, 1])
    assert smooth_step(op, H, [0, 0, 0]) == [0, 0, H]
    rop = RewardOperator(coin, "min", {1})
    # the fixed point of the reward operator stays fixed once smoothed
    assert smooth_step(rop, H, [2, 0]) == [2, 0]


def _random_x(rng, n, reward, inf_share=0.0):
    if reward:
        return [INF if rng.random() < inf_share else Fraction(rng.randint(0, 40), rng.randint(1, 8)) for _ in range(n)]
    return [Fraction(rng.randint(0, 8), 8) for _ in range(n)]


def _operators(m, T):
    for opt in ("min", "max"):
        yield ReachOperator(m, opt, T), False
        yield RewardOperator(m, opt, T), True


@given(seeds, st.integers(0, 10 ** 6), gammas)
def test_smoothing_preserves_coinductivity(seed, xseed, gamma):
    m = mdp_from_seed(seed)
    rng = random.Random(xseed)
    for op, reward in _operators(m, m.label("target")):
        x = _random_x(rng, m.n_states, reward)
        sm = lambda v: smooth_step(op, gamma, v)  # noqa: E731
        assert (is_coinductive(sm, x) is None) == (is_coinductive(op, x) is None)
        assert (is_inductive(sm, x) is None) == (is_inductive(op, x) is None)


@given(seeds, st.integers(0, 10 ** 6), gammas)
def test_smoothing_with_infinite_entries(seed, xseed, gamma):
    # inductivity still transfers both ways; co-inductivity only from B to its
    # blend, since an infinite x(s) is always below gamma * inf
    m = mdp_from_seed(seed)
    rng = random.Random(xseed)
    for opt in ("min", "max"):
        op = RewardOperator(m, opt, m.label("target"))
        x = _random_x(rng, m.n_states, True, inf_share=0.2)
        sm = lambda v: smooth_step(op, gamma, v)  # noqa: E731
        assert (is_inductive(sm, x) is None) == (is_inductive(op, x) is None)
        if is_coinductive(op, x) is None:
            assert is_coinductive(sm, x) is None


def test_infinite_entry_breaks_coinductive_equivalence(costly):
    op = RewardOperator(costly, "min", {2})
    x = [Fraction(0), INF, Fraction(0)]
    assert is_coinductive(op, x) == 1
    assert is_coinductive(lambda v: smooth_step(op, H, v), x) is None


@given(seeds, gammas)
def test_smoothing_keeps_fixed_points(seed, gamma):
    from mdpcert.solvers.policy import policy_iteration_exact

    m = mdp_from_seed(seed)
    T = m.label("target")
    for name, op in (("Pmin", ReachOperator(m, "min", T)), ("Emax", RewardOperator(m, "max", T))):
        x, _ = policy_iteration_exact(m, name, T)
        assert op(x) == list(x)
        assert smooth_step(op, gamma, x) == list(x)


@given(seeds, gammas)
def test_smoothed_iterates_stay_below(seed, gamma):
    m = mdp_from_seed(seed)
    T = m.label("target")
    for op, reward in _operators(m, T):
        x = [Fraction(0) if reward or s not in T else Fraction(1) for s in range(m.n_states)]
        y = list(x)
        for _ in range(15):
            x = op(x)
            y = smooth_step(op, gamma, y)
            assert all(b <= a for a, b in zip(x, y))
