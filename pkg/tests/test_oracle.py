from fractions import Fraction

import pytest
from hypothesis import given

from conftest import mdp_from_seed, seeds
from mdpcert.ext import INF
from mdpcert.mdp import Mdp, induced_dtmc
from mdpcert.oracle import (
    OracleCapExceeded,
    dtmc_reach_exact,
    dtmc_reward_exact,
    optimal_all,
    optimal_exact,
    solve_fraction_free,
    strategy_count,
)

H = Fraction(1, 2)


def test_three_state(fig1):
    assert optimal_exact(fig1, "Pmin", "target").values == (0, H, 1)
    assert optimal_exact(fig1, "Pmax", "target").values == (1, 1, 1)


def test_costly_exit(costly):
    assert optimal_exact(costly, "Emin", "target", "inf").values[0] == 100
    assert optimal_exact(costly, "Emin", "target", "rho").values[0] == 0
    assert optimal_exact(costly, "Emax", "target", "rho").values[0] == 100


def test_coin_loop(coin):
    assert dtmc_reward_exact(coin, {1}, coin.reward_vector()) == [2, 0]
    assert dtmc_reach_exact(coin, {1}) == [1, 1]


def test_rho_infinite_cycle():
    m = Mdp.build([[[(0, 1)]], [[(1, 1)]]], labels={"target": [1]}, rewards=[1, 0])
    assert dtmc_reward_exact(m, {1}, m.reward_vector(), "rho") == [INF, 0]
    assert dtmc_reward_exact(m, {1}, m.reward_vector(), "inf") == [INF, 0]


def test_cap():
    trans = [[[(s, 1)] for _ in range(4)] for s in range(20)]
    m = Mdp.build(trans, labels={"target": [0]})
    assert strategy_count(m) == 4 ** 20
    with pytest.raises(OracleCapExceeded):
        optimal_exact(m, "Pmax", "target")


def test_bareiss():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_fraction_free(A, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(ZeroDivisionError):
        solve_fraction_free([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]], [Fraction(0)] * 2)


@given(seeds)
def test_optimal_all_agrees_with_single_queries(seed):
    m = mdp_from_seed(seed, max_states=5, max_actions=2)
    allres = optimal_all(m, "target")
    for (name, sem), res in allres.items():
        single = optimal_exact(m, name, "target", "inf" if sem == "-" else sem)
        assert single.values == res.values


@given(seeds)
def test_optimal_strategy_attains_values(seed):
    m = mdp_from_seed(seed, max_states=5)
    for name in ("Pmin", "Pmax"):
        res = optimal_exact(m, name, "target")
        d = induced_dtmc(m, res.strategy)
        assert tuple(dtmc_reach_exact(d, m.label("target"))) == res.values
