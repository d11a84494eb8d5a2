from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mdp_from_seed, seeds
from mdpcert.ext import EQUAL, GREATER, INF, LESS, compare_ext, ext_add, ext_mul, format_ext, parse_ext
from mdpcert.mdp import Mdp, induced_dtmc, validate_mdp


def test_three_state_model_is_valid(fig1):
    assert validate_mdp(fig1) == []
    assert fig1.label("target") == {2}
    assert fig1.n_states == 3 and fig1.n_choices == 5


def test_smallest_model():
    m = Mdp.build([[[(0, 1)]]], labels={"target": [0]})
    assert validate_mdp(m) == []


def test_sum_mismatch_reported():
    m = Mdp.build([[[(0, Fraction(9, 10))]]], validate=False)
    diags = validate_mdp(m)
    assert len(diags) == 1 and "distribution-sum mismatch" in diags[0]


def test_other_diagnostics():
    m = Mdp.build([[[(0, Fraction(1, 2)), (0, Fraction(1, 2))]], [[(5, 1)]]], rewards=[-1, 0], validate=False)
    diags = validate_mdp(m)
    assert any("duplicate successor" in d for d in diags)
    assert any("out-of-range successor" in d for d in diags)
    assert any("negative reward" in d for d in diags)


def test_empty_model():
    assert validate_mdp(Mdp(())) == ["no states declared"]


def test_induced_dashed(fig1):
    d = induced_dtmc(fig1, [1, 1, 0])
    assert d.is_dtmc()
    assert d.transitions[0] == (((2, 1),),)
    assert d.transitions[1] == (((2, 1),),)


def test_induced_solid(fig1):
    d = induced_dtmc(fig1, [0, 0, 0])
    assert d.transitions[0][0] == ((0, 1),)
    assert {t for t, _ in d.transitions[1][0]} == {0, 1, 2}


def test_induced_on_dtmc_is_identity(coin):
    assert induced_dtmc(coin, [0, 0]).same_as(coin)


def test_bad_strategy(fig1):
    with pytest.raises(ValueError):
        induced_dtmc(fig1, [0, 2, 0])


@pytest.mark.parametrize(
    "a,b,expected",
    [
        (Fraction(1, 3), Fraction(1, 2), LESS),
        (INF, INF, EQUAL),
        (Fraction(2, 4), Fraction(1, 2), EQUAL),
        (INF, Fraction(10 ** 9), GREATER),
    ],
)
def test_compare_ext(a, b, expected):
    assert compare_ext(a, b) == expected


def test_ext_arithmetic():
    assert ext_add(Fraction(1), INF) == INF
    assert ext_mul(Fraction(1, 2), INF) == INF
    assert ext_mul(Fraction(0), INF) == 0
    assert format_ext(INF) == "inf" and parse_ext("inf") == INF
    assert format_ext(Fraction(6, 4)) == "3/2"


ext_values = st.one_of(st.just(INF), st.fractions(min_value=0, max_value=100, max_denominator=50))


@given(ext_values, ext_values, ext_values)
def test_compare_is_total_order(a, b, c):
    assert compare_ext(a, b) == -compare_ext(b, a)
    if compare_ext(a, b) <= 0 and compare_ext(b, c) <= 0:
        assert compare_ext(a, c) <= 0


@given(ext_values)
def test_format_parse_roundtrip(v):
    assert parse_ext(format_ext(v)) == v


@given(seeds, st.data())
def test_induced_preserves_validity(seed, data):
    m = mdp_from_seed(seed)
    sigma = [data.draw(st.integers(0, len(a) - 1)) for a in m.transitions]
    assert validate_mdp(induced_dtmc(m, sigma)) == []


@given(seeds)
def test_distributions_sum_to_one(seed):
    m = mdp_from_seed(seed)
    for acts in m.transitions:
        for d in acts:
            assert sum(p for _, p in d) == 1
