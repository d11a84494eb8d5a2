import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import QUERIES, bound_holds, mdp_from_seed, perturb, seeds
from mdpcert import models
from mdpcert.certificates import CertificateError, Query, check_certificate
from mdpcert.certificates.generate import generate_certificate, generate_certificates
from mdpcert.ext import INF
from mdpcert.mdp import Mdp
from mdpcert.oracle import optimal_all
from mdpcert.solvers.config import SolverConfig

H = Fraction(1, 2)
II = SolverConfig(method="ii", rounding="safe", gamma=Fraction(1, 20))


def _truth(res, name, sem):
    return res[(name, sem or "-")].values


def test_three_state_both_bounds(fig1):
    lower, upper = generate_certificates(fig1, Query("Pmin"))
    assert upper.x == (0, H, 1) and upper.kind == "reach-upper"
    assert lower.x == (0, H, 1) and lower.r == (INF, 1, 0)
    assert lower.meta["method"] == "pi"


def test_three_state_interval(fig1):
    lower, upper = generate_certificates(fig1, Query("Pmin"), II)
    assert lower.x[1] <= H <= upper.x[1]
    assert (upper.x[1] - lower.x[1]) <= Fraction(1, 10 ** 6) * lower.x[1]
    assert upper.meta["gamma"] == "1/20"


def test_empty_target():
    m = Mdp.build([[[(0, 1)], [(1, 1)]], [[(0, 1)]]], labels={"target": []})
    lower, upper = generate_certificates(m, Query("Pmax"))
    assert lower.x == upper.x == (0, 0)
    assert lower.r == (INF, INF)


def test_costly_exit_inf_and_rho(costly):
    for c in generate_certificates(costly, Query("Emin")):
        assert c.x[0] == 100
    for c in generate_certificates(costly, Query("Emin", semantics="rho")):
        assert c.x[0] == 0


def test_single_bound(fig1):
    c = generate_certificate(fig1, Query("Pmax", bound="upper"))
    assert c.query.bound == "upper" and c.x == (1, 1, 1)


def test_unknown_label(fig1):
    with pytest.raises(CertificateError):
        generate_certificate(fig1, Query("Pmax", "nope", bound="upper"))


@settings(max_examples=60)
@given(seeds)
def test_generated_certificates_are_valid_and_sound(seed):
    m = mdp_from_seed(seed, max_states=6)
    res = optimal_all(m, m.label("target"))
    for name, sem in QUERIES:
        truth = _truth(res, name, sem)
        for c in generate_certificates(m, Query(name, semantics=sem)):
            assert check_certificate(m, c).valid
            assert bound_holds(c, truth)


@settings(max_examples=30)
@given(seeds)
def test_interval_certificates_are_valid_and_tight(seed):
    m = mdp_from_seed(seed, max_states=6)
    res = optimal_all(m, m.label("target"))
    for name, sem in QUERIES:
        lower, upper = generate_certificates(m, Query(name, semantics=sem), II)
        truth = _truth(res, name, sem)
        assert bound_holds(lower, truth) and bound_holds(upper, truth)
        for lo, hi in zip(lower.x, upper.x):
            assert lo == hi or hi - lo <= Fraction(1, 10 ** 6) * lo


@settings(max_examples=40)
@given(seeds, st.integers(0, 2 ** 32), st.sampled_from(QUERIES))
def test_tampered_certificates_never_accepted_unsound(seed, pseed, query):
    m = mdp_from_seed(seed, max_states=6)
    name, sem = query
    truth = _truth(optimal_all(m, m.label("target")), name, sem)
    rng = random.Random(pseed)
    for c in generate_certificates(m, Query(name, semantics=sem)):
        for _ in range(5):
            bad, _ = perturb(c, rng, truth)
            try:
                ok = check_certificate(m, bad).valid
            except CertificateError:
                ok = False
            assert not ok or bound_holds(bad, truth)


def test_lowering_an_upper_bound_is_rejected(fig1):
    import dataclasses

    upper = generate_certificate(fig1, Query("Pmin", bound="upper"))
    bad = dataclasses.replace(upper, x=(0, Fraction(2, 5), 1))
    assert not check_certificate(fig1, bad).valid
    # raising an upper bound keeps it sound, and the checker accepts it
    loose = dataclasses.replace(upper, x=(0, Fraction(3, 5), 1))
    assert check_certificate(fig1, loose).valid


def _check_time(m, c, repeats=5):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        check_certificate(m, c)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


@pytest.mark.parametrize("query", [Query("Pmax", bound="lower"), Query("Pmin", bound="lower"), Query("Emax", bound="upper")])
def test_checker_scales_linearly(query):
    times = []
    for n in (400, 800):
        m = models.chain(n)
        c = generate_certificate(m, query)
        times.append(_check_time(m, c))
    assert times[1] < 4 * times[0]
