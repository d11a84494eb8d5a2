import random
from array import array
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mdp_from_seed, seeds
from mdpcert.solvers import kernels
from mdpcert.solvers.config import SolverConfig
from mdpcert.solvers.iteration import interval_iteration
from mdpcert.solvers.rounding import DOWN, NEAREST, UP, to_float

needs_compiled = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled kernels not built")


@pytest.fixture
def restore_backend():
    name = kernels.backend_name()
    yield
    kernels.use_backend(name)


def _setup(seed, safe):
    m = mdp_from_seed(seed, max_states=8)
    T = m.label("target")
    free = [s for s in range(m.n_states) if s not in T]
    rng = random.Random(seed)
    rew = [Fraction(rng.randint(0, 5), rng.randint(1, 7)) for _ in range(m.n_states)]
    return m, T, free, kernels.pack(m, rew, free, safe)


def _start(m, T):
    lo = array("d", [1.0 if s in T else 0.0 for s in range(m.n_states)])
    hi = array("d", [1.0 if s in T else 50.0 for s in range(m.n_states)])
    return lo, hi


def _interval(backend, pk, lo, hi, is_max, smooth, safe, sweeps):
    om = 1 - Fraction(1, 20)
    return backend.interval_sweeps(
        pk.act_ptr, pk.tr_ptr, pk.succ, pk.p_lo, pk.p_hi, pk.rew_lo, pk.rew_hi, pk.free,
        lo, hi, is_max, 0.05, to_float(om, DOWN if safe else NEAREST),
        0.05, to_float(om, UP if safe else NEAREST), smooth, safe, 0.0, sweeps,
    )


def test_backend_selection(restore_backend):
    kernels.use_backend("python")
    assert kernels.backend_name() == "python"
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


@needs_compiled
def test_compiled_backend_is_default():
    import importlib

    fresh = importlib.reload(kernels)
    assert fresh.backend_name() == "cython"


@needs_compiled
@settings(max_examples=60)
@given(seeds, st.booleans(), st.booleans(), st.booleans())
def test_backends_bit_identical(seed, is_max, smooth, safe):
    m, T, free, pk = _setup(seed, safe)
    out = []
    for name in ("python", "cython"):
        lo, hi = _start(m, T)
        res = _interval(kernels.BACKENDS[name], pk, lo, hi, is_max, smooth, safe, 25)
        x = array("d", [0.0 if s not in T else 1.0 for s in range(m.n_states)])
        res2 = kernels.BACKENDS[name].vi_sweeps(
            pk.act_ptr, pk.tr_ptr, pk.succ, pk.p_lo, pk.rew_lo, pk.free, x, is_max,
            0.05, 0.95, smooth, DOWN if safe else NEAREST, 1e-9, 40,
        )
        out.append((res, res2, lo.tobytes(), hi.tobytes(), x.tobytes()))
    assert out[0] == out[1]


@settings(max_examples=40)
@given(seeds, st.booleans(), st.booleans())
def test_float_kernels_match_53_bit_emulation(seed, is_max, smooth):
    m, T, free, pk = _setup(seed, True)
    lo, hi = _start(m, T)
    _interval(kernels.BACKENDS["python"], pk, lo, hi, is_max, smooth, True, 12)
    elo = [Fraction(v) for v in _start(m, T)[0]]
    ehi = [Fraction(v) for v in _start(m, T)[1]]
    g = Fraction(0.05)
    om = 1 - g
    kernels.emulated_interval_sweeps(
        pk, elo, ehi, is_max, g, kernels._round(om, DOWN, 53), kernels._round(om, UP, 53),
        smooth, True, Fraction(0), 12, 53,
    )
    assert [Fraction(v) for v in lo] == elo
    assert [Fraction(v) for v in hi] == ehi


@settings(max_examples=25)
@given(seeds)
def test_interval_iteration_same_on_both_backends(seed):
    m = mdp_from_seed(seed)
    cfg = SolverConfig(method="ii")
    results = []
    previous = kernels.backend_name()
    try:
        for name in sorted(kernels.BACKENDS):
            kernels.use_backend(name)
            bp = interval_iteration(m, "Emax", cfg)
            assert bp.meta["backend"] == name
            results.append((bp.lower, bp.upper, bp.sweeps))
    finally:
        kernels.use_backend(previous)
    assert all(r == results[0] for r in results)


def test_pack_layout(fig1):
    pk = kernels.pack(fig1, [0, 0, 0], [0, 1], True)
    assert list(pk.act_ptr) == [0, 2, 4, 5]
    assert list(pk.tr_ptr) == [0, 1, 2, 5, 6, 7]
    third = Fraction(1, 3)
    k = list(pk.succ).index(1)
    assert Fraction(pk.p_lo[k]) < third < Fraction(pk.p_hi[k])
