"""Kernel backend selection and the CSR packing shared by both backends.

The compiled module is used when it imports; otherwise the pure-Python
fallback takes over.  ``precision_bits`` other than 53 bypasses both and runs
an exact-rational emulation of directed rounding.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from ..mdp import Mdp
from . import _pykernels
from .rounding import DOWN, NEAREST, UP, round_directed, to_float

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

_active = "cython" if _ckernels is not None else "python"


def backend_name() -> str:
    return _active


def use_backend(name: str) -> None:
    """Switch the process-wide kernel backend (``cython`` or ``python``)."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"kernel backend {name!r} is not available")
    _active = name


def active():
    return BACKENDS[_active]


@dataclass
class Packed:
    act_ptr: array
    tr_ptr: array
    succ: array
    p_lo: array
    p_hi: array
    rew_lo: array
    rew_hi: array
    free: array
    probs: list  # exact probabilities, same order as succ
    rews: list


def pack(m: Mdp, rew: Sequence, free: Sequence[int], safe: bool) -> Packed:
    act_ptr, tr_ptr, succ = array("q", [0]), array("q", [0]), array("q")
    p_lo, p_hi, probs = array("d"), array("d"), []
    d_lo, d_hi = (DOWN, UP) if safe else (NEAREST, NEAREST)
    for s in range(m.n_states):
        for dist in m.transitions[s]:
            for t, p in dist:
                succ.append(t)
                probs.append(p)
                p_lo.append(to_float(p, d_lo))
                p_hi.append(to_float(p, d_hi))
            tr_ptr.append(len(succ))
        act_ptr.append(len(tr_ptr) - 1)
    rews = [Fraction(r) for r in rew]
    return Packed(
        act_ptr, tr_ptr, succ, p_lo, p_hi,
        array("d", (to_float(r, d_lo) for r in rews)),
        array("d", (to_float(r, d_hi) for r in rews)),
        array("q", free), probs, rews,
    )


# exact-rational emulation at arbitrary precision ---------------------------

def _round(v, d: int, bits: int):
    if v == math.inf or v == 0:
        return v
    if d == DOWN:
        return round_directed(v, "down", bits)
    if d == UP:
        return round_directed(v, "up", bits)
    lo, hi = round_directed(v, "down", bits), round_directed(v, "up", bits)
    return lo if v - lo <= hi - v else hi


def _emulated_update(q, x, pk: Packed, probs, rew, is_max, gamma, om, smooth, d, bits):
    best = None
    for a in range(pk.act_ptr[q], pk.act_ptr[q + 1]):
        acc = Fraction(0)
        for k in range(pk.tr_ptr[a], pk.tr_ptr[a + 1]):
            xv = x[pk.succ[k]]
            prod = math.inf if xv == math.inf else _round(probs[k] * xv, d, bits)
            acc = math.inf if prod == math.inf or acc == math.inf else _round(acc + prod, d, bits)
        if best is None or (acc > best if is_max else acc < best):
            best = acc
    val = math.inf if best == math.inf else _round(rew[q] + best, d, bits)
    if smooth and val != math.inf:
        val = _round(_round(gamma * x[q], d, bits) + _round(om * val, d, bits), d, bits)
    return val


def emulated_interval_sweeps(pk: Packed, lo: list, hi: list, is_max, gamma, om_lo, om_hi,
                             smooth, safe, eps, max_sweeps, bits):
    d_lo, d_hi = (DOWN, UP) if safe else (NEAREST, NEAREST)
    probs_lo = [_round(p, d_lo, bits) for p in pk.probs]
    probs_hi = [_round(p, d_hi, bits) for p in pk.probs]
    rew_lo = [_round(r, d_lo, bits) for r in pk.rews]
    rew_hi = [_round(r, d_hi, bits) for r in pk.rews]
    sweeps = 0
    while sweeps < max_sweeps:
        for q in pk.free:
            v = _emulated_update(q, lo, pk, probs_lo, rew_lo, is_max, gamma, om_lo, smooth, d_lo, bits)
            lo[q] = max(lo[q], v) if safe else v
        for q in pk.free:
            v = _emulated_update(q, hi, pk, probs_hi, rew_hi, is_max, gamma, om_hi, smooth, d_hi, bits)
            hi[q] = min(hi[q], v) if safe else v
        sweeps += 1
        if all(hi[q] - lo[q] <= eps * lo[q] for q in pk.free):
            return sweeps, True
    return sweeps, False


def emulated_vi_sweeps(pk: Packed, x: list, is_max, gamma, om, smooth, direction, eps, max_sweeps, bits):
    probs = [_round(p, direction, bits) for p in pk.probs]
    rew = [_round(r, direction, bits) for r in pk.rews]
    sweeps = 0
    while sweeps < max_sweeps:
        moved = False
        for q in pk.free:
            v = _emulated_update(q, x, pk, probs, rew, is_max, gamma, om, smooth, direction, bits)
            if v != x[q] and (v == math.inf or abs(v - x[q]) > eps * v):
                moved = True
            x[q] = v
        sweeps += 1
        if not moved:
            return sweeps, True
    return sweeps, False
