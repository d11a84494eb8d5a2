"""Pure-Python sweep kernels; the reference the compiled module must match bit for bit.

All arrays use the CSR layout produced by ``kernels.pack``.  ``lo``/``hi``/``x``
are updated in place (Gauss-Seidel order over ``free``).
"""

import math

from .rounding import DOWN, NEAREST, UP, add_dir, mul_dir

_INF = math.inf


def _update(q, x, act_ptr, tr_ptr, succ, prob, rew, is_max, gamma, om, smooth, d):
    best = -_INF if is_max else _INF
    for a in range(act_ptr[q], act_ptr[q + 1]):
        acc = 0.0
        for k in range(tr_ptr[a], tr_ptr[a + 1]):
            acc = add_dir(acc, mul_dir(prob[k], x[succ[k]], d), d)
        if is_max:
            if acc > best:
                best = acc
        elif acc < best:
            best = acc
    val = add_dir(rew[q], best, d)
    if smooth:
        val = add_dir(mul_dir(gamma, x[q], d), mul_dir(om, val, d), d)
    return val


def interval_sweeps(act_ptr, tr_ptr, succ, p_lo, p_hi, rew_lo, rew_hi, free, lo, hi,
                    is_max, g_lo, om_lo, g_hi, om_hi, smooth, safe, eps, max_sweeps):
    """Run lower and upper sweeps until every free state has ``hi - lo <= eps * lo``.

    Returns ``(sweeps, converged)``.
    """
    d_lo = DOWN if safe else NEAREST
    d_hi = UP if safe else NEAREST
    sweeps = 0
    while sweeps < max_sweeps:
        for q in free:
            v = _update(q, lo, act_ptr, tr_ptr, succ, p_lo, rew_lo, is_max, g_lo, om_lo, smooth, d_lo)
            if safe:
                if v > lo[q]:
                    lo[q] = v
            else:
                lo[q] = v
        for q in free:
            v = _update(q, hi, act_ptr, tr_ptr, succ, p_hi, rew_hi, is_max, g_hi, om_hi, smooth, d_hi)
            if safe:
                if v < hi[q]:
                    hi[q] = v
            else:
                hi[q] = v
        sweeps += 1
        done = True
        for q in free:
            if not hi[q] - lo[q] <= eps * lo[q]:
                done = False
                break
        if done:
            return sweeps, True
    return sweeps, False


def vi_sweeps(act_ptr, tr_ptr, succ, prob, rew, free, x, is_max, gamma, om, smooth,
              direction, eps, max_sweeps):
    """Single-sided value iteration; stops when no free entry moves by more than ``eps`` relative."""
    sweeps = 0
    while sweeps < max_sweeps:
        moved = False
        for q in free:
            v = _update(q, x, act_ptr, tr_ptr, succ, prob, rew, is_max, gamma, om, smooth, direction)
            old = x[q]
            if abs(v - old) > eps * abs(v):
                moved = True
            x[q] = v
        sweeps += 1
        if not moved:
            return sweeps, True
    return sweeps, False
