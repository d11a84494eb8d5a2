# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels.  Semantics mirror ``_pykernels`` exactly.

Directed rounding: the error of a sum comes from TwoSum, the error of a
product from a fused multiply-add; the result is nudged one ulp with
nextafter when the error points the wrong way.
"""

from libc.math cimport fma, nextafter, isfinite, INFINITY, fabs

cdef double TINY = 2.0 ** -969


cdef inline double add_dir(double a, double b, int d) nogil:
    cdef double s = a + b
    cdef double bb, err
    if d == 0 or not isfinite(s):
        return s
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    if d < 0 and err < 0:
        return nextafter(s, -INFINITY)
    if d > 0 and err > 0:
        return nextafter(s, INFINITY)
    return s


cdef inline double mul_dir(double a, double b, int d) nogil:
    cdef double p = a * b
    cdef double err, r
    if d == 0 or not isfinite(p):
        return p
    if a == 0.0 or b == 0.0:
        return p
    if p < TINY:
        if d < 0:
            r = nextafter(p, -INFINITY)
            return r if r > 0.0 else 0.0
        return nextafter(p, INFINITY)
    err = fma(a, b, -p)
    if d < 0 and err < 0:
        return nextafter(p, -INFINITY)
    if d > 0 and err > 0:
        return nextafter(p, INFINITY)
    return p


cdef inline double update(Py_ssize_t q, double[::1] x, const long long[::1] act_ptr,
                          const long long[::1] tr_ptr, const long long[::1] succ,
                          const double[::1] prob, const double[::1] rew, bint is_max,
                          double gamma, double om, bint smooth, int d) nogil:
    cdef double best = -INFINITY if is_max else INFINITY
    cdef double acc, val
    cdef long long a, k
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


def interval_sweeps(const long long[::1] act_ptr, const long long[::1] tr_ptr,
                    const long long[::1] succ, const double[::1] p_lo, const double[::1] p_hi,
                    const double[::1] rew_lo, const double[::1] rew_hi,
                    const long long[::1] free, double[::1] lo, double[::1] hi,
                    bint is_max, double g_lo, double om_lo, double g_hi, double om_hi,
                    bint smooth, bint safe, double eps, long long max_sweeps):
    cdef int d_lo = -1 if safe else 0
    cdef int d_hi = 1 if safe else 0
    cdef long long sweeps = 0
    cdef Py_ssize_t i, q, nfree = free.shape[0]
    cdef double v
    cdef bint done = False
    with nogil:
        while sweeps < max_sweeps:
            for i in range(nfree):
                q = free[i]
                v = update(q, lo, act_ptr, tr_ptr, succ, p_lo, rew_lo, is_max, g_lo, om_lo, smooth, d_lo)
                if safe:
                    if v > lo[q]:
                        lo[q] = v
                else:
                    lo[q] = v
            for i in range(nfree):
                q = free[i]
                v = update(q, hi, act_ptr, tr_ptr, succ, p_hi, rew_hi, is_max, g_hi, om_hi, smooth, d_hi)
                if safe:
                    if v < hi[q]:
                        hi[q] = v
                else:
                    hi[q] = v
            sweeps += 1
            done = True
            for i in range(nfree):
                q = free[i]
                if not (hi[q] - lo[q] <= eps * lo[q]):
                    done = False
                    break
            if done:
                break
    return sweeps, bool(done)


def vi_sweeps(const long long[::1] act_ptr, const long long[::1] tr_ptr,
              const long long[::1] succ, const double[::1] prob, const double[::1] rew,
              const long long[::1] free, double[::1] x, bint is_max, double gamma, double om,
              bint smooth, int direction, double eps, long long max_sweeps):
    cdef long long sweeps = 0
    cdef Py_ssize_t i, q, nfree = free.shape[0]
    cdef double v, old
    cdef bint moved = True
    with nogil:
        while sweeps < max_sweeps:
            moved = False
            for i in range(nfree):
                q = free[i]
                v = update(q, x, act_ptr, tr_ptr, succ, prob, rew, is_max, gamma, om, smooth, direction)
                old = x[q]
                if fabs(v - old) > eps * fabs(v):
                    moved = True
                x[q] = v
            sweeps += 1
            if not moved:
                break
    return sweeps, not moved
