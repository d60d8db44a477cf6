# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled distance-to-set kernels.  Signatures mirror ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, floor, ceil, INFINITY, ldexp

cnp.import_array()

cdef inline double _clamp(double v, double lo, double hi) noexcept nogil:
    return lo if v < lo else (hi if v > hi else v)


cdef double _cantor1(double x, int depth) noexcept nogil:
    cdef double a = 0.0, length = 1.0, q
    cdef int level
    if x <= 0.0:
        return -x
    if x >= 1.0:
        return x - 1.0
    for level in range(depth):
        q = 0.25 * length
        if x <= a + q:
            length = q
        elif x >= a + length - q:
            a = a + length - q
            length = q
        else:
            return min(x - (a + q), a + length - q - x)
    return 0.0


def cantor_distance(double[::1] x, int depth=26):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _cantor1(x[i], depth)
    return out


def segment2_distance(double[::1] x, double[::1] y, double x0, double y0, double x1, double y1):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double dx = x1 - x0, dy = y1 - y0, ll = dx * dx + dy * dy, u, px, py
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            u = _clamp(((x[i] - x0) * dx + (y[i] - y0) * dy) / ll, 0.0, 1.0) if ll > 0 else 0.0
            px = x[i] - (x0 + u * dx)
            py = y[i] - (y0 + u * dy)
            o[i] = sqrt(px * px + py * py)
    return out


def heisenberg_axis_distance(double[::1] x, double[::1] y, double[::1] t, double t0, double t1):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double r2, dt
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            r2 = x[i] * x[i] + y[i] * y[i]
            dt = t[i] - _clamp(t[i], t0, t1)
            o[i] = sqrt(sqrt(r2 * r2 + dt * dt))
    return out


cdef double _laakso1(unsigned long long s, double hx, double hy, int depth) noexcept nogil:
    """Down-up-down geodesic length between heights hx, hy whose addresses differ on bits ``s``."""
    cdef double lo = min(hx, hy), hi = max(hx, hy)
    cdef double below[64]
    cdef double above[64]
    cdef int m = 0, k, i, j
    cdef double scale, jj, ja, hb, ab, a, b, best, suff
    if s == 0:
        return hi - lo
    for k in range(1, depth + 1):
        if not (s >> (k - 1)) & 1:
            continue
        scale = ldexp(1.0, 2 * k)
        ja = ceil(lo * scale)
        if ja - 4.0 * floor(ja / 4.0) == 0.0:
            ja += 1.0
        if ja < scale and ja / scale <= hi:
            continue  # an order-k wormhole lies between the two heights
        ab = ja / scale if ja < scale else INFINITY
        jj = floor(lo * scale)
        if jj - 4.0 * floor(jj / 4.0) == 0.0:
            jj -= 1.0
        hb = jj / scale if jj > 0.0 else -INFINITY
        # insertion sort by below, descending
        i = m
        while i > 0 and below[i - 1] < hb:
            below[i] = below[i - 1]
            above[i] = above[i - 1]
            i -= 1
        below[i] = hb
        above[i] = ab
        m += 1
    if m == 0:
        return hi - lo
    # candidate: every constraint met from above
    suff = hi
    for i in range(m):
        suff = max(suff, above[i])
    best = suff - lo
    # candidate j: constraints 0..j met from below, the rest from above
    for j in range(m):
        a = min(lo, below[j])
        b = hi
        for i in range(j + 1, m):
            b = max(b, above[i])
        if b - a < best:
            best = b - a
    return 2.0 * best - (hi - lo)


def laakso_distance(cnp.uint64_t[::1] addr, double[::1] h, unsigned long long target_addr, double target_h, int depth):
    cdef Py_ssize_t i, n = addr.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _laakso1(addr[i] ^ target_addr, h[i], target_h, depth)
    return out


def laakso_pair_distance(cnp.uint64_t[::1] diff, double[::1] hx, double[::1] hy, int depth):
    cdef Py_ssize_t i, n = diff.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _laakso1(diff[i], hx[i], hy[i], depth)
    return out


cdef double _fiber1(unsigned long long s, double h, int depth, int cantor_depth) noexcept nogil:
    """Distance from (s, h) to {address 0} x K by branch and bound over Cantor intervals."""
    cdef double lo_stack[128]
    cdef double len_stack[128]
    cdef int lvl_stack[128]
    cdef int top = 0, lvl
    cdef double best, c, length, q, mid, lb, d0, d1
    best = min(_laakso1(s, h, 0.0, depth), _laakso1(s, h, 1.0, depth))
    lo_stack[0] = 0.0
    len_stack[0] = 1.0
    lvl_stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        c = lo_stack[top]
        length = len_stack[top]
        lvl = lvl_stack[top]
        if lvl >= cantor_depth:
            continue
        q = 0.25 * length
        # children [c, c+q] and [c+length-q, c+length]; endpoints belong to K
        d0 = _laakso1(s, h, c + q, depth)
        d1 = _laakso1(s, h, c + length - q, depth)
        best = min(best, min(d0, d1))
        # child lower bounds from the 1-Lipschitz property in the target height
        mid = c + 0.5 * q
        lb = _laakso1(s, h, mid, depth) - 0.5 * q
        if lb < best and top < 126:
            lo_stack[top] = c
            len_stack[top] = q
            lvl_stack[top] = lvl + 1
            top += 1
        mid = c + length - 0.5 * q
        lb = _laakso1(s, h, mid, depth) - 0.5 * q
        if lb < best and top < 126:
            lo_stack[top] = c + length - q
            len_stack[top] = q
            lvl_stack[top] = lvl + 1
            top += 1
    return best


def laakso_fiber_distance(cnp.uint64_t[::1] addr, double[::1] h, int depth, int cantor_depth=24):
    cdef Py_ssize_t i, n = addr.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _fiber1(addr[i], h[i], depth, cantor_depth)
    return out
