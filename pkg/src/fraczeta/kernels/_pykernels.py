"""Pure numpy versions of the distance kernels, used when the extension is not built."""
from __future__ import annotations

import numpy as np


def cantor_distance(x, depth: int = 26):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out = np.where(x <= 0, -x, out)
    out = np.where(x >= 1, x - 1, out)
    live = (x > 0) & (x < 1)
    a = np.zeros_like(x)
    length = 1.0
    for _ in range(depth):
        if not live.any():
            break
        q = 0.25 * length
        left = x <= a + q
        right = x >= a + length - q
        gap = live & ~left & ~right
        out = np.where(gap, np.minimum(x - (a + q), a + length - q - x), out)
        a = np.where(live & right, a + length - q, a)
        live &= ~gap
        length = q
    return out


def segment2_distance(x, y, x0, y0, x1, y1):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx, dy = x1 - x0, y1 - y0
    ll = dx * dx + dy * dy
    u = np.clip(((x - x0) * dx + (y - y0) * dy) / ll, 0.0, 1.0) if ll > 0 else np.zeros_like(x)
    return np.hypot(x - (x0 + u * dx), y - (y0 + u * dy))


def heisenberg_axis_distance(x, y, t, t0, t1):
    r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
    dt = np.asarray(t) - np.clip(t, t0, t1)
    return np.sqrt(np.sqrt(r2 * r2 + dt * dt))


def laakso_pair_distance(diff, hx, hy, depth: int):
    diff = np.asarray(diff, dtype=np.uint64)
    hx = np.asarray(hx, dtype=np.float64)
    hy = np.asarray(hy, dtype=np.float64)
    lo = np.minimum(hx, hy)
    hi = np.maximum(hx, hy)
    n = diff.shape[0]
    below = np.full((n, depth), np.inf)
    above = np.full((n, depth), -np.inf)
    for k in range(1, depth + 1):
        need = ((diff >> np.uint64(k - 1)) & np.uint64(1)).astype(bool)
        if not need.any():
            continue
        scale = float(4**k)
        ja = np.ceil(lo * scale)
        ja = np.where(np.mod(ja, 4) == 0, ja + 1, ja)
        inside = (ja < scale) & (ja / scale <= hi)
        need &= ~inside
        ab = np.where(ja < scale, ja / scale, np.inf)
        jb = np.floor(lo * scale)
        jb = np.where(np.mod(jb, 4) == 0, jb - 1, jb)
        hb = np.where(jb > 0, jb / scale, -np.inf)
        below[:, k - 1] = np.where(need, hb, np.inf)
        above[:, k - 1] = np.where(need, ab, -np.inf)
    order = np.argsort(-below, axis=1, kind="stable")
    below = np.take_along_axis(below, order, axis=1)
    above = np.take_along_axis(above, order, axis=1)
    # suffix maxima: suff[:, j] = max(hi, above[:, j:])
    suff = np.maximum.accumulate(above[:, ::-1], axis=1)[:, ::-1]
    suff = np.maximum(suff, hi[:, None])
    best = suff[:, 0] - lo
    tail = np.concatenate([suff[:, 1:], hi[:, None]], axis=1)
    span = tail - np.minimum(lo[:, None], below)
    best = np.minimum(best, span.min(axis=1)) if depth else best
    return 2.0 * best - (hi - lo)


def laakso_distance(addr, h, target_addr: int, target_h: float, depth: int):
    addr = np.asarray(addr, dtype=np.uint64)
    diff = addr ^ np.uint64(target_addr)
    return laakso_pair_distance(diff, h, np.full(addr.shape, float(target_h)), depth)


def laakso_fiber_distance(addr, h, depth: int, cantor_depth: int = 24):
    """Level-synchronous branch and bound over Cantor intervals, vectorized across points."""
    addr = np.asarray(addr, dtype=np.uint64)
    h = np.asarray(h, dtype=np.float64)
    n = addr.shape[0]
    best = np.minimum(laakso_pair_distance(addr, h, np.zeros(n), depth),
                      laakso_pair_distance(addr, h, np.ones(n), depth))
    idx = np.arange(n)
    lo = np.zeros(n)
    length = 1.0
    for _ in range(cantor_depth):
        if idx.size == 0:
            break
        q = 0.25 * length
        s, hh = addr[idx], h[idx]
        for end in (lo + q, lo + length - q):
            np.minimum.at(best, idx, laakso_pair_distance(s, hh, end, depth))
        kids_idx, kids_lo = [], []
        for start in (lo, lo + length - q):
            lb = laakso_pair_distance(s, hh, start + 0.5 * q, depth) - 0.5 * q
            keep = lb < best[idx]
            kids_idx.append(idx[keep])
            kids_lo.append(start[keep])
        idx = np.concatenate(kids_idx)
        lo = np.concatenate(kids_lo)
        length = q
    return best
