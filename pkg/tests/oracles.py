"""Independent reference computations used to check the package.

None of these import the code under test; they are slow, direct constructions.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra


def laakso_network_distance(depth: int, ax: int, hx: float, ay: int, hy: float) -> float:
    """Shortest path on the explicit depth-``depth`` wormhole graph.

    Vertices are (address, height) for every wormhole height and the two query heights;
    fibers are paths in height, and order-k wormholes join addresses differing in bit k-1.
    """
    heights = {0.0, 1.0, hx, hy}
    order = {}
    for k in range(1, depth + 1):
        for j in range(1, 4**k):
            if j % 4:
                heights.add(j / 4**k)
                order[j / 4**k] = k
    hs = sorted(heights)
    idx = {h: i for i, h in enumerate(hs)}
    nh = len(hs)
    rows, cols, w = [], [], []
    for a in range(2**depth):
        for i in range(nh - 1):
            rows.append(a * nh + i)
            cols.append(a * nh + i + 1)
            w.append(hs[i + 1] - hs[i])
        for h, k in order.items():
            b = a ^ (1 << (k - 1))
            rows.append(a * nh + idx[h])
            cols.append(b * nh + idx[h])
            w.append(1e-300)  # identified points; csgraph drops explicit zeros
    n = 2**depth * nh
    g = coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
    d = dijkstra(g, directed=False, indices=ax * nh + idx[hx])
    return float(d[ay * nh + idx[hy]])


def cantor_tube(t: float, levels: int = 40) -> float:
    """``|K_t|`` for the 1/4-Cantor set: ``1 + 2t`` minus the uncovered part of every gap.

    Level ``j`` has ``2^(j-1)`` gaps of length ``2 * 4^-j``.
    """
    total = 1.0 + 2.0 * t
    for j in range(1, levels + 1):
        g = 2.0 * 4.0**-j
        total -= 2 ** (j - 1) * max(0.0, g - 2 * t)
    return total


def cantor_points(level: int) -> np.ndarray:
    """Left endpoints of the ``2^level`` construction intervals."""
    pts = np.zeros(1)
    for _ in range(level):
        pts = np.concatenate([pts / 4, pts / 4 + 0.75])
    return pts


def box_counting_dimension(points: np.ndarray, eps_list) -> float:
    logs = [(math.log(1 / e), math.log(np.unique(np.floor(points / e)).size)) for e in eps_list]
    x, y = np.array(logs).T
    return float(np.polyfit(x, y, 1)[0])


def segment_tube_grid(t: float, n: int = 4000) -> float:
    """Midpoint grid count of ``{d(x, [0,1] x {0}) <= t}`` in the plane."""
    xs = np.linspace(-t, 1 + t, n, endpoint=False) + (1 + 2 * t) / (2 * n)
    ys = np.linspace(-t, t, n, endpoint=False) + t / n
    cell = (1 + 2 * t) / n * (2 * t) / n
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    dx = np.maximum(0.0, np.maximum(-X, X - 1))
    return float(((dx * dx + Y * Y) <= t * t).sum() * cell)


def gauge_ball_volume_grid(n: int = 200) -> float:
    """Midpoint grid count of ``(x^2 + y^2)^2 + t^2 <= 1`` inside ``[-1, 1]^3``."""
    c = np.linspace(-1, 1, n, endpoint=False) + 1 / n
    X, Y = np.meshgrid(c, c, indexing="ij")
    r4 = (X * X + Y * Y) ** 2
    inside = 0
    for t in c:
        inside += int((r4 + t * t <= 1).sum())
    return inside * (2 / n) ** 3


def heisenberg_gauge_distance(p, q) -> float:
    """Distance from the group law ``(x,y,t)(x',y',t') = (x+x', y+y', t+t' + 2(x'y - xy'))``."""
    px, py, pt = p
    qx, qy, qt = q
    # p^-1 = (-px, -py, -pt); then multiply by q
    x, y = qx - px, qy - py
    t = -pt + qt + 2 * (qx * (-py) - (-px) * qy)
    return ((x * x + y * y) ** 2 + t * t) ** 0.25


def patchwork_quarter_distance(x: float, y: float, metric: str, n: int = 2001) -> float:
    """``d((x, y), [0, 1/2]^2)`` for the quartered square by brute-force chains.

    Chains have at most two bends on the cross ``{x = 1/2} u {y = 1/2}``; each hop
    stays inside one quarter and costs ``norm^exponent``.
    """
    expo = {"LL": 1 / 3, "UL": 1 / 2, "LR": 1 / 2, "UR": 1.0}
    bounds = {"LL": (0, 0.5, 0, 0.5), "UL": (0, 0.5, 0.5, 1), "LR": (0.5, 1, 0, 0.5), "UR": (0.5, 1, 0.5, 1)}

    def norm(dx, dy):
        return np.maximum(abs(dx), abs(dy)) if metric == "linf" else abs(dx) + abs(dy)

    def members(px, py):
        out = []
        for k, (x0, x1, y0, y1) in bounds.items():
            out.append((k, (px >= x0 - 1e-15) & (px <= x1 + 1e-15) & (py >= y0 - 1e-15) & (py <= y1 + 1e-15)))
        return out

    def hop(ax, ay, bx, by):
        best = np.full(np.broadcast(ax, bx).shape, np.inf)
        ma, mb = members(ax, ay), members(bx, by)
        for (k, ia), (_, ib) in zip(ma, mb):
            c = norm(ax - bx, ay - by) ** expo[k]
            best = np.where(ia & ib, np.minimum(best, c), best)
        return best

    if x <= 0.5 and y <= 0.5:
        return 0.0
    s = np.linspace(0, 1, n)
    cross_x = np.concatenate([np.full(n, 0.5), s])
    cross_y = np.concatenate([s, np.full(n, 0.5)])
    in_a = (cross_x <= 0.5) & (cross_y <= 0.5)
    first = hop(np.full(cross_x.shape, x), np.full(cross_y.shape, y), cross_x, cross_y)
    one = np.where(in_a, first, np.inf).min()
    # two hops: p -> b, then b -> the nearest point of A on the cross
    to_a = np.full(cross_x.shape, np.inf)
    ax, ay = cross_x[in_a], cross_y[in_a]
    for i in range(cross_x.size):
        if in_a[i]:
            to_a[i] = 0.0
        else:
            to_a[i] = hop(np.full(ax.shape, cross_x[i]), np.full(ay.shape, cross_y[i]), ax, ay).min()
    two = (first + to_a).min()
    return float(min(one, two))


def gauge_ball_volume_quad() -> float:
    """Unit gauge ball in cylindrical shells: ``int_0^1 2 pi rho * 2 sqrt(1 - rho^4) d rho``.

    With ``u = rho^2`` this is ``2 pi int_0^1 sqrt(1 + u) (1 - u)^(1/2) du``, integrated
    with the algebraic endpoint weight.
    """
    from scipy.integrate import quad

    val, _ = quad(lambda u: 2 * math.pi * math.sqrt(1 + u), 0, 1, weight="alg", wvar=(0, 0.5),
                  epsrel=1e-12)
    return val
