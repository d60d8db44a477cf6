"""Snowflaked spaces and patchwork spaces built from snowflaked patches.

A patchwork distance is the infimum over chains ``x = z0, z1, ..., zm = y`` in which
consecutive points share a closed patch, of the sum of patch distances.  Inside one
patch the direct hop is optimal (``d^p`` is subadditive), so chains only bend at patch
boundaries.
"""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy.optimize import minimize
from scipy.sparse.csgraph import dijkstra

from ..errors import DomainError
from .base import MMSpace, Region, SubsetOracle
from .euclid import Euclidean


class Snowflake(MMSpace):
    """``(M, d^p, mu)``: distances raised to ``p``, Ahlfors exponents divided by ``p``."""

    def __init__(self, base: MMSpace, p: float):
        if not 0 < p <= 1:
            raise DomainError("snowflake exponent must lie in (0, 1]")
        if base.diameter > 1 + 1e-12:
            raise DomainError("snowflake needs a base space of diameter <= 1")
        self.base = base
        self.p = float(p)
        self.name = f"snowflake({base.name},{p:g})"
        d1, d2 = base.dimension_bounds
        self.dimension_bounds = (d1 / p, d2 / p)
        self.diameter = base.diameter**p
        self.reference_measure = base.reference_measure

    def distance(self, a, b):
        return self.base.distance(a, b) ** self.p

    def sample(self, rng, n):
        return self.base.sample(rng, n)

    def batch_distance(self, a, batch):
        return self.base.batch_distance(a, batch) ** self.p

    def unbatch(self, batch):
        return self.base.unbatch(batch)

    def ball_measure(self, a, r):
        return self.base.ball_measure(a, r ** (1 / self.p))

    def spec(self):
        return {"space": "snowflake", "base": self.base.spec(), "p": self.p}


def snowflake(space: MMSpace, p: float) -> MMSpace:
    return space if p == 1 else Snowflake(space, p)


# --------------------------------------------------------------------------
# interval [0, 1] with d^(1/2) on [0, 1/4]

_CUT = 0.25


def _check_unit(*xs):
    for x in xs:
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"point {x} outside the unit interval")


def patchwork_interval_distance(x: float, y: float) -> float:
    _check_unit(x, y)
    a, b = min(x, y), max(x, y)
    if b <= _CUT:
        return math.sqrt(b - a)
    if a >= _CUT:
        return b - a
    return math.sqrt(_CUT - a) + (b - _CUT)


class PatchworkInterval(MMSpace):
    """Lebesgue measure on ``[0, 1]``; 2-dimensional on ``[0, 1/4]``, 1-dimensional elsewhere."""

    name = "patchwork-interval"
    dimension_bounds = (1.0, 2.0)
    diameter = 1.25
    reference_measure = 1.0

    def distance(self, x, y):
        return patchwork_interval_distance(float(x), float(y))

    def sample(self, rng, n):
        return rng.random(n)

    def batch_distance(self, x, batch):
        x = float(x)
        b = np.asarray(batch, float)
        lo, hi = np.minimum(b, x), np.maximum(b, x)
        both_low = hi <= _CUT
        both_high = lo >= _CUT
        cross = np.sqrt(np.maximum(_CUT - lo, 0)) + np.maximum(hi - _CUT, 0)
        return np.where(both_low, np.sqrt(hi - lo), np.where(both_high, hi - lo, cross))

    def ball_interval(self, x: float, r: float) -> tuple[float, float]:
        x = float(x)
        if x <= _CUT:
            left = max(0.0, x - r * r)
            right = x + r * r if r * r <= _CUT - x else min(1.0, _CUT + r - math.sqrt(_CUT - x))
        else:
            right = min(1.0, x + r)
            left = x - r if r <= x - _CUT else max(0.0, _CUT - (r - (x - _CUT)) ** 2)
        return left, right

    def ball_measure(self, x, r):
        lo, hi = self.ball_interval(x, r)
        return hi - lo


class PatchworkIntervalSet(SubsetOracle):
    """A closed subinterval ``[a, b]`` of the patchwork interval (catalog: ``[1/8, 1/2]``)."""

    def __init__(self, a: float = 0.125, b: float = 0.5):
        _check_unit(a, b)
        self.space = PatchworkInterval()
        self.a, self.b = float(a), float(b)
        self.name = "interval"

    def distance(self, batch):
        x = np.asarray(batch, float)
        below = self.space.batch_distance(self.a, x)
        above = self.space.batch_distance(self.b, x)
        inside = (x >= self.a) & (x <= self.b)
        return np.where(inside, 0.0, np.where(x < self.a, below, above))

    def region(self, delta):
        return Region(1.0, lambda rng, n: rng.random(n))

    def spec(self):
        return {"set": "interval", "a": self.a, "b": self.b}


# --------------------------------------------------------------------------
# unit square split into quarters

# exponents on the lower-left, upper-left, lower-right and upper-right quarters
SQUARE_EXPONENTS = {"LL": 1 / 3, "UL": 1 / 2, "LR": 1 / 2, "UR": 1.0}
_PATCH_BOUNDS = {"LL": ((0.0, 0.5), (0.0, 0.5)), "UL": ((0.0, 0.5), (0.5, 1.0)),
                 "LR": ((0.5, 1.0), (0.0, 0.5)), "UR": ((0.5, 1.0), (0.5, 1.0))}


def _norm(dx, dy, metric):
    if metric == "linf":
        return np.maximum(np.abs(dx), np.abs(dy))
    return np.abs(dx) + np.abs(dy)


def _patches_of(x: float, y: float) -> list[str]:
    return [k for k, ((x0, x1), (y0, y1)) in _PATCH_BOUNDS.items() if x0 <= x <= x1 and y0 <= y <= y1]


class PatchworkSquare(MMSpace):
    """Unit square with quarters snowflaked to local dimensions 6, 4, 4, 2 under ``linf`` or ``l1``.

    ``distance`` solves the chain problem on a discretized boundary graph and then
    polishes the bend points with a bounded local optimizer.
    """

    reference_measure = 1.0

    def __init__(self, metric: str = "linf", nodes_per_half_edge: int = 64):
        if metric not in ("linf", "l1"):
            raise DomainError("metric must be 'linf' or 'l1'")
        self.metric = metric
        self.name = f"patchwork-square-{metric}"
        self.dimension_bounds = (2.0, 6.0)
        self.diameter = 1.0 if metric == "linf" else 2.0 ** 0.5 + 1.0
        self.m = int(nodes_per_half_edge)

    def hop(self, a, b) -> float:
        """Cheapest single-patch cost between two points (``inf`` if no patch holds both)."""
        best = math.inf
        shared = set(_patches_of(*a)) & set(_patches_of(*b))
        for k in shared:
            best = min(best, float(_norm(a[0] - b[0], a[1] - b[1], self.metric)) ** SQUARE_EXPONENTS[k])
        return best

    @cached_property
    def _boundary(self):
        """Boundary nodes (the cross ``x = 1/2`` and ``y = 1/2``) and their pairwise chain distances."""
        t = np.linspace(0.0, 1.0, 2 * self.m + 1)
        pts = [(0.5, v) for v in t] + [(u, 0.5) for u in t if u != 0.5]
        n = len(pts)
        w = np.full((n, n), np.inf)
        for i in range(n):
            for j in range(i + 1, n):
                w[i, j] = w[j, i] = self.hop(pts[i], pts[j])
        np.fill_diagonal(w, 0.0)
        dist, pred = dijkstra(np.where(np.isinf(w), 0, w), directed=False, return_predecessors=True)
        return np.array(pts), w, dist, pred

    def _param(self, pt):
        # boundary points are parameterized along the vertical or horizontal line
        return ("v", pt[1]) if pt[0] == 0.5 else ("h", pt[0])

    def distance(self, p, q):
        p = tuple(float(v) for v in p)
        q = tuple(float(v) for v in q)
        for v in p + q:
            if not 0.0 <= v <= 1.0:
                raise DomainError("points must lie in the unit square")
        direct = self.hop(p, q)
        pts, w, dist, pred = self._boundary
        cp = np.array([self.hop(p, tuple(b)) for b in pts])
        cq = np.array([self.hop(tuple(b), q) for b in pts])
        total = cp[:, None] + dist + cq[None, :]
        i, j = np.unravel_index(np.argmin(total), total.shape)
        best = min(direct, float(total[i, j]))
        if not math.isfinite(best) or best == direct:
            return direct
        # recover the bend sequence and polish it continuously
        chain = [j]
        while chain[-1] != i:
            chain.append(pred[i, chain[-1]])
        chain = chain[::-1]
        return min(best, self._polish(p, q, [pts[k] for k in chain]))

    def _polish(self, p, q, bends):
        kinds = [self._param(b) for b in bends]

        def build(z):
            out = [p]
            for (kind, _), v in zip(kinds, z):
                out.append((0.5, v) if kind == "v" else (v, 0.5))
            out.append(q)
            return out

        def cost(z):
            chain = build(np.clip(z, 0.0, 1.0))
            c = 0.0
            for a, b in zip(chain, chain[1:]):
                h = self.hop(a, b)
                if not math.isfinite(h):
                    return 1e9
                c += h
            return c

        z0 = np.array([v for _, v in kinds])
        res = minimize(cost, z0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        return min(cost(z0), float(res.fun))

    def sample(self, rng, n):
        return rng.random((n, 2))

    def batch_distance(self, p, batch):
        return np.array([self.distance(p, b) for b in np.asarray(batch)])

    def unbatch(self, batch):
        return [tuple(r) for r in np.asarray(batch)]

    def spec(self):
        return {"space": "patchwork-square", "metric": self.metric}


def patchwork_distance(spec: str, p, q) -> float:
    """Patchwork distance by name: ``patchwork-interval`` or ``patchwork-square-{linf,l1}``."""
    if spec == "patchwork-interval":
        return patchwork_interval_distance(float(p), float(q))
    if spec in ("patchwork-square-linf", "patchwork-square-l1"):
        return _square(spec.rsplit("-", 1)[1]).distance(p, q)
    from ..errors import LookupFailure

    raise LookupFailure("patchwork space", spec, ("patchwork-interval", "patchwork-square-linf", "patchwork-square-l1"))


_SQUARES: dict[str, PatchworkSquare] = {}


def _square(metric: str) -> PatchworkSquare:
    if metric not in _SQUARES:
        _SQUARES[metric] = PatchworkSquare(metric)
    return _SQUARES[metric]


class LowerLeftQuarter(SubsetOracle):
    """``A = [0, 1/2]^2``, the lower-left patch, in closed form.

    From the upper-left patch at height ``v`` above ``A`` and ``u`` left of the
    vertical boundary the options are the direct hop ``v^(1/2)`` or a hop onto the
    boundary followed by the upper-right metric down to the corner: for ``linf`` this
    costs ``u^(1/2) + v - u`` (when ``v >= u``), for ``l1`` it costs ``u^(1/2) + v``.
    The lower-right patch is symmetric; from the upper-right patch the corner is nearest.
    """

    name = "lower-left-quarter"

    def __init__(self, metric: str = "linf"):
        self.space = _square(metric)
        self.metric = metric

    def _side(self, u, v):
        direct = np.sqrt(v)
        if self.metric == "linf":
            bent = np.where(v >= u, np.sqrt(u) + v - u, np.inf)
        else:
            bent = np.sqrt(u) + v
        return np.minimum(direct, bent)

    def distance(self, batch):
        b = np.asarray(batch, float)
        x, y = b[:, 0], b[:, 1]
        out = np.zeros(len(b))
        ul = (x <= 0.5) & (y > 0.5)
        lr = (x > 0.5) & (y <= 0.5)
        ur = (x > 0.5) & (y > 0.5)
        out[ul] = self._side(0.5 - x[ul], y[ul] - 0.5)
        out[lr] = self._side(0.5 - y[lr], x[lr] - 0.5)
        out[ur] = _norm(x[ur] - 0.5, y[ur] - 0.5, self.metric)
        return out

    def region(self, delta):
        return Region(1.0, lambda rng, n: rng.random((n, 2)))

    def spec(self):
        return {"set": self.name}


def euclidean_interval() -> Euclidean:
    return Euclidean(1)
