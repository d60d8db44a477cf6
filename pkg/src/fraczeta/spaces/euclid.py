"""Euclidean spaces and the Euclidean test sets (segment, box, point, 1/4-Cantor set)."""
from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..errors import DomainError
from .base import MMSpace, Region, SubsetOracle


class Euclidean(MMSpace):
    """``R^N`` with Lebesgue measure; the reference region is the unit cube."""

    def __init__(self, dim: int = 1, lo: float = 0.0, hi: float = 1.0):
        if dim < 1:
            raise DomainError("dimension must be a positive integer")
        self.dim = int(dim)
        self.lo, self.hi = float(lo), float(hi)
        self.name = f"euclidean-{self.dim}"
        self.dimension_bounds = (float(dim), float(dim))
        self.diameter = (self.hi - self.lo) * math.sqrt(dim)
        self.reference_measure = (self.hi - self.lo) ** dim

    def distance(self, p, q) -> float:
        return float(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float)))

    def sample(self, rng, n):
        return rng.uniform(self.lo, self.hi, size=(n, self.dim))

    def batch_distance(self, p, batch):
        return np.linalg.norm(np.asarray(batch) - np.asarray(p, float), axis=1)

    def ball_measure(self, p, r):
        """Measure of the ball intersected with the reference cube (exact for ``dim`` 1)."""
        if self.dim != 1:
            return None
        x = float(np.asarray(p).ravel()[0])
        return max(0.0, min(self.hi, x + r) - max(self.lo, x - r))

    def spec(self):
        return {"space": "euclidean", "dim": self.dim}


def _box_sampler(lo, hi):
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)

    def draw(rng, n):
        return lo + (hi - lo) * rng.random((n, lo.size))

    return draw


def box_region(lo, hi) -> Region:
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    return Region(float(np.prod(hi - lo)), _box_sampler(lo, hi))


class Segment2(SubsetOracle):
    """Segment from ``p0`` to ``p1`` in the plane (default the unit segment on the x-axis)."""

    def __init__(self, p0=(0.0, 0.0), p1=(1.0, 0.0)):
        self.space = Euclidean(2)
        self.p0 = tuple(float(v) for v in p0)
        self.p1 = tuple(float(v) for v in p1)
        self.name = "segment"

    def distance(self, batch):
        b = np.ascontiguousarray(batch, dtype=np.float64)
        return kernels.segment2_distance(np.ascontiguousarray(b[:, 0]), np.ascontiguousarray(b[:, 1]),
                                         *self.p0, *self.p1)

    def region(self, delta):
        lo = np.minimum(self.p0, self.p1) - delta
        hi = np.maximum(self.p0, self.p1) + delta
        return box_region(lo, hi)

    def exact_volume(self, t: float) -> float:
        length = math.dist(self.p0, self.p1)
        return 2 * t * length + math.pi * t * t

    def spec(self):
        return {"set": "segment", "p0": list(self.p0), "p1": list(self.p1)}


class Box(SubsetOracle):
    """Axis-aligned box in ``R^N``."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, float)
        self.hi = np.asarray(hi, float)
        if self.lo.shape != self.hi.shape or np.any(self.hi < self.lo):
            raise DomainError("box needs lo <= hi componentwise")
        self.space = Euclidean(self.lo.size)
        self.name = "box"

    def distance(self, batch):
        b = np.asarray(batch, float).reshape(-1, self.lo.size)
        gap = np.maximum(self.lo - b, 0) + np.maximum(b - self.hi, 0)
        return np.linalg.norm(gap, axis=1)

    def region(self, delta):
        return box_region(self.lo - delta, self.hi + delta)

    def spec(self):
        return {"set": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


class EuclideanPoint(SubsetOracle):
    def __init__(self, p):
        self.p = np.asarray(p, float).ravel()
        self.space = Euclidean(self.p.size)
        self.name = "point"

    def distance(self, batch):
        return np.linalg.norm(np.asarray(batch, float).reshape(-1, self.p.size) - self.p, axis=1)

    def region(self, delta):
        return box_region(self.p - delta, self.p + delta)

    def spec(self):
        return {"set": "point", "at": self.p.tolist()}


class CantorQuarter(SubsetOracle):
    """The 1/4-Cantor set ``K = phi1(K) u phi2(K)`` with ``phi1 = x/4`` and ``phi2 = x/4 + 3/4``."""

    dimension = math.log(2) / math.log(4)

    def __init__(self, depth: int = 26):
        if not 1 <= depth <= 26:
            raise DomainError("Cantor depth must lie in [1, 26] (exact in binary floating point)")
        self.depth = depth
        self.space = Euclidean(1)
        self.name = "cantor"

    def distance(self, batch):
        x = np.ascontiguousarray(np.asarray(batch, np.float64).reshape(-1))
        return kernels.cantor_distance(x, self.depth)

    def region(self, delta):
        return box_region([-delta], [1.0 + delta])

    @staticmethod
    def box_count(eps: float) -> int:
        """Number of level-k intervals of length ``4^-k`` with ``4^-k <= eps``: ``2^k``."""
        k = math.ceil(math.log(1 / eps) / math.log(4))
        return 2**k

    def spec(self):
        return {"set": "cantor", "depth": self.depth}
