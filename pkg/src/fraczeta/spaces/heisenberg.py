"""The first Heisenberg group with its gauge metric and Lebesgue (Haar) measure."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..catalog import HEISENBERG_UNIT_BALL
from ..errors import DomainError
from .base import MMSpace, SubsetOracle
from .euclid import box_region


@dataclass(frozen=True)
class HeisenbergPoint:
    x: float
    y: float
    t: float

    def __mul__(self, other: "HeisenbergPoint") -> "HeisenbergPoint":
        # the sign of the symplectic term matches d(p, q) = ||p^-1 q||
        return HeisenbergPoint(self.x + other.x, self.y + other.y,
                               self.t + other.t + 2 * (other.x * self.y - self.x * other.y))

    def inverse(self) -> "HeisenbergPoint":
        return HeisenbergPoint(-self.x, -self.y, -self.t)

    def dilate(self, r: float) -> "HeisenbergPoint":
        return HeisenbergPoint(r * self.x, r * self.y, r * r * self.t)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.t)


def gauge(h: HeisenbergPoint) -> float:
    r2 = h.x * h.x + h.y * h.y
    return math.sqrt(math.sqrt(r2 * r2 + h.t * h.t))


def heisenberg_distance(p: HeisenbergPoint, q: HeisenbergPoint) -> float:
    """``||p^-1 q||``, written out so that it is exactly symmetric in floating point."""
    dx, dy = q.x - p.x, q.y - p.y
    dt = p.t - q.t + 2 * (p.y * q.x - p.x * q.y)
    r2 = dx * dx + dy * dy
    return math.sqrt(math.sqrt(r2 * r2 + dt * dt))


def heisenberg_ball_measure(r: float) -> float:
    if r < 0:
        raise DomainError("radius must be nonnegative")
    return r**4 * HEISENBERG_UNIT_BALL


class Heisenberg(MMSpace):
    """H^1 with Q = 4; samples are Lebesgue on the box ``[-1, 1]^3``."""

    name = "heisenberg"
    dimension_bounds = (4.0, 4.0)
    diameter = math.inf
    reference_measure = 8.0

    def distance(self, p, q):
        return heisenberg_distance(_as_point(p), _as_point(q))

    def sample(self, rng, n):
        return rng.uniform(-1.0, 1.0, size=(n, 3))

    def batch_distance(self, p, batch):
        p = _as_point(p)
        b = np.asarray(batch, float)
        dx, dy = b[:, 0] - p.x, b[:, 1] - p.y
        dt = p.t - b[:, 2] + 2 * (p.y * b[:, 0] - p.x * b[:, 1])
        r2 = dx * dx + dy * dy
        return np.sqrt(np.sqrt(r2 * r2 + dt * dt))

    def unbatch(self, batch):
        return [HeisenbergPoint(*row) for row in np.asarray(batch, float)]

    def ball_measure(self, p, r):
        return heisenberg_ball_measure(r)


def _as_point(p) -> HeisenbergPoint:
    if isinstance(p, HeisenbergPoint):
        return p
    x, y, t = (float(v) for v in p)
    return HeisenbergPoint(x, y, t)


class HeisenbergAxisSegment(SubsetOracle):
    """``{(0, 0, tau) : t0 <= tau <= t1}``; its tube is a cylinder with gauge half-ball caps."""

    def __init__(self, t0: float = 0.0, t1: float = 1.0):
        if t1 < t0:
            raise DomainError("segment needs t0 <= t1")
        self.space = Heisenberg()
        self.t0, self.t1 = float(t0), float(t1)
        self.name = "t-axis-segment"

    def distance(self, batch):
        b = np.asarray(batch, np.float64)
        return kernels.heisenberg_axis_distance(np.ascontiguousarray(b[:, 0]), np.ascontiguousarray(b[:, 1]),
                                                np.ascontiguousarray(b[:, 2]), self.t0, self.t1)

    def region(self, delta):
        # d <= delta forces x^2 + y^2 <= delta^2 and |t - tau| <= delta^2
        return box_region([-delta, -delta, self.t0 - delta * delta], [delta, delta, self.t1 + delta * delta])

    def exact_volume(self, t: float) -> float:
        return math.pi * t * t * (self.t1 - self.t0) + t**4 * HEISENBERG_UNIT_BALL

    def spec(self):
        return {"set": "t-axis-segment", "t0": self.t0, "t1": self.t1}


class HeisenbergPointSet(SubsetOracle):
    def __init__(self, p=(0.0, 0.0, 0.0)):
        self.space = Heisenberg()
        self.p = _as_point(p)
        self.name = "point"

    def distance(self, batch):
        return self.space.batch_distance(self.p, batch)

    def region(self, delta):
        p = self.p
        # |x - px|, |y - py| <= delta and the twisted t-offset is bounded by delta^2 + 2 delta (|px| + |py|)
        tw = delta * delta + 2 * delta * (abs(p.x) + abs(p.y))
        return box_region([p.x - delta, p.y - delta, p.t - tw], [p.x + delta, p.y + delta, p.t + tw])

    def spec(self):
        return {"set": "point", "at": list(self.p.as_tuple())}


def unit_ball_volume_quadrature() -> float:
    """``int_{-1}^{1} pi sqrt(1 - t^2) dt``: each slice of the gauge ball is a disc of radius^2 sqrt(1-t^2)."""
    from scipy.integrate import quad

    # t = sin(theta) removes the endpoint square-root singularity
    val, _ = quad(lambda th: math.pi * math.cos(th) ** 2, -math.pi / 2, math.pi / 2, epsrel=1e-12)
    return val
