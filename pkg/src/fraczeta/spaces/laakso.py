"""Laakso space over the 1/4-Cantor set, at finite address depth.

A point is an address in ``{1, 2}^n`` (a Cantor branch) and a height in ``[0, 1]``.
Internally addresses are bit masks: bit ``k-1`` is set when letter ``k`` is 2.  An
order-``k`` wormhole at height ``j/4^k`` (``j`` not divisible by 4) identifies
addresses that differ only in letter ``k``.

Geodesics go down to some height ``a``, up to ``b`` and back down, where ``[a, b]``
is the shortest interval holding both heights and one wormhole of every order whose
letter differs; the length is ``2(b - a) - |h(x) - h(y)|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import kernels
from ..errors import DomainError
from .base import MMSpace, Region, SubsetOracle

MAX_DEPTH = 40


def wormhole_height(*digits: int) -> Fraction:
    """``sum m_i 4^-i`` for digits ``m_1..m_k``."""
    if not digits:
        raise DomainError("at least one digit is required")
    for m in digits:
        if not (isinstance(m, int) and 0 <= m < 4):
            raise DomainError(f"wormhole digits must be integers in [0, 4), got {m!r}")
    if len(digits) > 1 and digits[-1] == 0:
        raise DomainError("the last digit of a wormhole of order k > 1 must be positive")
    return sum((Fraction(m, 4**i) for i, m in enumerate(digits, start=1)), Fraction(0))


def wormhole_order(h) -> int | None:
    """Order ``k`` of the wormhole level at height ``h``, or ``None`` (0, 1 and non-dyadic heights).

    ``k`` is the least integer with ``4^k h`` an integer, so ``1/2 = 2/4`` has order 1.
    """
    h = Fraction(h)
    if h <= 0 or h >= 1:
        return None
    q = h.denominator
    if q & (q - 1):
        return None
    return (q.bit_length()) // 2


@dataclass(frozen=True)
class LaaksoPoint:
    address: str
    height: float

    def __post_init__(self):
        if any(c not in "12" for c in self.address):
            raise DomainError("address letters must be 1 or 2")
        if len(self.address) > MAX_DEPTH:
            raise DomainError(f"address longer than {MAX_DEPTH}")
        if not 0.0 <= self.height <= 1.0:
            raise DomainError("height must lie in [0, 1]")

    @property
    def bits(self) -> int:
        return address_bits(self.address)


def address_bits(address: str) -> int:
    return sum(1 << i for i, c in enumerate(address) if c == "2")


def bits_address(bits: int, depth: int) -> str:
    return "".join("2" if (bits >> i) & 1 else "1" for i in range(depth))


def laakso_distance(x: LaaksoPoint, y: LaaksoPoint, depth: int) -> float:
    """Geodesic distance on the depth-``depth`` wormhole network."""
    if not 0 <= depth <= MAX_DEPTH:
        raise DomainError(f"depth must lie in [0, {MAX_DEPTH}]")
    if len(x.address) > depth or len(y.address) > depth:
        raise DomainError("address longer than the requested depth")
    diff = np.array([x.bits ^ y.bits], dtype=np.uint64)
    return float(kernels.laakso_pair_distance(diff, np.array([x.height]), np.array([y.height]), depth)[0])


@dataclass(frozen=True)
class LaaksoBatch:
    bits: np.ndarray
    heights: np.ndarray

    def __len__(self):
        return self.bits.shape[0]


class LaaksoSpace(MMSpace):
    """Coin-flip measure on addresses times Lebesgue measure on heights; total mass 1."""

    name = "laakso-f"
    dimension_bounds = (1.5, 1.5)
    reference_measure = 1.0

    def __init__(self, depth: int = 16):
        if not 1 <= depth <= MAX_DEPTH:
            raise DomainError(f"depth must lie in [1, {MAX_DEPTH}]")
        self.depth = depth
        self.diameter = 1.0

    def distance(self, p, q):
        return laakso_distance(p, q, self.depth)

    def sample_heights(self, rng, n, lo=0.0, hi=1.0) -> LaaksoBatch:
        bits = rng.integers(0, 1 << self.depth, size=n, dtype=np.uint64)
        return LaaksoBatch(bits, rng.uniform(lo, hi, size=n))

    def sample(self, rng, n):
        return self.sample_heights(rng, n)

    def batch_distance(self, p, batch):
        return kernels.laakso_distance(batch.bits, batch.heights, p.bits, p.height, self.depth)

    def unbatch(self, batch):
        return [LaaksoPoint(bits_address(int(b), self.depth), float(h)) for b, h in zip(batch.bits, batch.heights)]

    def spec(self):
        return {"space": "laakso-f", "depth": self.depth}


class LaaksoPointSet(SubsetOracle):
    """A single point; ``wormhole-point`` is ``(1 1 1 ..., 1/4)``."""

    def __init__(self, space: LaaksoSpace, point: LaaksoPoint | None = None, name: str = "wormhole-point"):
        self.space = space
        self.point = point or LaaksoPoint("", 0.25)
        self.name = name

    def distance(self, batch):
        return kernels.laakso_distance(batch.bits, batch.heights, self.point.bits, self.point.height, self.space.depth)

    def region(self, delta):
        # every path between the two points sweeps the height gap, so d >= |dh|
        lo = max(0.0, self.point.height - delta)
        hi = min(1.0, self.point.height + delta)
        return Region(hi - lo, lambda rng, n: self.space.sample_heights(rng, n, lo, hi))

    def spec(self):
        return {"set": self.name, "address": self.point.address, "height": self.point.height}


class LaaksoCantorFiber(SubsetOracle):
    """``{0} x K``: the branch ``1 1 1 ...`` at every height in the 1/4-Cantor set."""

    name = "cantor-fiber"

    def __init__(self, space: LaaksoSpace, cantor_depth: int = 24):
        self.space = space
        self.cantor_depth = cantor_depth

    def distance(self, batch):
        return kernels.laakso_fiber_distance(batch.bits, batch.heights, self.space.depth, self.cantor_depth)

    def region(self, delta):
        return Region(1.0, lambda rng, n: self.space.sample_heights(rng, n))

    def spec(self):
        return {"set": self.name, "cantor_depth": self.cantor_depth}


class HeightBand:
    """``{h in [lo, hi]}`` over all addresses; measure ``hi - lo``.  Used for sampler checks."""

    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = float(lo), float(hi)

    def indicator(self, batch) -> np.ndarray:
        return (batch.heights >= self.lo) & (batch.heights <= self.hi)

    @property
    def measure(self) -> float:
        return self.hi - self.lo


def depth_error_bound(depth: int) -> float:
    """Truncating the network at ``depth`` changes distances by at most ``4^-depth`` (heuristic bound)."""
    return math.ldexp(1.0, -2 * depth)
