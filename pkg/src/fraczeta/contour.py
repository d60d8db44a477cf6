"""Argument-principle oracle, independent of the residue calculus.

The winding number of ``z`` around a rectangle is accumulated from phase
increments ``arg(z(b)/z(a))`` along the boundary, with each edge bisected until
every increment is small.  Only point evaluations of ``z`` are used.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InstabilityError
from .zeta import MeromorphicZeta, eval_zeta

_MAX_STEP = math.pi / 8
_MAX_DEPTH = 48


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @classmethod
    def around(cls, center: complex, half_width: float, half_height: float | None = None) -> "Rect":
        hh = half_width if half_height is None else half_height
        return cls(center.real - half_width, center.real + half_width, center.imag - hh, center.imag + hh)

    def corners(self) -> list[complex]:
        return [complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)]

    def contains(self, s: complex) -> bool:
        return self.re_min < s.real < self.re_max and self.im_min < s.imag < self.im_max


def _edge_phase(f, a: complex, b: complex, fa: complex, fb: complex, depth: int) -> float:
    step = cmath.phase(fb / fa)
    m = 0.5 * (a + b)
    fm = f(m)
    left = cmath.phase(fm / fa)
    right = cmath.phase(fb / fm)
    if abs(step) < _MAX_STEP and abs(left) < _MAX_STEP and abs(right) < _MAX_STEP and abs(left + right - step) < 1e-12:
        return step
    if depth >= _MAX_DEPTH:
        raise InstabilityError(f"contour did not resolve near s={m}; boundary too close to a zero or pole")
    return _edge_phase(f, a, m, fa, fm, depth + 1) + _edge_phase(f, m, b, fm, fb, depth + 1)


def winding_number(f, rect: Rect, initial_pieces: int = 16) -> int:
    """``(1/2 pi) * total change of arg f`` counterclockwise around ``rect``."""
    corners = rect.corners()
    total = 0.0
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        nodes = [a + (b - a) * k / initial_pieces for k in range(initial_pieces + 1)]
        vals = [f(x) for x in nodes]
        for v, x in zip(vals, nodes):
            if v == 0 or not cmath.isfinite(v):
                raise InstabilityError(f"zeta vanishes or blows up on the contour at s={x}")
        for k in range(initial_pieces):
            total += _edge_phase(f, nodes[k], nodes[k + 1], vals[k], vals[k + 1], 0)
    turns = total / (2 * math.pi)
    n = round(turns)
    if abs(turns - n) > 1e-6:
        raise InstabilityError(f"non-integer winding {turns}")
    return n


def confirm_poles_numeric(z: MeromorphicZeta, rect: Rect) -> int:
    """Zeros minus poles of ``z`` inside ``rect`` (negative when only poles lie inside)."""
    return winding_number(lambda s: eval_zeta(z, s), rect)


def screened_pole_count(z: MeromorphicZeta, center: complex, res: complex, half_width: float = 0.1) -> tuple[int, float]:
    """Winding count on a square around a simple pole, shrunk until it is provably zero-free.

    Writing ``z = res/(s - p) + h`` the square is zero-free when ``max|h| * diag < |res|``
    on its boundary (``h`` is holomorphic inside, so the boundary maximum bounds it).
    Returns the count and the half-width used.
    """
    hw = half_width
    for _ in range(30):
        rect = Rect.around(center, hw)
        diag = math.hypot(2 * hw, 2 * hw)
        pts = []
        cs = rect.corners()
        for i in range(4):
            a, b = cs[i], cs[(i + 1) % 4]
            pts.extend(a + (b - a) * k / 32 for k in range(32))
        bound = max(abs(eval_zeta(z, s) - res / (s - center)) for s in pts)
        if bound * diag < 0.5 * abs(res):
            return confirm_poles_numeric(z, rect), hw
        hw /= 2
    raise InstabilityError(f"could not isolate the pole at {center} from nearby zeros")


def contour_residue(z: MeromorphicZeta, center: complex, radius: float, nodes: int = 256) -> complex:
    """``(1/2 pi i) * integral of z`` over a circle, by the trapezoid rule (spectrally accurate)."""
    total = 0j
    for k in range(nodes):
        e = cmath.exp(2j * math.pi * k / nodes)
        total += eval_zeta(z, center + radius * e) * e
    return total * radius / nodes
