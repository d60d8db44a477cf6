"""Exact piecewise-power models of tube volumes ``t -> |A_t|``.

A :class:`TubeFunction` is a finite sum of three kinds of pieces on ``(0, delta]``:

* terminal power terms ``c * t**alpha`` valid on the whole interval,
* geometric ladders: band ``k >= k0`` of a :class:`ScaleBandFamily` covers
  ``(lo * b**-k, hi * b**-k]`` and contributes ``sum c * m**k * t**alpha`` there,
* finite pieces: one explicit band ``(lo, hi]`` with fixed coefficients.

Bands are half-open on the left so that a point on a shared boundary belongs to
exactly one band of a family.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

CONTINUITY_RTOL = 1e-9
MONOTONE_ATOL = 1e-12


def as_fraction(x) -> Fraction:
    """Convert ints, floats (exactly), Fractions and ``"p/q"`` strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite value {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _num_out(q: Fraction):
    # binary-exact values go out as floats, anything else as "p/q"
    return float(q) if _is_dyadic(q) else fraction_str(q)


@dataclass(frozen=True)
class PowerTerm:
    """``coeff * growth**k * t**exponent`` (``k`` is the band index, 0 on terminal terms)."""

    coeff: float
    exponent: Fraction
    growth: Fraction = Fraction(1)
    exact: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponent", as_fraction(self.exponent))
        object.__setattr__(self, "growth", as_fraction(self.growth))
        if self.exact is not None:
            object.__setattr__(self, "exact", as_fraction(self.exact))
        object.__setattr__(self, "coeff", float(self.coeff))
        if not math.isfinite(self.coeff):
            raise DomainError("coefficient must be finite")
        if self.growth < 0:
            raise DomainError("growth must be >= 0")

    @classmethod
    def rational(cls, coeff, exponent, growth=1) -> "PowerTerm":
        q = as_fraction(coeff)
        return cls(float(q), as_fraction(exponent), as_fraction(growth), exact=q)

    def value(self, t: float, k: int = 0) -> float:
        m = float(self.growth) ** k if k else 1.0
        return self.coeff * m * t ** float(self.exponent)


def _terms(terms: Iterable) -> tuple[PowerTerm, ...]:
    out = tuple(terms)
    for term in out:
        if not isinstance(term, PowerTerm):
            raise TypeError("terms must be PowerTerm instances")
    return out


@dataclass(frozen=True)
class ScaleBandFamily:
    base: Fraction
    hi: Fraction
    lo: Fraction
    k0: int
    terms: tuple[PowerTerm, ...]

    def __post_init__(self):
        for name in ("base", "hi", "lo"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        object.__setattr__(self, "terms", _terms(self.terms))
        if self.base <= 1:
            raise DomainError("band base must exceed 1")
        if not (0 < self.lo < self.hi <= self.base * self.lo):
            raise DomainError("bands need 0 < lo < hi <= base*lo")
        if int(self.k0) != self.k0 or self.k0 < 0:
            raise DomainError("k0 must be a nonnegative integer")
        object.__setattr__(self, "k0", int(self.k0))

    @property
    def top(self) -> float:
        return float(self.hi) * float(self.base) ** (-self.k0)

    def band_bounds(self, k: int) -> tuple[float, float]:
        scale = float(self.base) ** (-k)
        return float(self.lo) * scale, float(self.hi) * scale

    def band_index(self, t: float, side: str = "left") -> int | None:
        """Band containing ``t``; ``side='left'`` uses ``(lo, hi]``, ``'right'`` uses ``[lo, hi)``."""
        if t <= 0:
            return None
        b = float(self.base)
        guess = math.floor(math.log(float(self.hi) / t) / math.log(b))
        for k in (guess - 1, guess, guess + 1):
            if k < self.k0:
                continue
            lo, hi = self.band_bounds(k)
            if side == "left" and lo < t <= hi:
                return k
            if side == "right" and lo <= t < hi:
                return k
        return None

    def value(self, t: float, side: str = "left") -> float:
        k = self.band_index(t, side)
        if k is None:
            return 0.0
        return sum(term.value(t, k) for term in self.terms)


@dataclass(frozen=True)
class BandPiece:
    """A single explicit band ``(lo, hi]``; term growth is ignored."""

    lo: Fraction
    hi: Fraction
    terms: tuple[PowerTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        object.__setattr__(self, "terms", _terms(self.terms))
        if not (0 < self.lo < self.hi):
            raise DomainError("piece needs 0 < lo < hi")

    def contains(self, t: float, side: str = "left") -> bool:
        lo, hi = float(self.lo), float(self.hi)
        return lo < t <= hi if side == "left" else lo <= t < hi

    def value(self, t: float, side: str = "left") -> float:
        if not self.contains(t, side):
            return 0.0
        return sum(term.value(t) for term in self.terms)


@dataclass(frozen=True)
class TubeFunction:
    delta: Fraction
    terminal: tuple[PowerTerm, ...] = ()
    ladders: tuple[ScaleBandFamily, ...] = ()
    pieces: tuple[BandPiece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        object.__setattr__(self, "terminal", _terms(self.terminal))
        object.__setattr__(self, "ladders", tuple(self.ladders))
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __call__(self, t: float) -> float:
        return evaluate_tube(self, t)

    def boundaries(self, t_min: float) -> list[float]:
        """Band endpoints inside ``[t_min, delta]``, ascending."""
        pts = set()
        d = float(self.delta)
        for fam in self.ladders:
            k = fam.k0
            while True:
                lo, hi = fam.band_bounds(k)
                if hi < t_min:
                    break
                for x in (lo, hi):
                    if t_min <= x <= d:
                        pts.add(x)
                k += 1
        for piece in self.pieces:
            for x in (float(piece.lo), float(piece.hi)):
                if t_min <= x <= d:
                    pts.add(x)
        return sorted(pts)

    def truncate(self, delta2) -> "TubeFunction":
        """Same function restricted to ``(0, delta2]``.

        Whole bands above ``delta2`` are dropped by raising ``k0``; a band that
        straddles ``delta2`` is cut and its lower part kept as a :class:`BandPiece`.
        """
        d2 = as_fraction(delta2)
        if not (0 < d2 <= self.delta):
            raise DomainError("delta2 must lie in (0, delta]")
        ladders, pieces = [], []
        for fam in self.ladders:
            k = fam.k0
            while fam.hi * fam.base ** (-k) > d2:
                lo_k = fam.lo * fam.base ** (-k)
                if lo_k < d2:
                    m_terms = tuple(
                        PowerTerm(
                            t.coeff * float(t.growth) ** k,
                            t.exponent,
                            exact=None if t.exact is None else t.exact * t.growth**k,
                        )
                        for t in fam.terms
                    )
                    pieces.append(BandPiece(lo_k, d2, m_terms))
                k += 1
            ladders.append(ScaleBandFamily(fam.base, fam.hi, fam.lo, k, fam.terms))
        for piece in self.pieces:
            if piece.lo >= d2:
                continue
            pieces.append(BandPiece(piece.lo, min(piece.hi, d2), piece.terms))
        return TubeFunction(d2, self.terminal, tuple(ladders), tuple(pieces))

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        def term_out(t: PowerTerm) -> dict:
            out = {"c": t.coeff, "alpha": fraction_str(t.exponent), "m": _num_out(t.growth)}
            if t.exact is not None:
                out["c_exact"] = fraction_str(t.exact)
            return out

        doc = {
            "delta": _num_out(self.delta),
            "terminal": [term_out(t) for t in self.terminal],
            "ladders": [
                {
                    "base": _num_out(f.base),
                    "hi": _num_out(f.hi),
                    "lo": _num_out(f.lo),
                    "k0": f.k0,
                    "terms": [term_out(t) for t in f.terms],
                }
                for f in self.ladders
            ],
        }
        if self.pieces:
            doc["pieces"] = [
                {"lo": _num_out(p.lo), "hi": _num_out(p.hi), "terms": [term_out(t) for t in p.terms]}
                for p in self.pieces
            ]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "TubeFunction":
        def term_in(d: dict) -> PowerTerm:
            exact = d.get("c_exact")
            return PowerTerm(float(d["c"]), as_fraction(d["alpha"]), as_fraction(d.get("m", 1)),
                             exact=None if exact is None else as_fraction(exact))

        return cls(
            as_fraction(doc["delta"]),
            tuple(term_in(t) for t in doc.get("terminal", ())),
            tuple(
                ScaleBandFamily(as_fraction(f["base"]), as_fraction(f["hi"]), as_fraction(f["lo"]),
                                int(f.get("k0", 0)), tuple(term_in(t) for t in f.get("terms", ())))
                for f in doc.get("ladders", ())
            ),
            tuple(
                BandPiece(as_fraction(p["lo"]), as_fraction(p["hi"]), tuple(term_in(t) for t in p.get("terms", ())))
                for p in doc.get("pieces", ())
            ),
        )

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "TubeFunction":
        return cls.from_dict(json.loads(text))


def _raw_value(tf: TubeFunction, t: float, side: str) -> float:
    total = math.fsum(term.value(t) for term in tf.terminal)
    total += math.fsum(fam.value(t, side) for fam in tf.ladders)
    total += math.fsum(p.value(t, side) for p in tf.pieces)
    return total


def evaluate_tube(tf: TubeFunction, t: float) -> float:
    """Value of ``|A_t|`` at ``0 < t <= delta``."""
    t = float(t)
    if not (0 < t <= float(tf.delta)):
        raise DomainError(f"t={t!r} outside (0, {float(tf.delta)!r}]")
    return _raw_value(tf, t, "left")


def evaluate_many(tf: TubeFunction, ts: Sequence[float]) -> np.ndarray:
    return np.array([evaluate_tube(tf, t) for t in ts], dtype=float)


@dataclass
class ValidationReport:
    nonnegative: bool = True
    monotone: bool = True
    continuous: bool = True
    covered: bool = True
    bands_inside: bool = True
    failures: list[str] = field(default_factory=list)
    max_continuity_deviation: float = 0.0

    @property
    def passed(self) -> bool:
        return self.nonnegative and self.monotone and self.continuous and self.covered and self.bands_inside


def validate_tube(tf: TubeFunction, n_grid: int = 4000, decades: float = 8.0) -> ValidationReport:
    """Check nonnegativity, monotonicity, band continuity and coverage on a log grid."""
    rep = ValidationReport()
    d = float(tf.delta)
    t_min = d * 10.0 ** (-decades)

    for fam in tf.ladders:
        if fam.top > d * (1 + 1e-15):
            rep.bands_inside = False
            rep.failures.append(f"ladder band k0={fam.k0} reaches {fam.top:g} > delta")
    for piece in tf.pieces:
        if float(piece.hi) > d * (1 + 1e-15):
            rep.bands_inside = False
            rep.failures.append(f"piece ({float(piece.lo):g},{float(piece.hi):g}] exceeds delta")

    grid = np.geomspace(t_min, d, n_grid)
    grid = np.unique(np.concatenate([grid, tf.boundaries(t_min)]))
    vals = np.array([_raw_value(tf, t, "left") for t in grid])
    if np.any(vals < -MONOTONE_ATOL):
        rep.nonnegative = False
        rep.failures.append(f"negative value {vals.min():.3e} at t={grid[np.argmin(vals)]:.3e}")
    drops = np.diff(vals)
    if np.any(drops < -MONOTONE_ATOL):
        i = int(np.argmin(drops))
        rep.monotone = False
        rep.failures.append(f"decrease {drops[i]:.3e} between t={grid[i]:.6g} and t={grid[i + 1]:.6g}")

    if not tf.terminal:
        for t in grid:
            inside = any(fam.band_index(t) is not None for fam in tf.ladders) or any(
                p.contains(t) for p in tf.pieces
            )
            if not inside and (tf.ladders or tf.pieces):
                rep.covered = False
                rep.failures.append(f"t={t:.6g} not covered by any band")
                break

    for x in tf.boundaries(t_min):
        if x >= d:
            continue
        left = _raw_value(tf, x, "left")
        right = _raw_value(tf, x, "right")
        scale = max(abs(left), abs(right))
        dev = abs(left - right) / scale if scale > 0 else 0.0
        rep.max_continuity_deviation = max(rep.max_continuity_deviation, dev)
        if dev > CONTINUITY_RTOL:
            rep.continuous = False
            rep.failures.append(f"discontinuity at t={x:.6g}: {left:.12g} vs {right:.12g}")
    return rep
