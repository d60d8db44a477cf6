"""Empirical Ahlfors-regularity audit from ball measures."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import DomainError
from .base import MMSpace

DIM_TOL = 0.2


@dataclass(frozen=True)
class AuditReport:
    d1: float
    d2: float
    k_lower: float | None
    k_upper: float | None
    verdict: str
    q: float | None
    n_balls: int
    radii: tuple[float, float]

    def to_dict(self) -> dict:
        return asdict(self)


def _ball_measures(space: MMSpace, center, radii: np.ndarray, reference, ref_weight: float) -> np.ndarray:
    if hasattr(space, "ball_measures"):
        return np.asarray(space.ball_measures(center, radii), float)
    exact = [space.ball_measure(center, r) for r in radii]
    if all(v is not None for v in exact):
        return np.asarray(exact, float)
    d = np.sort(space.batch_distance(center, reference))
    return ref_weight * np.searchsorted(d, radii, side="right")


def _label(x: float) -> str:
    v = round(2 * x) / 2
    return str(int(v)) if v == int(v) else str(v)


def regularity_audit(space: MMSpace, n_balls: int = 100, seed: int = 0, q: float | None = None,
                     r_min: float | None = None, r_max: float | None = None, n_radii: int = 12,
                     n_reference: int = 200_000) -> AuditReport:
    """Fit power laws to the envelopes of ``r -> mu(B(x, r))`` over random centers.

    ``d1`` is the slope of the upper envelope (``mu <= K r^d1``) and ``d2`` the slope of
    the lower envelope (``mu >= r^d2 / K``), so ``d1 <= d2`` at small radii.  With ``q``:
    ``regular`` when both are within ``DIM_TOL`` of ``q``; ``upper-only`` when only the
    ``r^q`` envelope bound (``d2``) matches and the other side grows faster; ``lower-only``
    when only ``d1`` matches; otherwise ``type(d1,d2)``.
    """
    if n_balls < 100:
        raise DomainError("n_balls must be at least 100")
    if q is None:
        lo, hi = space.dimension_bounds
        q = lo if lo == hi else None
    diam = space.diameter if math.isfinite(space.diameter) else 1.0
    default = getattr(space, "audit_radii", (diam / 256, diam / 8))
    r_min = r_min if r_min is not None else default[0]
    r_max = r_max if r_max is not None else default[1]
    radii = np.geomspace(r_min, r_max, n_radii)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    centers = space.unbatch(space.sample(rng, n_balls))
    reference = space.sample(rng, n_reference)
    weight = space.reference_measure / n_reference
    mu = np.array([_ball_measures(space, c, radii, reference, weight) for c in centers])
    upper = mu.max(axis=0)
    lower = mu.min(axis=0)
    ok = lower > 0
    if ok.sum() < 3:
        raise DomainError("ball measures vanish; increase n_reference or r_min")
    logr = np.log(radii[ok])
    d1 = float(np.polyfit(logr, np.log(upper[ok]), 1)[0])
    d2 = float(np.polyfit(logr, np.log(lower[ok]), 1)[0])
    k_lower = k_upper = None
    if q is not None:
        ratios = mu[:, ok] / radii[ok] ** q
        k_lower, k_upper = float(ratios.min()), float(ratios.max())
        near1, near2 = abs(d1 - q) <= DIM_TOL, abs(d2 - q) <= DIM_TOL
        if near1 and near2:
            verdict = "regular"
        elif near2 and d1 < q - DIM_TOL:
            verdict = "upper-only"
        elif near1 and d2 > q + DIM_TOL:
            verdict = "lower-only"
        else:
            verdict = f"type({_label(d1)},{_label(d2)})"
    else:
        verdict = "regular" if d2 - d1 <= 2 * DIM_TOL else f"type({_label(d1)},{_label(d2)})"
    return AuditReport(d1, d2, k_lower, k_upper, verdict, q, len(centers), (float(r_min), float(r_max)))
