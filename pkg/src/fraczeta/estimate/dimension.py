"""Minkowski dimension and content from tube data, and log-periodicity detection."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import DomainError, InsufficientRangeError
from .tube import EmpiricalTubeData

MIN_POINTS = 10
MIN_DECADES = 2.0
MAX_REL_ERR = 0.25
FFT_POINTS = 1024
FFT_PAD = 16
PEAK_FACTOR = 3.0
MIN_CYCLES = 2.5


@dataclass(frozen=True)
class MinkowskiEstimate:
    """``dim`` is the slope of the full-range fit; ``dim_lower``/``dim_upper`` come from decade windows."""

    dim: float
    dim_lower: float
    dim_upper: float
    content_lower: float
    content_upper: float
    content_dim: float
    fit_window: tuple[float, float]
    r_squared: float
    content_rel_err: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _weighted_slope(x, y, w):
    W = w.sum()
    xm, ym = (w * x).sum() / W, (w * y).sum() / W
    sxx = (w * (x - xm) ** 2).sum()
    b = (w * (x - xm) * (y - ym)).sum() / sxx
    a = ym - b * xm
    resid = y - a - b * x
    syy = (w * (y - ym) ** 2).sum()
    r2 = 1.0 - (w * resid**2).sum() / syy if syy > 0 else 1.0
    return b, a, r2


def usable(data: EmpiricalTubeData) -> np.ndarray:
    """Points with positive volume and relative standard error below ``MAX_REL_ERR``."""
    v, e = data.volume, data.stderr
    return (v > 0) & (e <= MAX_REL_ERR * np.where(v > 0, v, 1.0))


def estimate_minkowski(data: EmpiricalTubeData, content_dim: float | None = None) -> MinkowskiEstimate:
    """Fit ``log |A_t| ~ (Q - D) log t``.

    Contents are the extremes of ``|A_t| / t^(Q - D)`` over the fit window, with
    ``D = content_dim`` when given and the fitted dimension otherwise.
    """
    if len(data) < MIN_POINTS or math.log10(data.t[-1] / data.t[0]) < MIN_DECADES:
        raise InsufficientRangeError(f"need at least {MIN_POINTS} points over {MIN_DECADES:g} decades of t")
    ok = usable(data)
    t, v, e = data.t[ok], data.volume[ok], data.stderr[ok]
    if t.size < MIN_POINTS or math.log10(t[-1] / t[0]) < MIN_DECADES:
        raise InsufficientRangeError(
            f"only {t.size} points with positive, well-resolved volume over "
            f"[{t[0] if t.size else 0:.3g}, {t[-1] if t.size else 0:.3g}]; raise t_min or the sample count"
        )
    q = float(data.q)
    x, y = np.log(t), np.log(v)
    # equal weight per log scale; binomial weights would let the largest t dominate
    w = np.ones_like(x)
    slope, _, r2 = _weighted_slope(x, y, w)
    dim = q - slope
    window = math.log(10.0)
    slopes = []
    lo = 0
    for i in range(t.size):
        while x[i] - x[lo] > window:
            lo += 1
        if x[i] - x[0] >= window and i - lo + 1 >= MIN_POINTS // 2:
            slopes.append(_weighted_slope(x[lo:i + 1], y[lo:i + 1], w[lo:i + 1])[0])
    if not slopes:
        slopes = [slope]
    d_c = dim if content_dim is None else float(content_dim)
    ratio = v / t ** (q - d_c)
    rel = e / v
    return MinkowskiEstimate(
        dim=float(dim), dim_lower=float(q - max(slopes)), dim_upper=float(q - min(slopes)),
        content_lower=float(ratio.min()), content_upper=float(ratio.max()), content_dim=d_c,
        fit_window=(float(t[0]), float(t[-1])), r_squared=float(r2),
        content_rel_err=float(rel[[ratio.argmin(), ratio.argmax()]].max()),
    )


@dataclass(frozen=True)
class OscillationReport:
    period: float
    amplitude: float
    imag_spacing: float
    confidence: float

    @property
    def significant(self) -> bool:
        return self.confidence > PEAK_FACTOR

    def to_dict(self) -> dict:
        d = asdict(self)
        d["significant"] = self.significant
        return d


def detect_log_periodicity(data: EmpiricalTubeData, dim: float) -> OscillationReport:
    """Dominant frequency of ``u -> log(|A_t| / t^(Q - D))`` with ``u = -log t``.

    The residual is resampled onto ``FFT_POINTS`` uniform points, detrended, Hann
    windowed and zero padded.  ``confidence`` is the peak magnitude over the median
    magnitude of the unpadded spectrum.
    """
    ok = usable(data)
    t, v = data.t[ok], data.volume[ok]
    if t.size < 4:
        raise DomainError("too few usable tube points")
    u = -np.log(t)[::-1]
    r = (np.log(v) - (float(data.q) - dim) * np.log(t))[::-1]
    grid = np.linspace(u[0], u[-1], FFT_POINTS)
    span = grid[-1] - grid[0]
    res = np.interp(grid, u, r)
    # a cubic absorbs the slow drift of smooth correction terms such as t^(Q-D+1)
    res = res - np.polyval(np.polyfit(grid - grid.mean(), res, 3), grid - grid.mean())
    win = np.hanning(FFT_POINTS)
    du = grid[1] - grid[0]
    spec_pad = np.abs(np.fft.rfft(res * win, FFT_POINTS * FFT_PAD))
    freqs = np.fft.rfftfreq(FFT_POINTS * FFT_PAD, du)
    coarse = np.abs(np.fft.rfft(res * win))
    # the data must hold at least three periods; lower bins only see detrending leakage
    k_min = int(np.searchsorted(freqs, MIN_CYCLES / span))
    k = k_min + int(np.argmax(spec_pad[k_min:]))
    df = freqs[1] - freqs[0]
    if k == k_min or k == spec_pad.size - 1:
        # no interior maximum: the spectrum just decays from the low end
        return OscillationReport(math.inf, 0.0, 0.0, 0.0)
    a, b, c = spec_pad[k - 1], spec_pad[k], spec_pad[k + 1]
    den = a - 2 * b + c
    shift = 0.5 * (a - c) / den if den != 0 else 0.0
    f = (k + shift) * df
    amplitude = 2.0 * b / win.sum()
    median = float(np.median(coarse[1:]))
    confidence = float(b / median) if median > 0 else math.inf
    return OscillationReport(float(1.0 / f), float(amplitude), float(2 * math.pi * f), confidence)
