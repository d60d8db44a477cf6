"""Numerical tube, distance and relative zeta functions."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from ..errors import DomainError, QuadratureError
from ..spaces.base import Region
from ..tubefn import TubeFunction, _raw_value, as_fraction
from .dimension import estimate_minkowski, usable
from .sampling import map_samples, sample_distances
from .tube import EmpiricalTubeData, ambient_q

SHELL_RATIO = 0.25
SHELL_MIN_HITS = 200
TREND_SIGMAS = 3.0


def _exprel(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, complex)
    small = np.abs(x) < 1e-5
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 + x / 2 + x * x / 6, np.expm1(safe) / safe)


def _power_integral(p: complex, t0: np.ndarray, t1: np.ndarray) -> np.ndarray:
    """``int_t0^t1 t^(p-1) dt``, stable as ``p -> 0``."""
    L = np.log(t1 / t0)
    return np.exp(p * np.log(t0)) * L * _exprel(p * L)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_bound: float
    truncation_bound: float
    quadrature_error: float
    t_min: float
    d: float

    def to_dict(self) -> dict:
        return {"value": {"re": self.value.real, "im": self.value.imag}, "errorBound": self.error_bound,
                "truncationBound": self.truncation_bound, "quadratureError": self.quadrature_error,
                "tMin": self.t_min, "d": self.d}


def _tail_bound_tube(tf: TubeFunction, q: float, s: complex, t_min: float) -> tuple[float, float]:
    """Termwise bound on ``int_0^t_min t^(Re s - Q - 1) |A_t| dt`` and the dimension it implies."""
    sig = s.real
    total, d = 0.0, -math.inf

    def add(c, alpha, H=1.0, beta=0.0, lo=0.0, hi=t_min):
        nonlocal total, d
        e = sig - q + alpha - beta
        d = max(d, q - alpha + beta)
        if hi <= lo:
            return
        if e <= 0 and lo == 0.0:
            total = math.inf
            return
        top = hi**e / e if e != 0 else math.log(hi)
        bot = (lo**e / e if e != 0 else math.log(lo)) if lo > 0 else 0.0
        total += abs(c) * H**beta * (top - bot)

    for term in tf.terminal:
        add(term.coeff, float(term.exponent))
    for fam in tf.ladders:
        b = float(fam.base)
        for term in fam.terms:
            g = float(term.growth)
            if g == 0:
                continue
            # on band k, g^k <= (hi/t)^beta when g >= 1 and g^k < (lo/t)^beta when g < 1
            beta = math.log(g) / math.log(b)
            add(term.coeff, float(term.exponent), float(fam.hi) if g >= 1 else float(fam.lo), beta)
    for piece in tf.pieces:
        lo, hi = float(piece.lo), min(float(piece.hi), t_min)
        for term in piece.terms:
            add(term.coeff, float(term.exponent), lo=lo, hi=hi)
    return total, d


def _quad_tube(tf: TubeFunction, q: float, s: complex, t_min: float) -> tuple[complex, float]:
    delta = float(tf.delta)
    cuts = [t_min] + [x for x in tf.boundaries(t_min) if t_min < x < delta] + [delta]
    total, err = 0.0 + 0.0j, 0.0
    w = s - q
    for a, b in zip(cuts[:-1], cuts[1:]):
        ua, ub = math.log(a), math.log(b)
        mid = math.exp(0.5 * (ua + ub))
        side = "left"

        def f(u, part):
            t = math.exp(u)
            # evaluate the band containing the piece's interior, never a neighbor's edge
            t = min(max(t, a * (1 + 1e-15)), b)
            val = _raw_value(tf, t, side) * complex(math.cos(w.imag * u), math.sin(w.imag * u)) * math.exp(w.real * u)
            return val.real if part == 0 else val.imag

        for part in (0, 1):
            v, e = quad(f, ua, ub, args=(part,), epsabs=1e-14, epsrel=1e-12, limit=200, full_output=1)[:2]
            if not math.isfinite(v):
                raise QuadratureError(f"quadrature failed on [{a:g}, {b:g}] near t={mid:g}")
            total += v if part == 0 else 1j * v
            err += e
    return total, err


def _quad_data(data: EmpiricalTubeData, s: complex, volume: np.ndarray) -> complex:
    t, v = data.t, volume
    w = s - float(data.q)
    t0, t1, v0, v1 = t[:-1], t[1:], v[:-1], v[1:]
    pos = (v0 > 0) & (v1 > 0)
    out = np.zeros(t0.size, complex)
    L = np.log(t1 / t0)
    a = np.where(pos, np.log(np.where(pos, v1 / np.where(pos, v0, 1), 1)) / L, 0.0)
    # v(t) = v0 (t/t0)^a on the segment, so the integral is v0 t0^w L exprel((w + a) L)
    seg = v0 * np.exp(w * np.log(t0)) * L * _exprel((w + a) * L)
    out[pos] = seg[pos]
    lin = ~pos & (v1 > 0)
    if lin.any():
        slope = (v1 - v0) / (t1 - t0)
        lin_val = (v0 - slope * t0) * _power_integral(w, t0, t1) + slope * _power_integral(w + 1, t0, t1)
        out[lin] = lin_val[lin]
    return complex(math.fsum(out.real), math.fsum(out.imag)) if out.size else 0j


def tube_zeta_quadrature(source, s: complex, t_min: float | None = None, q=None, d: float | None = None) -> QuadratureResult:
    """``int_{t_min}^{delta} t^(s-Q-1) |A_t| dt`` with a bound on the omitted ``(0, t_min)`` part.

    ``source`` is a :class:`TubeFunction` (``q`` required) or :class:`EmpiricalTubeData`.
    For data, ``t_min`` is the first grid point and the tail bound uses
    ``|A_t| <= C t^(Q-d)`` fitted on the lowest decade of usable points.
    """
    s = complex(s)
    if isinstance(source, TubeFunction):
        if q is None:
            raise DomainError("q is required with a tube function")
        qf = float(as_fraction(q))
        delta = float(source.delta)
        t_min = 1e-4 * delta if t_min is None else float(t_min)
        if not 0 < t_min < delta:
            raise DomainError("need 0 < t_min < delta")
        tail, d_tube = _tail_bound_tube(source, qf, s, t_min)
        value, qerr = _quad_tube(source, qf, s, t_min)
        d = d_tube if d is None else d
        stat = 0.0
    elif isinstance(source, EmpiricalTubeData):
        data = source
        if t_min is not None and t_min > data.t[0]:
            keep = data.t >= t_min
            data = EmpiricalTubeData(data.t[keep], data.volume[keep], data.stderr[keep], data.q, data.delta,
                                     data.sample_count, data.seed)
        qf = float(data.q)
        t_min = float(data.t[0])
        if d is None:
            d = estimate_minkowski(data).dim_upper
        value = _quad_data(data, s, data.volume)
        hi = _quad_data(data, s, data.volume + data.stderr)
        lo = _quad_data(data, s, np.maximum(data.volume - data.stderr, 0.0))
        stat = 0.5 * abs(hi - lo)
        ok = usable(data)
        first = ok & (data.t <= 10 * data.t[ok][0]) if ok.any() else ok
        if first.any():
            ratio = (data.volume[first] + 3 * data.stderr[first]) / data.t[first] ** (qf - d)
            C = float(ratio.max())
        else:
            C = math.inf
        e = s.real - d
        tail = C * t_min**e / e if e > 0 else math.inf
        qerr = 0.0
    else:
        raise TypeError("source must be a TubeFunction or EmpiricalTubeData")
    if s.real <= d:
        warnings.warn(f"Re s = {s.real:g} is not above the dimension {d:g}; the integral diverges as t_min -> 0",
                      stacklevel=2)
        tail = math.inf
    return QuadratureResult(value, float(tail + qerr + 3 * stat), float(tail), float(qerr + 3 * stat), t_min, float(d))


@dataclass(frozen=True)
class TrendResult:
    """Growth of shell contributions ``int_{eps_{j+1} < d <= eps_j} d^-gamma`` as ``eps_j -> 0``."""

    status: str
    slope: float
    slope_stderr: float
    shells: int
    prefix_estimates: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict:
        return asdict(self)


def shell_trend(d: np.ndarray, weight: float, gamma: float, delta: float, ratio: float = SHELL_RATIO,
                min_hits: int = SHELL_MIN_HITS) -> TrendResult:
    """Classify ``int_{A_delta} d(x, A)^-gamma`` as finite, divergent or inconclusive.

    Shell contributions scale like ``eps^(Q - D - gamma)``; a fitted slope of the log
    contribution against ``log(1/eps)`` above ``TREND_SIGMAS`` standard errors means
    divergence, below minus that means convergence.
    """
    d = np.asarray(d, float)
    n = d.size
    inside = d[(d <= delta) & (d > 0)]
    prefixes = []
    for m in (n // 16, n // 4, n):
        dd = d[:m]
        dd = dd[(dd <= delta) & (dd > 0)]
        prefixes.append(float(weight * n / max(m, 1) * np.sum(dd ** (-gamma))))
    xs, ys, ws = [], [], []
    hi, j = delta, 0
    step = math.log(1 / ratio)
    while True:
        lo = hi * ratio
        shell = inside[(inside > lo) & (inside <= hi)]
        if shell.size < min_hits:
            break
        vals = shell ** (-gamma)
        total = vals.sum()
        # relative variance of the shell sum: a Poisson count times the spread of the values
        rel_var = float((vals**2).sum()) / total**2
        xs.append(j * step)
        ys.append(math.log(weight * total))
        ws.append(1.0 / rel_var)
        hi, j = lo, j + 1
    if len(xs) < 3:
        return TrendResult("inconclusive", math.nan, math.nan, len(xs), tuple(prefixes))
    x, y, w = np.array(xs), np.array(ys), np.array(ws)
    W = w.sum()
    xm = (w * x).sum() / W
    sxx = (w * (x - xm) ** 2).sum()
    b = (w * (x - xm) * (y - (w * y).sum() / W)).sum() / sxx
    resid = y - ((w * y).sum() / W + b * (x - xm))
    chi2 = float((w * resid**2).sum()) / max(len(xs) - 2, 1)
    se = math.sqrt(max(chi2, 1.0) / sxx)
    if b > TREND_SIGMAS * se:
        status = "divergent"
    elif b < -TREND_SIGMAS * se:
        status = "finite"
    else:
        status = "inconclusive"
    return TrendResult(status, float(b), float(se), len(xs), tuple(prefixes))


@dataclass(frozen=True)
class ZetaEstimate:
    value: complex
    stderr: float
    n_samples: int
    divergent: bool | None = None
    trend: TrendResult | None = None

    def to_dict(self) -> dict:
        return {"value": {"re": self.value.real, "im": self.value.imag}, "stderr": self.stderr,
                "nSamples": self.n_samples, "divergent": self.divergent,
                "trend": None if self.trend is None else self.trend.to_dict()}


def _power(d: np.ndarray, e: complex) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(e * np.log(d))


def _mean_and_err(vals: np.ndarray) -> tuple[complex, float]:
    n = vals.size
    mean = complex(math.fsum(vals.real) / n, math.fsum(vals.imag) / n)
    var = (math.fsum(np.abs(vals - mean) ** 2)) / max(n - 1, 1)
    return mean, math.sqrt(var / n)


def mc_distance_zeta(set_a, delta: float, s: complex, n_samples: int, seed: int = 0, threads: int = 1,
                     q=None) -> ZetaEstimate:
    """Monte Carlo ``int_{A_delta} d(x, A)^(s-Q) dx`` with a divergence trend flag."""
    s = complex(s)
    q = float(ambient_q(set_a) if q is None else as_fraction(q))
    region = set_a.region(delta)
    d = sample_distances(set_a, region, n_samples, seed, threads)
    inside = (d <= delta) & (d > 0)
    vals = np.zeros(d.size, complex)
    vals[inside] = region.measure * _power(d[inside], s - q)
    mean, err = _mean_and_err(vals)
    trend = shell_trend(d, region.measure / d.size, q - s.real, delta)
    return ZetaEstimate(mean, err, n_samples, trend.status == "divergent", trend)


@dataclass(frozen=True)
class Omega:
    """A finite-measure region ``Omega`` given by a sampling region and a membership test.

    ``member(batch, d)`` receives the batch and its distances to ``A``.
    """

    region: Region
    member: Callable[[object, np.ndarray], np.ndarray]

    @classmethod
    def neighborhood(cls, set_a, delta: float) -> "Omega":
        return cls(set_a.region(delta), lambda batch, d: d <= delta)

    @classmethod
    def shell(cls, set_a, r0: float, r1: float) -> "Omega":
        if not 0 <= r0 <= r1:
            raise DomainError("need 0 <= r0 <= r1")
        return cls(set_a.region(r1), lambda batch, d: (d >= r0) & (d <= r1))

    @classmethod
    def empty(cls) -> "Omega":
        return cls(Region(0.0, lambda rng, n: None), lambda batch, d: np.zeros(0, bool))


def relative_zeta(set_a, omega: Omega, s: complex, n_samples: int, seed: int = 0, threads: int = 1,
                  q=None) -> ZetaEstimate:
    """Monte Carlo ``int_Omega d(x, A)^(s-Q) dx``."""
    s = complex(s)
    if omega.region.measure == 0:
        warnings.warn("Omega has zero measure; the relative zeta function is 0", stacklevel=2)
        return ZetaEstimate(0j, 0.0, 0)
    q = float(ambient_q(set_a) if q is None else as_fraction(q))

    def shard(batch):
        d = np.asarray(set_a.distance(batch), float)
        m = np.asarray(omega.member(batch, d), bool) & (d > 0)
        v = np.zeros(d.size, complex)
        v[m] = omega.region.measure * _power(d[m], s - q)
        return v

    vals = np.concatenate(map_samples(omega.region, n_samples, seed, shard, threads))
    mean, err = _mean_and_err(vals)
    return ZetaEstimate(mean, err, n_samples)
