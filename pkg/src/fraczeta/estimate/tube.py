"""Monte Carlo tube volumes ``|A_t|`` on a grid of radii."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError
from ..tubefn import TubeFunction, as_fraction, evaluate_many
from .sampling import sample_distances

POINTS_PER_DECADE = 64


def log_grid(t_min: float, t_max: float, per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    if not 0 < t_min < t_max:
        raise DomainError("need 0 < t_min < t_max")
    n = max(2, int(round(per_decade * math.log10(t_max / t_min))) + 1)
    return np.geomspace(t_min, t_max, n)


def default_grid(delta: float) -> np.ndarray:
    return log_grid(1e-4 * delta, delta)


@dataclass
class EmpiricalTubeData:
    t: np.ndarray
    volume: np.ndarray
    stderr: np.ndarray
    q: Fraction
    delta: float
    sample_count: int = 0
    seed: int | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, float)
        self.volume = np.asarray(self.volume, float)
        self.stderr = np.asarray(self.stderr, float)
        self.q = as_fraction(self.q)
        if not (self.t.shape == self.volume.shape == self.stderr.shape) or self.t.ndim != 1:
            raise DomainError("t, volume and stderr must be 1-D arrays of one length")
        if self.t.size == 0:
            raise DomainError("empty t grid")
        if np.any(np.diff(self.t) <= 0):
            raise DomainError("t must be strictly increasing")

    def __len__(self):
        return self.t.size

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "volume", "stderr"])
        for row in zip(self.t, self.volume, self.stderr):
            w.writerow([repr(float(v)) for v in row])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str, q, delta: float | None = None, **kw) -> "EmpiricalTubeData":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "volume", "stderr"]:
            raise DomainError("tube CSV must start with the header t,volume,stderr")
        vals = np.array([[float(c) for c in r] for r in rows[1:] if r], float).reshape(-1, 3)
        delta = float(vals[-1, 0]) if delta is None and len(vals) else delta
        return cls(vals[:, 0], vals[:, 1], vals[:, 2], q, delta, **kw)


def mc_tube_volume(set_a, t_grid, n_samples: int, seed: int = 0, threads: int = 1,
                   delta: float | None = None, q=None) -> EmpiricalTubeData:
    """One sampling pass over a region holding ``A_delta``; every ``t`` reuses the sorted distances.

    ``q`` defaults to the upper dimension bound of the ambient space.
    """
    t = np.asarray(t_grid, float)
    if t.size == 0:
        raise DomainError("empty t grid")
    delta = float(t[-1]) if delta is None else float(delta)
    if t[0] <= 0 or t[-1] > delta * (1 + 1e-12):
        raise DomainError("t grid must lie in (0, delta]")
    region = set_a.region(delta)
    d = np.sort(sample_distances(set_a, region, n_samples, seed, threads))
    p = np.searchsorted(d, t, side="right") / n_samples
    vol = region.measure * p
    err = region.measure * np.sqrt(p * (1 - p) / n_samples)
    return EmpiricalTubeData(t, vol, err, ambient_q(set_a) if q is None else q, delta, n_samples, seed)


def ambient_q(set_a) -> Fraction:
    return as_fraction(set_a.space.dimension_bounds[1])


def tube_data_from_function(tf: TubeFunction, q, t_grid) -> EmpiricalTubeData:
    """Noise-free data sampled from an exact tube function."""
    t = np.asarray(t_grid, float)
    v = evaluate_many(tf, t)
    return EmpiricalTubeData(t, v, np.zeros_like(v), q, float(tf.delta))
