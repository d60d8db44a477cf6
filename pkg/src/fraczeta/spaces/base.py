"""Interfaces shared by the metric measure space implementations."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np


class MMSpace(ABC):
    """A metric measure space with a distance oracle and a measure sampler.

    ``sample(rng, n)`` returns a batch of ``n`` points drawn from the normalized
    reference measure on ``reference_region``; each point carries weight
    ``reference_measure / n``.
    """

    name: str = "space"
    dimension_bounds: tuple[float, float] = (1.0, 1.0)
    diameter: float = 1.0
    reference_measure: float = 1.0

    @abstractmethod
    def distance(self, p, q) -> float:
        """Distance between two single points."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int):
        """Batch of ``n`` reference-measure samples."""

    def ball_measure(self, p, r: float) -> float | None:
        """Exact ``mu(B(p, r))`` when known, else ``None``."""
        return None

    def batch_distance(self, p, batch) -> np.ndarray:
        """Distances from one point to every point of a batch (slow generic path)."""
        return np.array([self.distance(p, q) for q in self.unbatch(batch)])

    def unbatch(self, batch) -> list:
        return list(batch)

    def spec(self) -> dict:
        return {"space": self.name}


@dataclass(frozen=True)
class Region:
    """A sampling region of known measure: ``sample(rng, n)`` draws uniformly from it."""

    measure: float
    sampler: Callable[[np.random.Generator, int], Any] = field(repr=False)

    def sample(self, rng: np.random.Generator, n: int):
        return self.sampler(rng, n)


class SubsetOracle(ABC):
    """A set ``A`` inside a space: distance-to-set kernel plus a region enclosing ``A_delta``."""

    name: str = "set"
    space: MMSpace

    @abstractmethod
    def distance(self, batch) -> np.ndarray:
        """``d(x, A)`` for every point of a batch."""

    @abstractmethod
    def region(self, delta: float) -> Region:
        """A region containing the closed ``delta``-neighborhood of ``A``."""

    def spec(self) -> dict:
        return {"set": self.name}
