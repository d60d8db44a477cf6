"""Finite-level Laakso graphs built by repeated substitution of the gadget Gamma.

Gamma replaces an edge of length ``L`` and density ``rho`` by a serial edge of length
``L/4``, two parallel edges of length ``L/2`` carrying density ``rho/2`` each, and a
second serial edge of length ``L/4``.  Total length from end to end and total mass are
preserved.  Every edge runs monotonically in height, so a point on an edge has a height
equal to the height of its lower vertex plus its offset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from ..errors import DomainError
from .base import MMSpace, Region, SubsetOracle


@dataclass(frozen=True)
class GraphPoint:
    edge: int
    offset: float


@dataclass(frozen=True)
class GraphBatch:
    edges: np.ndarray
    offsets: np.ndarray

    def __len__(self):
        return self.edges.shape[0]


@dataclass
class LaaksoGraphLevel:
    """Multigraph of level ``level``. ``upper`` marks edges on the always-upper branch path."""

    level: int
    heights: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    lengths: np.ndarray
    densities: np.ndarray
    upper: np.ndarray
    branch_weights: np.ndarray = field(default=None)

    @property
    def n_vertices(self) -> int:
        return self.heights.size

    @property
    def n_edges(self) -> int:
        return self.tails.size

    @property
    def masses(self) -> np.ndarray:
        return self.lengths * self.densities

    @cached_property
    def adjacency(self):
        # parallel edges share endpoints and length, so the simple graph keeps one of each pair
        pairs = {}
        for u, v, L in zip(self.tails, self.heads, self.lengths):
            pairs[(int(u), int(v))] = float(L)
        rows, cols = zip(*pairs)
        n = self.n_vertices
        return coo_matrix((list(pairs.values()), (rows, cols)), shape=(n, n)).tocsr()

    def vertex_distances(self, sources, min_only: bool = False) -> np.ndarray:
        return dijkstra(self.adjacency, directed=False, indices=sources, min_only=min_only)

    @cached_property
    def bottom(self) -> int:
        return int(np.argmin(self.heights))

    @cached_property
    def top(self) -> int:
        return int(np.argmax(self.heights))


def laakso_graph(level: int) -> LaaksoGraphLevel:
    if level < 0:
        raise DomainError("level must be nonnegative")
    heights = [0.0, 1.0]
    edges = [(0, 1, 1.0, 1.0, True)]
    for _ in range(level):
        new = []
        for u, v, L, rho, up in edges:
            a = len(heights)
            heights.append(heights[u] + L / 4)
            b = len(heights)
            heights.append(heights[u] + 3 * L / 4)
            new.append((u, a, L / 4, rho, up))
            new.append((a, b, L / 2, rho / 2, up))  # upper copy
            new.append((a, b, L / 2, rho / 2, False))
            new.append((b, v, L / 4, rho, up))
        edges = new
    t, h, L, rho, up = (np.array(c) for c in zip(*edges))
    g = LaaksoGraphLevel(level, np.array(heights), t.astype(np.int64), h.astype(np.int64),
                         L.astype(float), rho.astype(float), up.astype(bool))
    g.branch_weights = g.densities.copy()
    return g


def graph_distance(g: LaaksoGraphLevel, p: GraphPoint, q: GraphPoint) -> float:
    """Shortest-path distance between two points on edges of ``g``."""
    du = g.vertex_distances([g.tails[p.edge], g.heads[p.edge]])
    a = p.offset
    b = g.lengths[p.edge] - p.offset
    dq_u, dq_v = g.tails[q.edge], g.heads[q.edge]
    c = q.offset
    e = g.lengths[q.edge] - q.offset
    best = min(a + du[0, dq_u] + c, a + du[0, dq_v] + e, b + du[1, dq_u] + c, b + du[1, dq_v] + e)
    if p.edge == q.edge:
        best = min(best, abs(p.offset - q.offset))
    return float(best)


def _point_to_vertices(g: LaaksoGraphLevel, p: GraphPoint) -> np.ndarray:
    d = g.vertex_distances([g.tails[p.edge], g.heads[p.edge]])
    return np.minimum(d[0] + p.offset, d[1] + g.lengths[p.edge] - p.offset)


def ball_measure_graph(g: LaaksoGraphLevel, p: GraphPoint, r: float | np.ndarray) -> np.ndarray:
    """Exact ``mu(B(p, r))``: on each edge the ball is an arc from each end, plus the own-edge interval."""
    dv = _point_to_vertices(g, p)
    r = np.atleast_1d(np.asarray(r, float))
    du = dv[g.tails][None, :]
    dw = dv[g.heads][None, :]
    L = g.lengths[None, :]
    rr = r[:, None]
    covered = np.minimum(L, np.maximum(0.0, rr - du) + np.maximum(0.0, rr - dw))
    # own edge: union of the two end arcs with [s0 - r, s0 + r]
    e, s0, Le = p.edge, p.offset, g.lengths[p.edge]
    for i, ri in enumerate(r):
        pieces = [(0.0, min(Le, max(0.0, ri - dv[g.tails[e]]))),
                  (max(0.0, s0 - ri), min(Le, s0 + ri)),
                  (max(0.0, Le - max(0.0, ri - dv[g.heads[e]])), Le)]
        covered[i, e] = _union_length(pieces)
    return covered @ g.densities


def _union_length(pieces) -> float:
    total, reach = 0.0, -math.inf
    for lo, hi in sorted(p for p in pieces if p[1] > p[0]):
        if hi <= reach:
            continue
        total += hi - max(lo, reach)
        reach = hi
    return total


class LaaksoGraphSpace(MMSpace):
    """The level-``i`` Laakso graph with Bernoulli branch weights times length."""

    name = "laakso-graph"
    dimension_bounds = (2.0, 2.0)
    reference_measure = 1.0
    diameter = 1.0
    # above the longest edge (2^-level) balls see the branching; see regularity_audit
    audit_radii = (1 / 32, 1 / 4)

    def __init__(self, level: int = 6):
        self.level = level
        self.graph = laakso_graph(level)
        self._cdf = np.cumsum(self.graph.masses)
        self._cdf /= self._cdf[-1]

    def distance(self, p, q):
        return graph_distance(self.graph, p, q)

    def sample(self, rng, n):
        e = np.searchsorted(self._cdf, rng.random(n), side="right")
        e = np.minimum(e, self.graph.n_edges - 1)
        return GraphBatch(e, rng.random(n) * self.graph.lengths[e])

    def batch_distance(self, p, batch):
        dv = _point_to_vertices(self.graph, p)
        g = self.graph
        d = np.minimum(dv[g.tails[batch.edges]] + batch.offsets,
                       dv[g.heads[batch.edges]] + g.lengths[batch.edges] - batch.offsets)
        same = batch.edges == p.edge
        d[same] = np.minimum(d[same], np.abs(batch.offsets[same] - p.offset))
        return d

    def unbatch(self, batch):
        return [GraphPoint(int(e), float(s)) for e, s in zip(batch.edges, batch.offsets)]

    def ball_measure(self, p, r):
        return float(ball_measure_graph(self.graph, p, r)[0])

    def ball_measures(self, p, radii):
        return ball_measure_graph(self.graph, p, radii)

    def height(self, p: GraphPoint) -> float:
        return float(self.graph.heights[self.graph.tails[p.edge]] + p.offset)

    def spec(self):
        return {"space": "laakso-graph", "level": self.level}


class UpperGeodesic(SubsetOracle):
    """Points of the always-upper branch path with heights in ``[h0, h1]`` (default 1/4 to 1/2)."""

    name = "upper-geodesic"

    def __init__(self, space: LaaksoGraphSpace, h0: float = 0.25, h1: float = 0.5):
        if space.level < 1:
            raise DomainError("the upper geodesic needs level >= 1")
        self.space = space
        self.h0, self.h1 = float(h0), float(h1)
        g = space.graph
        lo_h = g.heights[g.tails]
        hi_h = lo_h + g.lengths
        # portion [s_lo, s_hi] of each upper edge lying in the height window
        self._s_lo = np.where(g.upper, np.clip(self.h0 - lo_h, 0.0, g.lengths), 0.0)
        self._s_hi = np.where(g.upper, np.clip(self.h1 - lo_h, 0.0, g.lengths), -1.0)
        self._on = g.upper & (hi_h >= self.h0) & (lo_h <= self.h1)
        # multi-source distances to vertices from the endpoints of the covered pieces
        sources = []
        for e in np.flatnonzero(self._on):
            sources.append((int(g.tails[e]), self._s_lo[e]))
            sources.append((int(g.heads[e]), g.lengths[e] - self._s_hi[e]))
        d = g.vertex_distances(sorted({s for s, _ in sources}))
        idx = {v: i for i, v in enumerate(sorted({s for s, _ in sources}))}
        self._dv = np.min(np.stack([d[idx[v]] + off for v, off in sources]), axis=0)

    def distance(self, batch):
        g = self.space.graph
        e, s = batch.edges, batch.offsets
        d = np.minimum(self._dv[g.tails[e]] + s, self._dv[g.heads[e]] + g.lengths[e] - s)
        on = self._on[e]
        inside = on & (s >= self._s_lo[e]) & (s <= self._s_hi[e])
        gap = np.where(s < self._s_lo[e], self._s_lo[e] - s, s - self._s_hi[e])
        d = np.where(on, np.minimum(d, gap), d)
        return np.where(inside, 0.0, d)

    def region(self, delta):
        return Region(1.0, self.space.sample)

    def spec(self):
        return {"set": self.name, "h0": self.h0, "h1": self.h1}
