"""Build spaces and subsets from JSON-style specs such as ``{"space": "laakso-f", "depth": 8}``."""
from __future__ import annotations

import json

from ..errors import DomainError, LookupFailure
from .base import MMSpace, SubsetOracle
from .euclid import Box, CantorQuarter, Euclidean, EuclideanPoint, Segment2
from .heisenberg import Heisenberg, HeisenbergAxisSegment, HeisenbergPointSet
from .laakso import LaaksoCantorFiber, LaaksoPoint, LaaksoPointSet, LaaksoSpace
from .laakso_graph import LaaksoGraphSpace, UpperGeodesic
from .patchwork import LowerLeftQuarter, PatchworkInterval, PatchworkIntervalSet, PatchworkSquare, snowflake

SPACE_NAMES = ("euclidean", "heisenberg", "laakso-f", "laakso-graph", "patchwork-interval",
               "patchwork-square", "snowflake")


def _load(spec) -> dict:
    if isinstance(spec, str):
        spec = spec.strip()
        spec = json.loads(spec) if spec.startswith("{") else {"space": spec}
    if not isinstance(spec, dict):
        raise DomainError("spec must be a JSON object or a name")
    return dict(spec)


def space_from_spec(spec) -> MMSpace:
    d = _load(spec)
    name = d.get("space")
    if name == "euclidean":
        return Euclidean(int(d.get("dim", 1)))
    if name == "heisenberg":
        return Heisenberg()
    if name == "laakso-f":
        return LaaksoSpace(int(d.get("depth", 16)))
    if name == "laakso-graph":
        return LaaksoGraphSpace(int(d.get("level", 6)))
    if name == "patchwork-interval":
        return PatchworkInterval()
    if name == "patchwork-square":
        return PatchworkSquare(d.get("metric", "linf"))
    if name == "snowflake":
        return snowflake(space_from_spec(d["base"]), float(d["p"]))
    raise LookupFailure("space", name, SPACE_NAMES)


SET_NAMES = {
    "euclidean": ("segment", "box", "point", "cantor"),
    "heisenberg": ("t-axis-segment", "point"),
    "laakso-f": ("wormhole-point", "cantor-fiber", "point"),
    "laakso-graph": ("upper-geodesic",),
    "patchwork-interval": ("interval",),
    "patchwork-square": ("lower-left-quarter",),
}


def set_from_spec(space: MMSpace, spec) -> SubsetOracle:
    d = _load(spec) if not isinstance(spec, str) or spec.strip().startswith("{") else {"set": spec}
    name = d.get("set")
    if isinstance(space, Euclidean):
        if name == "segment":
            return Segment2(d.get("p0", (0.0, 0.0)), d.get("p1", (1.0, 0.0)))
        if name == "box":
            return Box(d["lo"], d["hi"])
        if name == "point":
            return EuclideanPoint(d.get("at", [0.0] * space.dim))
        if name == "cantor":
            return CantorQuarter(int(d.get("depth", 26)))
        family = "euclidean"
    elif isinstance(space, Heisenberg):
        if name == "t-axis-segment":
            return HeisenbergAxisSegment(float(d.get("t0", 0.0)), float(d.get("t1", 1.0)))
        if name == "point":
            return HeisenbergPointSet(d.get("at", (0.0, 0.0, 0.0)))
        family = "heisenberg"
    elif isinstance(space, LaaksoSpace):
        if name == "wormhole-point":
            return LaaksoPointSet(space)
        if name == "cantor-fiber":
            return LaaksoCantorFiber(space, int(d.get("cantor_depth", 24)))
        if name == "point":
            return LaaksoPointSet(space, LaaksoPoint(d.get("address", ""), float(d.get("height", 0.25))), "point")
        family = "laakso-f"
    elif isinstance(space, LaaksoGraphSpace):
        if name == "upper-geodesic":
            return UpperGeodesic(space, float(d.get("h0", 0.25)), float(d.get("h1", 0.5)))
        family = "laakso-graph"
    elif isinstance(space, PatchworkInterval):
        if name == "interval":
            return PatchworkIntervalSet(float(d.get("a", 0.125)), float(d.get("b", 0.5)))
        family = "patchwork-interval"
    elif isinstance(space, PatchworkSquare):
        if name == "lower-left-quarter":
            return LowerLeftQuarter(space.metric)
        family = "patchwork-square"
    else:
        raise LookupFailure("set", name, ())
    raise LookupFailure("set", name, SET_NAMES[family])
