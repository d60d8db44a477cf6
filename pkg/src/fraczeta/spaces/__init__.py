"""Metric measure spaces, subsets with distance kernels, and the regularity audit."""
from .audit import AuditReport, regularity_audit
from .base import MMSpace, Region, SubsetOracle
from .euclid import Box, CantorQuarter, Euclidean, EuclideanPoint, Segment2
from .heisenberg import (Heisenberg, HeisenbergAxisSegment, HeisenbergPoint, HeisenbergPointSet,
                         heisenberg_ball_measure, heisenberg_distance)
from .laakso import (LaaksoCantorFiber, LaaksoPoint, LaaksoPointSet, LaaksoSpace, laakso_distance,
                     wormhole_height)
from .laakso_graph import GraphPoint, LaaksoGraphLevel, LaaksoGraphSpace, UpperGeodesic, graph_distance, laakso_graph
from .patchwork import (LowerLeftQuarter, PatchworkInterval, PatchworkIntervalSet, PatchworkSquare, Snowflake,
                        patchwork_distance, snowflake)
from .registry import set_from_spec, space_from_spec

__all__ = [name for name in dir() if not name.startswith("_")]
