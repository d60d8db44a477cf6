"""Distance kernels: the compiled extension when available, numpy otherwise.

Set ``FRACZETA_PURE=1`` to force the numpy implementation.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("FRACZETA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "numpy"

cantor_distance = _impl.cantor_distance
segment2_distance = _impl.segment2_distance
heisenberg_axis_distance = _impl.heisenberg_axis_distance
laakso_distance = _impl.laakso_distance
laakso_pair_distance = _impl.laakso_pair_distance
laakso_fiber_distance = _impl.laakso_fiber_distance

__all__ = ["BACKEND", "compiled", "pure", "cantor_distance", "segment2_distance",
           "heisenberg_axis_distance", "laakso_distance", "laakso_pair_distance",
           "laakso_fiber_distance"]
