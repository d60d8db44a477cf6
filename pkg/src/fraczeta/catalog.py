"""Worked examples: tube functions with their ambient dimension and expected poles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LookupFailure
from .tubefn import PowerTerm, ScaleBandFamily, TubeFunction

#: Lebesgue volume of the unit gauge ball ``(x^2+y^2)^2 + t^2 <= 1`` in H^1, pi^2/2.
HEISENBERG_UNIT_BALL = math.pi**2 / 2

LAAKSO_SPACING = math.pi / math.log(2)


@dataclass(frozen=True)
class ExpectedPoles:
    """Expected complex dimensions: isolated real poles plus lattice families ``re + i*spacing*Z``."""

    isolated: tuple[Fraction, ...] = ()
    families: tuple[tuple[Fraction, float], ...] = ()

    def real_parts(self) -> set[Fraction]:
        return set(self.isolated) | {re for re, _ in self.families}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    tube: TubeFunction
    ambient_q: Fraction
    expected: ExpectedPoles
    notes: str

    @property
    def delta(self) -> Fraction:
        return self.tube.delta


F = Fraction
P = PowerTerm.rational


def _heisenberg_point() -> CatalogEntry:
    tube = TubeFunction(F(1, 4), (PowerTerm(HEISENBERG_UNIT_BALL, 4),))
    return CatalogEntry(
        "heisenberg-point", tube, F(4), ExpectedPoles((F(0),)),
        "Ball of radius t about a point: |A_t| = t^4 |B(p,1)|, with |B(p,1)| = pi^2/2 "
        "from quadrature of the gauge ball.",
    )


def _heisenberg_segment() -> CatalogEntry:
    tube = TubeFunction(F(1, 4), (PowerTerm(math.pi, 2), PowerTerm(HEISENBERG_UNIT_BALL, 4)))
    return CatalogEntry(
        "heisenberg-segment", tube, F(4), ExpectedPoles((F(0), F(2))),
        "Unit segment on the t-axis: cylinder pi t^2 plus two gauge half-balls t^4 |B(p,1)|.",
    )


def _laakso_point_families() -> tuple[ScaleBandFamily, ScaleBandFamily]:
    upper = ScaleBandFamily(4, F(1), F(1, 2), 1, (P(4, 1, F(1, 2)),))
    lower = ScaleBandFamily(4, F(1, 2), F(1, 4), 1, (P(6, 1, F(1, 2)), P(-1, 0, F(1, 8))))
    return upper, lower


def _laakso_point() -> CatalogEntry:
    return CatalogEntry(
        "laakso-point", TubeFunction(F(1, 4), (), _laakso_point_families()), F(3, 2),
        ExpectedPoles((), ((F(0), LAAKSO_SPACING),)),
        "Wormhole point (0,1/4), delta = 1/4. Band k: 2^(1-k)*2t on (2/4^(k+1), 4^-k] and "
        "2^-k (6t - 4^-k) on (4^-(k+1), 2/4^(k+1)]. Ambient Q = 3/2 (Cantor dimension 1/2 "
        "times an interval). The profile is continuous at every band boundary.",
    )


def _laakso_cantor_fiber() -> CatalogEntry:
    # band k: 2^(1-k) ((2^k - 1) R(t) + 2^k 4^-k) with R = 2t on the upper half band and
    # 6t - 4^-k on the lower one, minus the wormhole-point profile
    upper = ScaleBandFamily(4, F(1), F(1, 2), 1, (P(4, 1, 1), P(-8, 1, F(1, 2)), P(2, 0, F(1, 4))))
    lower = ScaleBandFamily(4, F(1, 2), F(1, 4), 1, (P(12, 1, 1), P(-18, 1, F(1, 2)), P(3, 0, F(1, 8))))
    return CatalogEntry(
        "laakso-cantor-fiber", TubeFunction(F(1, 4), (), (upper, lower)), F(3, 2),
        ExpectedPoles((), ((F(0), LAAKSO_SPACING), (F(1, 2), LAAKSO_SPACING))),
        "A = {0} x K, delta = 1/4, Q = 3/2. Band k counts 2^k full intervals of length 4^-k "
        "and 2^k - 1 wormhole-point replicas, then subtracts one wormhole-point profile: "
        "|A_t| = 2^(1-k) ((2^k - 1) R_k(t) + 2^k 4^-k) - P_k(t), R_k = 2t above 2/4^(k+1) and "
        "6t - 4^-k below. This profile jumps at 2/4^(k+1) and at 4^-k and is not monotone. "
        "Any continuous piecewise-linear profile on these bands cancels the even members "
        "n != 0 of the 1/2 family, so the jumps are kept. Families: 0 + i pi Z/log 2 and "
        "1/2 + i pi Z/log 2. Cantor dimension log 2/log 4 = 1/2.",
    )


def _patchwork_interval() -> CatalogEntry:
    tube = TubeFunction(F(1, 4), (P(F(1, 4), 0), P(F(1, 4), 1), P(2, 2)))
    return CatalogEntry(
        "patchwork-interval", tube, F(2), ExpectedPoles((F(0), F(1), F(2))),
        "A = [1/8, 1/2] in [0,1] with d^(1/2) on [0,1/4], delta = 1/4. The two local-dimension "
        "integrals t^(s-3)(t^2+1/4) and t^(s-2)(t+1/4) are merged over the common Q = 2 as "
        "|A_t| = 2t^2 + t/4 + 1/4.",
    )


def _patchwork_square_linf() -> CatalogEntry:
    tube = TubeFunction(F(1, 4), (P(F(1, 4), 0), P(1, 4), P(2, 5), P(-1, 6)))
    return CatalogEntry(
        "patchwork-square-linf", tube, F(6), ExpectedPoles((F(0), F(1), F(2), F(6))),
        "A = [0,1/2]^2, ell-infinity patches of local dimension 6, 4, 4, 2, delta = 1/4. "
        "Tube zeta (1/4)d^(s-6)/(s-6) + d^(s-2)/(s-2) + 2d^(s-1)/(s-1) - d^s/s over Q = 6, "
        "poles {0,1,2,6}.",
    )


def _patchwork_square_l1() -> CatalogEntry:
    tube = TubeFunction(F(1, 4), (P(F(1, 4), 0), P(1, 4), P(1, 5), P(-1, 6), P(3, 7), P(-1, 8)))
    return CatalogEntry(
        "patchwork-square-l1", tube, F(6), ExpectedPoles((F(-2), F(-1), F(0), F(1), F(2), F(6))),
        "ell-1 version of the patchwork square, delta = 1/4, Q = 6. The closed form carries "
        "the extra terms 3 d^(s+1)/(s+1) and -d^(s+2)/(s+2), poles {-2,-1,0,1,2,6}.",
    )


def _laakso_graph_geodesic() -> CatalogEntry:
    ladder = ScaleBandFamily(4, F(1), F(1, 4), 1, (P(F(1, 2), 1, 2), P(F(1, 4), 0, F(1, 2))))
    tube = TubeFunction(F(1, 4), (P(F(1, 16), 0), P(F(3, 2), 1)), (ladder,))
    return CatalogEntry(
        "laakso-graph-geodesic", tube, F(1), ExpectedPoles((F(0), F(1)), ((F(1, 2), LAAKSO_SPACING),)),
        "Upper geodesic from 1/4 to 1/2, delta = 1/4, bands (4^-(k+1), 4^-k], local "
        "dimension Q = 1. |A_t| = 1/16 + (3/2)t + 2^(k-1) t + 2^-(k+2): residues 3/2 at 0 "
        "and 1/16 at 1, the branching term 2^(k-1)t, and 2^-(k+2) for continuity at 4^-k.",
    )


_BUILDERS = {
    "heisenberg-point": _heisenberg_point,
    "heisenberg-segment": _heisenberg_segment,
    "laakso-point": _laakso_point,
    "laakso-cantor-fiber": _laakso_cantor_fiber,
    "patchwork-interval": _patchwork_interval,
    "patchwork-square-linf": _patchwork_square_linf,
    "patchwork-square-l1": _patchwork_square_l1,
    "laakso-graph-geodesic": _laakso_graph_geodesic,
}

NAMES = tuple(_BUILDERS)


def catalog(name: str) -> CatalogEntry:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise LookupFailure("example", name, NAMES) from None
    return builder()


def all_entries() -> list[CatalogEntry]:
    return [catalog(n) for n in NAMES]
