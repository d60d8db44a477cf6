import math
from fractions import Fraction

import numpy as np
import pytest

from fraczeta import catalog as cat
from fraczeta.errors import DomainError
from fraczeta.tubefn import (BandPiece, PowerTerm, ScaleBandFamily, TubeFunction, as_fraction, evaluate_many,
                             evaluate_tube, fraction_str, validate_tube)

P = PowerTerm.rational


def test_fraction_helpers():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(0.25) == Fraction(1, 4)
    assert fraction_str(Fraction(-2, 3)) == "-2/3"
    assert fraction_str(Fraction(5)) == "5"


def test_power_term_validation():
    with pytest.raises(DomainError):
        PowerTerm(math.inf, 1)
    with pytest.raises(DomainError):
        PowerTerm(1.0, 1, growth=-1)
    t = P(3, 2, Fraction(1, 2))
    assert t.exact == 3
    assert t.value(0.5, k=2) == 3 * 0.25 * 0.25


def test_band_family_geometry():
    fam = ScaleBandFamily(4, 1, Fraction(1, 4), 1, (P(1, 1),))
    assert fam.top == 0.25
    assert fam.band_bounds(2) == (1 / 64, 1 / 16)
    # bands are half-open (lo, hi]
    assert fam.band_index(1 / 16) == 2
    assert fam.band_index(1 / 16, side="right") == 1
    assert fam.band_index(0.3) is None
    for bad in [(1, 1, 0.5, 0), (4, 0.5, 1, 0), (4, 1, 0.1, 0), (4, 1, 0.5, -1)]:
        with pytest.raises(DomainError):
            ScaleBandFamily(*bad, (P(1, 1),))


def test_evaluation_domain():
    tf = cat.catalog("heisenberg-segment").tube
    assert evaluate_tube(tf, 0.1) == pytest.approx(math.pi * 0.01 + math.pi**2 / 2 * 1e-4)
    for bad in (0.0, -1.0, 0.3):
        with pytest.raises(DomainError):
            tf(bad)
    np.testing.assert_allclose(evaluate_many(tf, [0.1, 0.2]), [tf(0.1), tf(0.2)])


@pytest.mark.parametrize("name", cat.NAMES)
def test_catalog_tubes_validate(name):
    rep = validate_tube(cat.catalog(name).tube)
    assert rep.passed, rep.failures


def test_validation_catches_defects():
    jump = TubeFunction(Fraction(1, 4), (), (ScaleBandFamily(4, 1, Fraction(1, 2), 1, (P(4, 1),)),))
    rep = validate_tube(jump)
    assert not rep.passed
    decreasing = TubeFunction(1, (P(1, 0), P(-1, 1)))
    assert not validate_tube(decreasing).monotone
    outside = TubeFunction(Fraction(1, 8), (), (ScaleBandFamily(4, 1, Fraction(1, 4), 0, (P(1, 1),)),))
    assert not validate_tube(outside).bands_inside


@pytest.mark.parametrize("name", cat.NAMES)
def test_truncate_preserves_values(name):
    tf = cat.catalog(name).tube
    for d2 in (tf.delta / 2, tf.delta / 3, Fraction(1, 10)):
        if d2 > tf.delta:
            continue
        half = tf.truncate(d2)
        assert half.delta == d2
        for t in np.geomspace(1e-5 * float(d2), float(d2), 400):
            assert half(t) == pytest.approx(tf(t), rel=1e-13, abs=1e-15)
        before, after = validate_tube(tf), validate_tube(half)
        for flag in ("nonnegative", "monotone", "continuous", "covered", "bands_inside"):
            assert getattr(after, flag) or not getattr(before, flag), (flag, after.failures)


def test_truncate_rejects_larger_delta():
    tf = cat.catalog("laakso-point").tube
    with pytest.raises(DomainError):
        tf.truncate(1)


@pytest.mark.parametrize("name", cat.NAMES)
def test_json_round_trip(name):
    tf = cat.catalog(name).tube
    back = TubeFunction.from_json(tf.to_json())
    assert back == tf
    cut = tf.truncate(Fraction(1, 10))
    assert TubeFunction.from_json(cut.to_json()) == cut


def test_piece_band():
    p = BandPiece(Fraction(1, 8), Fraction(1, 4), (P(2, 1),))
    assert p.value(0.25) == 0.5
    assert p.value(0.125) == 0.0
    with pytest.raises(DomainError):
        BandPiece(1, 1, ())


def test_boundaries_listed():
    tf = cat.catalog("laakso-point").tube
    b = tf.boundaries(1e-3)
    assert b == sorted(b)
    assert 1 / 64 in b and 2 / 64 in b and 0.25 in b


def _band(t):
    # k with 4^-(k+1) < t <= 4^-k
    k = 0
    while t <= 4.0 ** -(k + 1):
        k += 1
    return k


def _wormhole_point_profile(t):
    k = _band(t)
    if t > 2 * 4.0 ** -(k + 1):
        return 2.0 ** (1 - k) * 2 * t
    return 2.0**-k * (6 * t - 4.0**-k)


def _cantor_fiber_profile(t):
    k = _band(t)
    replica = 2 * t if t > 2 * 4.0 ** -(k + 1) else 6 * t - 4.0**-k
    return 2.0 ** (1 - k) * ((2**k - 1) * replica + 2**k * 4.0**-k) - _wormhole_point_profile(t)


def _geodesic_profile(t):
    k = _band(t)
    return 1 / 16 + 1.5 * t + 2.0 ** (k - 1) * t + 2.0 ** -(k + 2)


REFERENCE_PROFILES = {
    "heisenberg-point": lambda t: math.pi**2 / 2 * t**4,
    "heisenberg-segment": lambda t: math.pi * t**2 + math.pi**2 / 2 * t**4,
    "laakso-point": _wormhole_point_profile,
    "laakso-cantor-fiber": _cantor_fiber_profile,
    "patchwork-interval": lambda t: 2 * t * t + t / 4 + 1 / 4,
    "patchwork-square-linf": lambda t: 1 / 4 + t**4 + 2 * t**5 - t**6,
    "patchwork-square-l1": lambda t: 1 / 4 + t**4 + t**5 - t**6 + 3 * t**7 - t**8,
    "laakso-graph-geodesic": _geodesic_profile,
}


@pytest.mark.parametrize("name", cat.NAMES)
def test_catalog_matches_reference_piecewise_formula(name):
    entry = cat.catalog(name)
    rng = np.random.default_rng(5)
    ts = np.concatenate([0.25 * 10.0 ** rng.uniform(-7, 0, 400), 0.25 * 4.0 ** -np.arange(8)])
    ref = REFERENCE_PROFILES[name]
    for t in ts:
        want = ref(float(t))
        assert evaluate_tube(entry.tube, float(t)) == pytest.approx(want, rel=1e-12, abs=1e-15), t
