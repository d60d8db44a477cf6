import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fraczeta import kernels
from fraczeta.errors import DomainError, LookupFailure
from fraczeta.spaces import (CantorQuarter, Euclidean, GraphPoint, Heisenberg, HeisenbergAxisSegment, HeisenbergPoint,
                             LaaksoGraphSpace, LaaksoPoint, LaaksoSpace, LowerLeftQuarter, PatchworkInterval,
                             PatchworkIntervalSet, PatchworkSquare, Segment2, UpperGeodesic, heisenberg_distance,
                             laakso_distance, patchwork_distance, regularity_audit, set_from_spec, snowflake,
                             space_from_spec, wormhole_height)
from fraczeta.spaces.heisenberg import unit_ball_volume_quadrature
from fraczeta.spaces.laakso import HeightBand, address_bits, bits_address, wormhole_order

unit = st.floats(0.0, 1.0, allow_nan=False)
coord = st.floats(-1.0, 1.0, allow_nan=False)
hpoint = st.builds(HeisenbergPoint, coord, coord, coord)


def rng(seed=0):
    return np.random.default_rng(seed)


# Heisenberg -------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(hpoint, hpoint, hpoint)
def test_heisenberg_metric_axioms(p, q, r):
    d = heisenberg_distance
    assert d(p, q) == d(q, p)
    assert d(p, p) == 0
    assert d(p, r) <= d(p, q) + d(q, r) + 1e-12


@settings(max_examples=100, deadline=None)
@given(hpoint, hpoint, hpoint, st.floats(0.01, 10))
def test_heisenberg_left_invariance_and_dilation(g, p, q, r):
    # compare d^4, which is polynomial in the coordinates; d itself amplifies rounding
    # in the t-difference by a square root near the diagonal
    d4 = heisenberg_distance(p, q) ** 4
    assert math.isclose(heisenberg_distance(g * p, g * q) ** 4, d4, rel_tol=1e-9, abs_tol=1e-12)
    assert math.isclose(heisenberg_distance(p.dilate(r), q.dilate(r)) ** 4, r**4 * d4, rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(hpoint, hpoint)
def test_heisenberg_distance_matches_oracle(p, q):
    want = oracles.heisenberg_gauge_distance(p.as_tuple(), q.as_tuple())
    assert math.isclose(heisenberg_distance(p, q), want, rel_tol=1e-12, abs_tol=1e-14)


def test_gauge_ball_volume():
    assert math.isclose(unit_ball_volume_quadrature(), math.pi**2 / 2, rel_tol=1e-10)
    assert abs(oracles.gauge_ball_volume_grid(160) - math.pi**2 / 2) < 0.01


def test_heisenberg_ball_measure_by_sampling():
    space = Heisenberg()
    center = HeisenbergPoint(0.1, -0.2, 0.05)
    n = 1_000_000
    batch = space.sample(rng(1), n)
    d = space.batch_distance(center, batch)
    for r in (0.3, 0.5):
        p = np.mean(d <= r)
        want = space.ball_measure(center, r)
        sigma = 8 * math.sqrt(p * (1 - p) / n)
        assert abs(8 * p - want) < 3 * sigma


def test_heisenberg_axis_segment_kernel_against_brute_force():
    seg = HeisenbergAxisSegment()
    space = Heisenberg()
    batch = space.sample(rng(2), 200)
    got = seg.distance(batch)
    ts = np.linspace(0, 1, 20001)
    for i in range(len(batch)):
        x, y, t = batch[i]
        brute = min(oracles.heisenberg_gauge_distance((0, 0, s), (x, y, t)) for s in ts[::50])
        assert got[i] <= brute + 1e-12
        assert brute - got[i] < 0.02


# Laakso ---------------------------------------------------------------------

def test_wormhole_heights():
    assert wormhole_height(1) == 0.25
    assert wormhole_height(0, 3) == 3 / 16
    assert wormhole_order(3 / 16) == 2
    assert wormhole_order(0.5) == 1
    assert wormhole_order(Fraction(3, 10)) is None
    assert wormhole_order(1 / 8) == 2
    for bad in ((), (4,), (1, 0), (1.5,)):
        with pytest.raises(DomainError):
            wormhole_height(*bad)


def test_address_round_trip():
    assert address_bits("2112") == 0b1001
    assert bits_address(0b1001, 4) == "2112"
    with pytest.raises(DomainError):
        LaaksoPoint("123", 0.5)
    with pytest.raises(DomainError):
        LaaksoPoint("12", 1.5)


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_laakso_distance_matches_network_oracle(depth):
    r = rng(depth)
    for _ in range(60):
        ax, ay = (int(v) for v in r.integers(0, 2**depth, 2))
        hx, hy = (float(v) for v in r.uniform(0, 1, 2))
        if r.random() < 0.3:
            hx = float(r.integers(1, 4**depth)) / 4**depth
        x = LaaksoPoint(bits_address(ax, depth), hx)
        y = LaaksoPoint(bits_address(ay, depth), hy)
        want = oracles.laakso_network_distance(depth, ax, hx, ay, hy)
        assert math.isclose(laakso_distance(x, y, depth), want, rel_tol=1e-12, abs_tol=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255), unit, unit, unit)
def test_laakso_metric_axioms(a, b, c, h1, h2, h3):
    x, y, z = (LaaksoPoint(bits_address(v, 8), h) for v, h in ((a, h1), (b, h2), (c, h3)))
    d = lambda p, q: laakso_distance(p, q, 8)
    assert d(x, y) == d(y, x)
    assert d(x, x) == 0
    assert d(x, z) <= d(x, y) + d(y, z) + 1e-12
    assert d(x, y) >= abs(h1 - h2) - 1e-15


def test_laakso_depth_convergence():
    r = rng(5)
    a, b = r.integers(0, 2**12, 2)
    pts = [(int(a), 0.37), (int(b), 0.61)]
    prev = None
    for depth in (6, 8, 10, 12):
        x, y = (LaaksoPoint(bits_address(v & (2**depth - 1), depth), h) for v, h in pts)
        d = laakso_distance(x, y, depth)
        if prev is not None:
            assert abs(d - prev) <= 4.0 ** -(depth - 2)
        prev = d


def test_laakso_height_band_sampler():
    space = LaaksoSpace(16)
    n = 1_000_000
    batch = space.sample(rng(6), n)
    band = HeightBand(0.0, 0.5)
    p = band.indicator(batch).mean()
    assert abs(p - band.measure) < 3 * math.sqrt(0.25 / n)
    # each address letter is a fair coin
    for bit in (0, 7, 15):
        frac = ((batch.bits >> np.uint64(bit)) & np.uint64(1)).mean()
        assert abs(frac - 0.5) < 3 * math.sqrt(0.25 / n)


# Laakso graph ---------------------------------------------------------------

def test_laakso_graph_structure():
    space = LaaksoGraphSpace(3)
    g = space.graph
    assert g.n_edges == 4**3
    assert math.isclose(g.masses.sum(), 1.0)
    assert g.upper.sum() == 3**3
    d = g.vertex_distances([g.bottom])[0]
    assert math.isclose(d[g.top], 1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63), unit, unit, unit)
def test_laakso_graph_metric_axioms(e1, e2, e3, s1, s2, s3):
    space = LaaksoGraphSpace(3)
    L = space.graph.lengths
    p, q, r = (GraphPoint(e, s * L[e]) for e, s in ((e1, s1), (e2, s2), (e3, s3)))
    d = space.distance
    assert math.isclose(d(p, q), d(q, p), abs_tol=1e-15)
    assert d(p, p) == 0
    assert d(p, r) <= d(p, q) + d(q, r) + 1e-12
    assert d(p, q) >= abs(space.height(p) - space.height(q)) - 1e-12


def test_laakso_graph_ball_measure_by_sampling():
    space = LaaksoGraphSpace(4)
    center = space.unbatch(space.sample(rng(7), 1))[0]
    n = 500_000
    d = space.batch_distance(center, space.sample(rng(8), n))
    for r in (0.05, 0.2, 0.6):
        p = np.mean(d <= r)
        assert abs(p - space.ball_measure(center, r)) < 3 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_upper_geodesic_distance_against_sampled_points():
    space = LaaksoGraphSpace(4)
    geo = UpperGeodesic(space)
    batch = space.sample(rng(9), 300)
    got = geo.distance(batch)
    g = space.graph
    # dense sample of the set itself
    on = [(e, s) for e in np.flatnonzero(g.upper) for s in np.linspace(0, g.lengths[e], 41)
          if 0.25 - 1e-12 <= g.heights[g.tails[e]] + s <= 0.5 + 1e-12]
    pts = [GraphPoint(int(e), float(s)) for e, s in on]
    for i, p in enumerate(space.unbatch(batch)[:60]):
        brute = min(space.distance(p, a) for a in pts)
        assert got[i] <= brute + 1e-12
        assert brute - got[i] <= g.lengths.max() / 40 + 1e-12


# Patchwork ------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(unit, unit, unit)
def test_patchwork_interval_metric_axioms(x, y, z):
    d = PatchworkInterval().distance
    assert d(x, y) == d(y, x)
    assert d(x, x) == 0
    assert d(x, z) <= d(x, y) + d(y, z) + 1e-12


def test_patchwork_interval_ball_measure_by_sampling():
    space = PatchworkInterval()
    n = 400_000
    batch = space.sample(rng(10), n)
    for x in (0.05, 0.2, 0.6):
        d = space.batch_distance(x, batch)
        for r in (0.05, 0.3):
            p = np.mean(d <= r)
            assert abs(p - space.ball_measure(x, r)) < 3 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_patchwork_interval_set_distance():
    s = PatchworkIntervalSet()
    space = PatchworkInterval()
    batch = space.sample(rng(11), 200)
    got = s.distance(batch)
    grid = np.linspace(0.125, 0.5, 3001)
    for x, g in zip(batch, got):
        brute = min(space.distance(float(x), float(a)) for a in grid[::10])
        assert g <= brute + 1e-12
        assert brute - g < 0.05


@pytest.mark.parametrize("metric", ["linf", "l1"])
def test_lower_left_quarter_matches_chain_oracle(metric):
    a = LowerLeftQuarter(metric)
    pts = [(0.3, 0.7), (0.45, 0.6), (0.1, 0.95), (0.7, 0.2), (0.8, 0.9), (0.55, 0.55), (0.95, 0.51), (0.52, 0.99)]
    got = a.distance(np.array(pts))
    for (x, y), g in zip(pts, got):
        want = oracles.patchwork_quarter_distance(x, y, metric, n=801)
        assert abs(g - want) < 2e-3, (x, y)
        assert g <= want + 1e-12


@pytest.mark.parametrize("metric", ["linf", "l1"])
def test_patchwork_square_metric_axioms(metric):
    space = PatchworkSquare(metric, nodes_per_half_edge=16)
    r = rng(12)
    pts = [tuple(v) for v in r.uniform(0, 1, (6, 2))]
    for p in pts:
        assert space.distance(p, p) == 0
        for q in pts:
            assert math.isclose(space.distance(p, q), space.distance(q, p), rel_tol=1e-6, abs_tol=1e-9)
            for w in pts:
                assert space.distance(p, w) <= space.distance(p, q) + space.distance(q, w) + 1e-6


def test_patchwork_square_hop_inside_one_patch():
    space = PatchworkSquare("linf", nodes_per_half_edge=16)
    # inside the upper-right patch the straight hop is a geodesic
    assert math.isclose(space.distance((0.6, 0.6), (0.9, 0.8)), 0.3, rel_tol=1e-9)
    assert math.isclose(patchwork_distance("patchwork-square-linf", (0.1, 0.1), (0.2, 0.15)), 0.1 ** (1 / 3), rel_tol=1e-6)


def test_snowflake_scales_dimension():
    base = Euclidean(1)
    flake = snowflake(base, 0.5)
    assert flake.dimension_bounds == (2.0, 2.0)
    assert math.isclose(flake.distance(np.array([0.1]), np.array([0.35])), 0.5, rel_tol=1e-12)
    with pytest.raises(DomainError):
        snowflake(base, 1.5)


# Euclidean and kernels --------------------------------------------------------

def test_segment_kernel_against_grid_oracle():
    seg = Segment2()
    for t in (0.05, 0.1):
        assert abs(oracles.segment_tube_grid(t, 3000) - seg.exact_volume(t)) < 1e-3 * seg.exact_volume(t)


def test_cantor_kernel_and_box_counting():
    c = CantorQuarter()
    for t in (0.003, 0.02, 0.1):
        x = np.linspace(-t, 1 + t, 400_001)
        inside = (c.distance(x) <= t).mean() * (1 + 2 * t)
        assert abs(inside - oracles.cantor_tube(t)) < 2e-5
    for k in range(2, 8):
        assert c.box_count(4.0**-k) in (2**k, 2**k + 1)
    assert math.isclose(oracles.box_counting_dimension(oracles.cantor_points(12), [4.0**-k for k in range(3, 9)]),
                        0.5, abs_tol=0.02)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
def test_compiled_and_pure_kernels_agree():
    r = rng(13)
    n = 20_000
    x = r.uniform(-0.25, 1.25, n)
    px, py = r.uniform(-0.3, 1.3, n), r.uniform(-0.3, 0.3, n)
    hx, hy, ht = r.uniform(-0.25, 0.25, n), r.uniform(-0.25, 0.25, n), r.uniform(-0.1, 1.1, n)
    bits = r.integers(0, 1 << 16, n, dtype=np.uint64)
    h = r.uniform(0, 1, n)
    cases = [
        lambda k: k.cantor_distance(x, 26),
        lambda k: k.segment2_distance(px, py, 0.0, 0.0, 1.0, 0.0),
        lambda k: k.heisenberg_axis_distance(hx, hy, ht, 0.0, 1.0),
        lambda k: k.laakso_distance(bits, h, 5, 0.25, 16),
        lambda k: k.laakso_pair_distance(bits, h, h[::-1].copy(), 16),
        lambda k: k.laakso_fiber_distance(bits[:500], h[:500], 16, 24),
    ]
    for case in cases:
        np.testing.assert_allclose(case(kernels.compiled), case(kernels.pure), rtol=1e-12, atol=1e-15)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "numpy")


# Audit and registry -----------------------------------------------------------

def test_audit_euclidean_is_regular():
    rep = regularity_audit(Euclidean(2), n_balls=100, seed=1)
    assert rep.verdict == "regular"
    assert rep.k_lower > 0 and rep.k_upper < math.inf


def test_audit_laakso_graph_is_upper_only():
    rep = regularity_audit(LaaksoGraphSpace(6), n_balls=100, seed=1)
    assert rep.verdict == "upper-only"
    assert rep.d1 < rep.d2


def test_audit_rejects_few_balls():
    with pytest.raises(DomainError):
        regularity_audit(Euclidean(1), n_balls=10)


@pytest.mark.parametrize("space_spec,set_spec", [
    ('{"space":"euclidean","dim":2}', '{"set":"segment"}'),
    ('{"space":"euclidean","dim":1}', '{"set":"cantor"}'),
    ('{"space":"heisenberg"}', '{"set":"t-axis-segment"}'),
    ('{"space":"laakso-f","depth":12}', '{"set":"wormhole-point"}'),
    ('{"space":"laakso-f","depth":12}', '{"set":"cantor-fiber"}'),
    ('{"space":"laakso-graph","level":4}', '{"set":"upper-geodesic"}'),
    ('{"space":"patchwork-interval"}', '{"set":"interval"}'),
    ('{"space":"patchwork-square","metric":"l1"}', '{"set":"lower-left-quarter"}'),
])
def test_registry_builds_working_sets(space_spec, set_spec):
    space = space_from_spec(space_spec)
    a = set_from_spec(space, set_spec)
    region = a.region(0.1)
    d = a.distance(region.sample(rng(14), 1000))
    assert d.shape == (1000,)
    assert np.all(d >= 0) and np.all(np.isfinite(d))


def test_registry_unknown_names():
    with pytest.raises(LookupFailure) as info:
        space_from_spec({"space": "klein-bottle"})
    assert "heisenberg" in str(info.value)
    with pytest.raises(LookupFailure):
        set_from_spec(Heisenberg(), {"set": "cantor"})


def test_pure_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, FRACZETA_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from fraczeta import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
