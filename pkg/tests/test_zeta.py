import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraczeta import catalog as cat
from fraczeta.errors import DomainError, NotAPoleError, PoleError
from fraczeta.estimate import tube_zeta_quadrature
from fraczeta.tubefn import PowerTerm, ScaleBandFamily, TubeFunction
from fraczeta.zeta import (PoleSet, Window, abscissa, continue_tube_zeta, distance_zeta, equivalent, eval_zeta,
                           exprel, poles, principal_dimensions, residue, residue_exact, to_distance_zeta,
                           tube_and_distance)

P = PowerTerm.rational


@settings(max_examples=200)
@given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
def test_exprel(x):
    if abs(x) < 1e-3:
        want = 1 + x / 2 + x * x / 6 + x**3 / 24
    else:
        want = (cmath.exp(x) - 1) / x
    assert abs(exprel(x) - want) <= 1e-12 * max(1.0, abs(want))


def test_power_law_tube_zeta_closed_form():
    # |A_t| = c t^a on (0, delta]: tube zeta = c delta^(s-Q+a) / (s - Q + a)
    tf = TubeFunction(Fraction(1, 2), (P(3, 1),))
    z = continue_tube_zeta(tf, 2)
    for s in (2 + 1j, 0.3 - 2j, -1.5 + 0.1j):
        assert eval_zeta(z, s) == pytest.approx(3 * 0.5 ** (s - 1) / (s - 1), rel=1e-13)
    assert residue_exact(z, 1) == 3
    with pytest.raises(PoleError):
        eval_zeta(z, 1)
    with pytest.raises(NotAPoleError):
        residue(z, 0.5)


def test_lattice_family_closed_form():
    # one band family: poles where m b^-(s - Q + alpha) = 1
    fam = ScaleBandFamily(4, 1, Fraction(1, 4), 1, (P(1, 1, 2),))
    tf = TubeFunction(Fraction(1, 4), (), (fam,))
    z = continue_tube_zeta(tf, 1)
    ps = poles(z, Window(im_max=10))
    assert not ps.isolated
    (f,) = ps.families
    assert f.re == Fraction(1, 2)
    assert f.spacing == pytest.approx(2 * math.pi / math.log(4), abs=1e-12)
    for s in (1.2 + 0.3j, 0.9 - 4j):
        direct = sum(2**k * (4.0**-k) ** (s) * (1 - 4.0**-s) / s for k in range(1, 200))
        assert eval_zeta(z, s) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("name", cat.NAMES)
def test_tube_zeta_matches_quadrature(name):
    e = cat.catalog(name)
    z = continue_tube_zeta(e.tube, e.ambient_q)
    d = float(abscissa(z))
    for s in (complex(d + 0.7, 0.0), complex(d + 1.3, 5.0), complex(d + 2.0, -11.0)):
        r = tube_zeta_quadrature(e.tube, s, t_min=1e-6 * float(e.delta), q=e.ambient_q)
        assert abs(r.value - eval_zeta(z, s)) <= r.error_bound + 1e-12


@pytest.mark.parametrize("name", cat.NAMES)
def test_two_distance_routes_agree(name):
    e = cat.catalog(name)
    _, via_formula = tube_and_distance(e.tube, e.ambient_q)
    direct = distance_zeta(e.tube, e.ambient_q)
    rng = np.random.default_rng(1)
    d = float(abscissa(continue_tube_zeta(e.tube, e.ambient_q)))
    for x, y in zip(rng.uniform(d - 2.5, d + 2.5, 10), rng.uniform(-15, 15, 10)):
        s = complex(x, y)
        a, b = eval_zeta(direct, s), eval_zeta(via_formula, s)
        assert abs(a - b) <= 1e-10 * (1 + abs(a))


def test_distance_zeta_loses_the_pole_at_q():
    e = cat.catalog("patchwork-interval")
    zt, za = continue_tube_zeta(e.tube, e.ambient_q), distance_zeta(e.tube, e.ambient_q)
    assert 2 in poles(zt).real_parts()
    assert 2 not in poles(za).real_parts()
    # continuous value at s = Q is |A_delta| - |A|
    assert eval_zeta(za, 2) == pytest.approx(e.tube(0.25) - 0.25, abs=1e-12)


def test_removable_point_is_filled():
    # t^2 term gives tube zeta c delta^(s-Q+2)/(s-Q+2); the distance zeta has no pole at Q - 0
    tf = TubeFunction(Fraction(1, 4), (P(1, 0),))
    za = distance_zeta(tf, 1)
    assert not poles(za)
    assert eval_zeta(za, 1) == 0


def test_principal_and_equivalence():
    a = cat.catalog("laakso-graph-geodesic")
    z = continue_tube_zeta(a.tube, a.ambient_q)
    pr = principal_dimensions(poles(z, Window(im_max=0)))
    assert pr.real_parts() == {Fraction(1)}
    assert equivalent(z, continue_tube_zeta(a.tube.truncate(Fraction(1, 8)), a.ambient_q))
    b = cat.catalog("heisenberg-segment")
    assert not equivalent(z, continue_tube_zeta(b.tube, b.ambient_q))
    with pytest.raises(DomainError):
        PoleSet().abscissa()


@pytest.mark.parametrize("name", cat.NAMES)
def test_pole_set_json_round_trip(name):
    e = cat.catalog(name)
    ps = poles(continue_tube_zeta(e.tube, e.ambient_q), Window(-3, 7, 12))
    back = PoleSet.from_dict(ps.to_dict())
    assert back.to_dict() == ps.to_dict()
    assert back.real_parts() == ps.real_parts()


def test_window_filters_real_parts():
    e = cat.catalog("patchwork-square-l1")
    ps = poles(continue_tube_zeta(e.tube, e.ambient_q), Window(-1, 1, 0))
    assert ps.real_parts() == {Fraction(-1), Fraction(0), Fraction(1)}


def test_to_distance_zeta_requires_tube_kind():
    e = cat.catalog("heisenberg-point")
    za = distance_zeta(e.tube, e.ambient_q)
    with pytest.raises(DomainError):
        to_distance_zeta(za, 4, 0.25, 1.0)


def test_distance_zeta_of_jumping_profile_matches_stieltjes_sum():
    # the fiber profile jumps at every band edge; a Riemann-Stieltjes sum on a grid
    # through the edges sees the jumps without being told about them
    e = cat.catalog("laakso-cantor-fiber")
    q, delta = float(e.ambient_q), float(e.delta)
    edges = [delta * 4.0**-k * r for k in range(0, 12) for r in (1.0, 0.5)]
    grid = np.unique(np.concatenate([np.geomspace(delta * 4.0**-12, delta, 200_000), edges]))
    f = np.array([e.tube(t) for t in grid])
    mid = np.sqrt(grid[1:] * grid[:-1])
    for s in (2 + 3j, 2.5 - 1j):
        approx = np.sum(mid ** (s - q) * np.diff(f))
        exact = eval_zeta(distance_zeta(e.tube, e.ambient_q), s)
        assert abs(approx - exact) <= 1e-3 * abs(exact), s
