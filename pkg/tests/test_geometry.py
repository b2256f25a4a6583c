import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab import domains, geometry
from hardylab.errors import DomainMembershipError
from hardylab.geometry import Domain


def test_polygon_invariants():
    with pytest.raises(ValueError):
        Domain.polygon([[0, 0], [1, 1], [1, 0], [0, 1]])  # bow tie
    with pytest.raises(ValueError):
        Domain.interval(0.0)
    cw = Domain.polygon([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert cw.area == pytest.approx(1.0)


@pytest.mark.parametrize(
    "x, expected", [((0.5, 0.5), 0.5), ((0.1, 0.3), 0.1)]
)
def test_distance_square(square, x, expected):
    assert geometry.distance_to_boundary(square, x) == pytest.approx(expected, abs=1e-14)


def test_distance_interval(interval):
    assert geometry.distance_to_boundary(interval, 0.75) == pytest.approx(0.25)


@pytest.mark.parametrize("x", [(1.0, 0.5), (1.5, 0.5), (0.0, 0.0)])
def test_distance_rejects_non_interior(square, x):
    with pytest.raises(DomainMembershipError):
        geometry.distance_to_boundary(square, x)


def test_directional_distance_examples(square):
    c = (0.5, 0.5)
    assert geometry.directional_distance(square, c, (1.0, 0.0)) == pytest.approx(0.5)
    diag = np.array([1.0, 1.0]) / np.sqrt(2)
    assert geometry.directional_distance(square, c, diag) == pytest.approx(0.70710678, abs=1e-8)
    assert geometry.directional_distance(square, (0.1, 0.5), (-1.0, 0.0)) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        geometry.directional_distance(square, c, (1.0, 1.0))


def test_mean_distance_square_center(square):
    # m^-2 = 4 (1/2 + 1/pi)
    exact = (4 * (0.5 + 1 / np.pi)) ** -0.5
    r = geometry.mean_distance(square, (0.5, 0.5))
    assert r.m == pytest.approx(0.5528, abs=1e-4)
    assert r.m == pytest.approx(exact, rel=1e-4)
    assert r.d == 0.5


def test_mean_distance_disc_center():
    disc = domains.disc()
    r = geometry.mean_distance(disc, (0.0, 0.0))
    assert abs(r.m - 1.0) <= disc.approx_error + 1e-12


def test_mean_distance_halfplane():
    big = Domain.polygon([[-1e5, 0], [1e5, 0], [1e5, 1e5], [-1e5, 1e5]])
    r = geometry.mean_distance(big, (0.0, 1.0))
    assert r.m == pytest.approx(np.sqrt(2), rel=1e-3)


def test_mean_distance_direction_refinement(square):
    pts = np.array([[0.5, 0.5], [0.1, 0.3], [0.02, 0.9]])
    m1 = geometry.mean_distances(square, pts, 360)
    m2 = geometry.mean_distances(square, pts, 720)
    assert np.all(np.abs(m1 - m2) / m2 < 1e-3)


def test_interval_mean_distance_is_distance(interval):
    r = geometry.mean_distance(interval, 0.3)
    assert r.m == pytest.approx(0.3)


def test_quasi_inradius(square, interval):
    assert geometry.quasi_inradius(square, 0.05) == pytest.approx(0.5528, abs=2e-4)
    assert geometry.quasi_inradius(domains.disc(), 0.1) == pytest.approx(1.0, abs=1e-3)
    assert geometry.quasi_inradius(interval, 0.01) == pytest.approx(0.5)


def test_mean_to_boundary_ratio(square):
    r = geometry.mean_to_boundary_ratio(square, 0.05)
    assert 1.1056 - 1e-3 <= r < np.inf
    center = (4 * (0.5 + 1 / np.pi)) ** -0.5 / 0.5
    assert center == pytest.approx(1.1056, abs=2e-4)
    disc = geometry.mean_to_boundary_ratio(domains.disc(), 0.05)
    assert 1.0 <= disc < 2.0


@pytest.mark.parametrize(
    "dom, eps, expected",
    [("unit_square", 0.1, 0.36), ("unit_square", 0.5, 1.0), ("unit_interval", 0.2, 0.4)],
)
def test_boundary_layer_volume(dom, eps, expected):
    vol = geometry.boundary_layer_volume(domains.builtin(dom), eps)
    assert vol == pytest.approx(expected, rel=1e-9)


def test_minkowski_square_and_interval(square, interval):
    fit = geometry.minkowski_fit(square, [0.04, 0.02, 0.01, 0.005], 0.0005)
    assert fit.alpha == pytest.approx(1.0, abs=0.05)
    assert fit.k1 <= fit.k2
    fit1 = geometry.minkowski_fit(interval, [0.2, 0.1, 0.05, 0.025], 0.0025)
    assert fit1.alpha == pytest.approx(0.0, abs=0.02)


def test_minkowski_rejects_bad_series(square):
    with pytest.raises(ValueError):
        geometry.minkowski_fit(square, [0.1, 0.1, 0.1, 0.1], 0.001)
    with pytest.raises(ValueError):
        geometry.minkowski_fit(square, [0.2, 0.1, 0.05], 0.001)


def test_loglog_slope_exact():
    eps = np.array([0.2, 0.1, 0.05, 0.025])
    assert geometry.loglog_slope(eps, 3 * eps ** 2) == pytest.approx(2.0, abs=1e-12)


interior_pt = st.tuples(st.floats(0.01, 0.99), st.floats(0.01, 0.99))


@settings(max_examples=60, deadline=None)
@given(interior_pt, interior_pt)
def test_distance_is_lipschitz(p, q):
    dom = domains.l_shape()
    pts = np.array([p, q])
    d = geometry.distances(dom, pts)
    inside = geometry.interior_mask(dom, pts, d)
    if inside.all():
        assert abs(d[0] - d[1]) <= np.hypot(p[0] - q[0], p[1] - q[1]) + 1e-12


@settings(max_examples=40, deadline=None)
@given(interior_pt)
def test_distance_below_directional_and_mean(p):
    dom = domains.regular_polygon(6)
    pts = np.array([p]) - 0.5
    d = geometry.distances(dom, pts)
    du = geometry.directional_distances(dom, pts, geometry.unit_directions(36))
    assert np.all(d[:, None] <= du + 1e-12)
    assert d[0] <= geometry.mean_distances(dom, pts)[0] + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 0.3), st.floats(0.01, 0.3))
def test_layer_volume_monotone(e1, e2):
    dom = domains.l_shape()
    lo, hi = sorted((e1, e2))
    q = 0.002
    assert geometry.boundary_layer_volume(dom, lo, q) <= geometry.boundary_layer_volume(dom, hi, q)
