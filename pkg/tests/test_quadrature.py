"""Node builders: positivity, measure sums, exactness, convergence."""

import math

import numpy as np
import pytest

from chernquad.metric import Point2, PolygonDomain, RectDomain
from chernquad.quadrature import (
    QuadratureSpec,
    build_nodes,
    domain_measure,
    integrate_scalar,
    reduce_sum,
)
from chernquad.zoo import octagon_vertices

TWO_PI = 2 * math.pi


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(4, 16)
    with pytest.raises(ValueError):
        QuadratureSpec(16, 4)
    with pytest.raises(ValueError):
        QuadratureSpec(16, 16, rule_u="simpson")


def test_for_domain_picks_rules_from_periodicity():
    dom = RectDomain(0.0, math.pi, 0.0, TWO_PI, periodic_v=True)
    spec = QuadratureSpec.for_domain(dom, 16, 32)
    assert spec.rule_u == "gauss" and spec.rule_v == "trapezoid"


@pytest.mark.parametrize("domain", [
    RectDomain(0.0, TWO_PI, 0.0, TWO_PI, periodic_u=True, periodic_v=True),
    RectDomain(0.0, math.pi, 0.0, TWO_PI, periodic_v=True),
    PolygonDomain(octagon_vertices()),
    PolygonDomain(octagon_vertices(), geodesic_edges=True),
    PolygonDomain((Point2(-0.5, -0.5), Point2(0.5, -0.5),
                   Point2(0.5, 0.5), Point2(-0.5, 0.5))),
])
def test_weights_positive_and_sum_to_measure(domain):
    spec = QuadratureSpec.for_domain(domain, 16, 16)
    us, vs, ws = build_nodes(domain, spec)
    assert us.shape == vs.shape == ws.shape
    assert np.all(ws > 0.0)
    measure = domain_measure(domain)
    assert reduce_sum(ws) == pytest.approx(measure, rel=1e-12)
    for u, v in zip(us[:64], vs[:64]):
        assert domain.contains(Point2(float(u), float(v)))


def test_trapezoid_is_spectrally_exact_for_low_harmonics():
    # int sin(u)^2 du dv over the 2 pi square = 2 pi^2, exact at any n >= 3
    dom = RectDomain(0.0, TWO_PI, 0.0, TWO_PI, periodic_u=True, periodic_v=True)
    spec = QuadratureSpec.for_domain(dom, 16, 8)
    got = integrate_scalar(lambda u, v: np.sin(u) ** 2, dom, spec)
    assert got == pytest.approx(2 * math.pi**2, rel=1e-12)


def test_gauss_axis_is_exact_for_polynomials():
    # degree 2n-1 exactness: u^7 over [0, 1] with n=8 gauss nodes
    dom = RectDomain(0.0, 1.0, 0.0, 1.0)
    spec = QuadratureSpec.for_domain(dom, 8, 8)
    assert spec.rule_u == "gauss"
    got = integrate_scalar(lambda u, v: u**7, dom, spec)
    assert got == pytest.approx(1.0 / 8.0, rel=1e-14)


def test_straight_octagon_weight_sum_is_shoelace_area():
    dom = PolygonDomain(octagon_vertices())
    _, _, ws = build_nodes(dom, QuadratureSpec(8, 8))
    assert reduce_sum(ws) == pytest.approx(2.0, rel=1e-12)
    assert dom.area() == pytest.approx(2.0, rel=1e-12)


def test_triangle_rule_is_degree_five_exact():
    # int u^4 over the unit square centered at 0 is 0.0125; the fan rule
    # must hit it at the coarsest legal subdivision
    square = PolygonDomain((Point2(-0.5, -0.5), Point2(0.5, -0.5),
                            Point2(0.5, 0.5), Point2(-0.5, 0.5)))
    got = integrate_scalar(lambda u, v: u**4, square, QuadratureSpec(8, 8))
    assert got == pytest.approx(0.0125, rel=1e-13)


def test_geodesic_octagon_weight_sum_matches_chord_limit():
    # independent oracle: polygonalize every arc into 4096 chords and take
    # the shoelace area of the resulting near-curved polygon
    dom = PolygonDomain(octagon_vertices(), geodesic_edges=True)
    from chernquad.metric import edge_arcs
    pts = []
    for arc in edge_arcs(dom):
        t = np.linspace(0.0, 1.0, 4097)[:-1]
        phi = arc.phi0 + arc.dphi * t
        pts.append(np.column_stack([arc.cu + arc.radius * np.cos(phi),
                                    arc.cv + arc.radius * np.sin(phi)]))
    ring = np.concatenate(pts)
    x, y = ring[:, 0], ring[:, 1]
    shoelace = 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    _, _, ws = build_nodes(dom, QuadratureSpec(16, 16))
    assert reduce_sum(ws) == pytest.approx(shoelace, rel=1e-6)
    assert reduce_sum(ws) == pytest.approx(dom.area(), rel=1e-13)


def test_geodesic_weight_sum_independent_of_resolution():
    dom = PolygonDomain(octagon_vertices(), geodesic_edges=True)
    sums = [reduce_sum(build_nodes(dom, QuadratureSpec(n, n))[2])
            for n in (8, 16, 32)]
    assert sums[0] == pytest.approx(sums[2], rel=1e-14)


def test_polygon_refinement_converges_on_smooth_integrand():
    square = PolygonDomain((Point2(-0.5, -0.5), Point2(0.5, -0.5),
                            Point2(0.5, 0.5), Point2(-0.5, 0.5)))
    exact = 4.0 * math.sin(0.5) ** 2  # int cos(u+v) over the square
    errs = [abs(integrate_scalar(lambda u, v: np.cos(u + v), square,
                                 QuadratureSpec(m, m)) - exact)
            for m in (8, 16)]
    assert errs[1] < errs[0] / 32.0  # degree-5 rule: order >= 6


def test_reduce_sum_is_order_fixed_and_compensated():
    vals = np.array([1e16, 1.0, -1e16, 1.0])
    assert reduce_sum(vals) == 2.0
