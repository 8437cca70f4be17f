"""Builtin surfaces and the hyperbolic octagon geometry oracles."""

import math

import numpy as np
import pytest

from chernquad.metric import PolygonDomain, RectDomain, edge_arcs
from chernquad.quadrature import QuadratureSpec, build_nodes, reduce_sum
from chernquad.zoo import (
    flat_torus,
    make_surface,
    octagon_interior_angle,
    octagon_vertices,
    poincare_octagon,
    sphere,
    torus_revolution,
)


# --- constructors and validation ---------------------------------------------

def test_parameter_validation():
    with pytest.raises(ValueError):
        sphere(0.0)
    with pytest.raises(ValueError):
        torus_revolution(1.0, 1.0)  # needs R > r
    with pytest.raises(ValueError):
        torus_revolution(2.0, -1.0)
    with pytest.raises(ValueError):
        flat_torus(0.0, 1.0)


def test_make_surface_dispatch_and_errors():
    surf = make_surface("sphere", {"R": 2.0})
    assert surf.name == "sphere(R=2)"
    assert make_surface("torus_revolution").name == "torus_revolution(R=2,r=1)"
    with pytest.raises(ValueError):
        make_surface("klein_bottle")
    with pytest.raises(ValueError):
        make_surface("sphere", {"radius": 2.0})
    with pytest.raises(ValueError):
        make_surface("poincare_octagon", {"R": 1.0})


def test_domain_shapes():
    assert isinstance(sphere(1.0).domain, RectDomain)
    assert sphere(1.0).domain.periodic_v and not sphere(1.0).domain.periodic_u
    assert torus_revolution(2.0, 1.0).domain.fully_periodic
    assert flat_torus(1.0, 1.0).domain.fully_periodic
    octo = poincare_octagon().domain
    assert isinstance(octo, PolygonDomain)
    assert octo.geodesic_edges


def test_analytic_k_fields():
    surf = torus_revolution(2.0, 1.0)
    us = np.array([0.0, math.pi])
    vs = np.zeros(2)
    k = surf.analytic_k(us, vs)
    assert k[0] == pytest.approx(1.0 / 3.0)   # outer equator
    assert k[1] == pytest.approx(-1.0)        # inner equator
    assert poincare_octagon().analytic_k(us, vs) == pytest.approx([-1.0, -1.0])
    assert sphere(2.0).analytic_k(us, vs) == pytest.approx([0.25, 0.25])


# --- octagon geometry ---------------------------------------------------------

def test_octagon_vertices_radius_and_symmetry():
    verts = octagon_vertices()
    assert len(verts) == 8
    # the angle-sum-2*pi radius has the closed form 2^(-1/4)
    rho = 2.0 ** -0.25
    for k, p in enumerate(verts):
        assert math.hypot(p.u, p.v) == pytest.approx(rho, abs=1e-12)
        angle = math.atan2(p.v, p.u) % (2 * math.pi)
        assert angle == pytest.approx((k * math.pi / 4.0) % (2 * math.pi), abs=1e-12)
    assert octagon_interior_angle(rho) == pytest.approx(math.pi / 4.0, abs=1e-13)


def test_octagon_angle_sum_oracle():
    # independent circle-geometry oracle: measure each interior angle from
    # the edge-arc tangents meeting at the vertex
    dom = poincare_octagon().domain
    arcs = edge_arcs(dom)
    total = 0.0
    for k in range(8):
        arc_in, arc_out = arcs[(k - 1) % 8], arcs[k]
        phi_in = arc_in.phi0 + arc_in.dphi
        t_in = (-arc_in.radius * arc_in.dphi * math.sin(phi_in),
                arc_in.radius * arc_in.dphi * math.cos(phi_in))
        phi_out = arcs[k].phi0
        t_out = (-arc_out.radius * arc_out.dphi * math.sin(phi_out),
                 arc_out.radius * arc_out.dphi * math.cos(phi_out))
        turn = math.atan2(t_in[0] * t_out[1] - t_in[1] * t_out[0],
                          t_in[0] * t_out[0] + t_in[1] * t_out[1])
        total += math.pi - turn
    assert total == pytest.approx(2.0 * math.pi, abs=1e-10)


def test_octagon_hyperbolic_area_is_four_pi():
    # Gauss-Bonnet for a geodesic polygon at K = -1: area = 6*pi - angle sum;
    # the quadrature against sqrt(det g) must reproduce it
    surf = poincare_octagon()
    us, vs, ws = build_nodes(surf.domain, QuadratureSpec(32, 32))
    s = 1.0 - us**2 - vs**2
    area = reduce_sum(ws * 4.0 / (s * s))
    assert area == pytest.approx(4.0 * math.pi, abs=1e-9)


def test_octagon_interior_angle_is_monotone():
    # larger octagons are thinner: interior angle decreases in the radius
    angles = [octagon_interior_angle(r) for r in (0.3, 0.5, 0.7, 0.9)]
    assert all(a > b for a, b in zip(angles, angles[1:]))
    assert angles[0] < 3.0 * math.pi / 4.0  # euclidean octagon bound


# --- reference resolutions -----------------------------------------------------

@pytest.mark.parametrize("surf,chern", [
    (sphere(1.0), 2),
    (torus_revolution(2.0, 1.0), 0),
    (flat_torus(1.0, 1.0), 0),
    (poincare_octagon(), -2),
])
def test_expected_chern_metadata(surf, chern):
    assert surf.expected_chern == chern
    n_u, n_v = surf.reference_resolution
    assert n_u >= 8 and n_v >= 8
