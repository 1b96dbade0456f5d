import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor.errors import IncompatibleSignatureError, NotHyperbolicError
from hypercolor.hypgeo import (
    Mobius,
    TessellationSignature,
    admissible_sides,
    angle_at,
    circumdiameter,
    distance_estimate,
    edge_length,
    face_count,
    fundamental_polygon,
    geodesic_midpoint,
    hyperbolic_distance,
    regular_polygon_area,
    regular_polygon_area_by_triangles,
    shrunk_edge_bound,
)

radii = st.floats(min_value=0.0, max_value=0.95)
angles = st.floats(min_value=0.0, max_value=2 * math.pi)
disk_points = st.builds(lambda r, t: r * cmath.exp(1j * t), radii, angles)
isometries = st.builds(
    lambda w, t: Mobius.from_origin(w) @ Mobius.rotation(t), disk_points, angles
)


def _random_points(n, seed=0):
    rng = np.random.default_rng(seed)
    r = 0.95 * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def _same(m1: Mobius, m2: Mobius, pts) -> bool:
    return np.allclose(m1(pts), m2(pts), atol=1e-9)


class TestMobiusGroupLaws:
    pts = _random_points(100)
    gens = [
        Mobius.from_origin(0.3 + 0.4j),
        Mobius.rotation(1.1),
        Mobius.translation(1.7, 0.4),
        Mobius.half_turn(-0.2 + 0.5j),
    ]

    def test_identity(self):
        for m in self.gens:
            assert _same(m @ Mobius.identity(), m, self.pts)
            assert _same(Mobius.identity() @ m, m, self.pts)

    def test_inverse(self):
        for m in self.gens:
            assert np.allclose((m @ m.inverse())(self.pts), self.pts, atol=1e-9)
            assert np.allclose(m.inverse()(m(self.pts)), self.pts, atol=1e-9)

    def test_associativity(self):
        a, b, c, _ = self.gens
        assert _same((a @ b) @ c, a @ (b @ c), self.pts)

    def test_composition_is_application(self):
        a, b = self.gens[0], self.gens[2]
        assert np.allclose((a @ b)(self.pts), a(b(self.pts)), atol=1e-9)

    def test_disk_preserved(self):
        for m in self.gens:
            assert m.is_disk_isometry()
            assert (np.abs(m(self.pts)) < 1).all()

    def test_half_turn_is_involution(self):
        h = self.gens[3]
        assert np.allclose((h @ h)(self.pts), self.pts, atol=1e-9)
        assert abs(h(-0.2 + 0.5j) - (-0.2 + 0.5j)) < 1e-12


@given(isometries, disk_points, disk_points)
def test_isometries_preserve_distance(m, z1, z2):
    d0 = hyperbolic_distance(z1, z2)
    d1 = hyperbolic_distance(complex(m(z1)), complex(m(z2)))
    assert d1 == pytest.approx(d0, rel=1e-6, abs=1e-6)


@given(disk_points, disk_points, disk_points)
def test_triangle_inequality(a, b, c):
    assert hyperbolic_distance(a, c) <= hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-9


@given(disk_points, disk_points)
def test_midpoint_halves_distance(a, b):
    m = geodesic_midpoint(a, b)
    d = hyperbolic_distance(a, b)
    assert hyperbolic_distance(a, m) == pytest.approx(d / 2, abs=1e-6)
    assert hyperbolic_distance(m, b) == pytest.approx(d / 2, abs=1e-6)


@given(isometries, disk_points, angles, angles)
def test_isometries_preserve_angles(m, v, t1, t2):
    u = complex(Mobius.from_origin(v)(0.3 * cmath.exp(1j * t1)))
    w = complex(Mobius.from_origin(v)(0.3 * cmath.exp(1j * t2)))
    a0 = angle_at(v, u, w)
    a1 = angle_at(complex(m(v)), complex(m(u)), complex(m(w)))
    assert a1 == pytest.approx(a0, abs=1e-6)


def test_translation_moves_origin_by_distance():
    t = Mobius.translation(2.5, 0.7)
    assert hyperbolic_distance(0j, complex(t(0j))) == pytest.approx(2.5)
    assert t.is_hyperbolic()
    assert not Mobius.rotation(0.3).is_hyperbolic()


# -- formulas ---------------------------------------------------------------


@given(st.integers(min_value=7, max_value=60))
def test_gauss_bonnet_area_two_ways(p):
    assert regular_polygon_area(p, 3) == pytest.approx(regular_polygon_area_by_triangles(p, 3))


@given(st.integers(min_value=2, max_value=12))
def test_face_counts_fill_surface(g):
    surface = 4 * math.pi * (g - 1)
    for p, nf in admissible_sides(g):
        assert nf * regular_polygon_area(p, 3) == pytest.approx(surface)


@given(st.integers(min_value=7, max_value=40))
def test_edge_length_matches_placed_polygon(p):
    # an independent route: place the regular polygon and measure one side
    from hypercolor.hypgeo import circumradius, disk_radius

    r = disk_radius(circumradius(p, 3))
    v0, v1 = r, r * cmath.exp(2j * math.pi / p)
    assert hyperbolic_distance(v0, v1) == pytest.approx(edge_length(p, 3), rel=1e-9)
    # corner angle 2pi/3
    v2 = r * cmath.exp(-2j * math.pi / p)
    assert angle_at(v0, v1, v2) == pytest.approx(2 * math.pi / 3, abs=1e-9)


@given(st.integers(min_value=7, max_value=40))
def test_shrunk_bound_is_sum(p):
    assert shrunk_edge_bound(p) == pytest.approx(edge_length(p) + circumdiameter(p))


def test_face_count_genus_two():
    got = {p: nf for p, nf in admissible_sides(2)}
    assert got == {7: 12, 8: 6, 9: 4, 10: 3, 12: 2, 18: 1}


def test_incompatible_signature():
    with pytest.raises(IncompatibleSignatureError):
        face_count(TessellationSignature.of(11, 2))


@pytest.mark.parametrize("p,q", [(6, 3), (4, 4), (3, 6), (5, 3)])
def test_not_hyperbolic(p, q):
    with pytest.raises(NotHyperbolicError):
        TessellationSignature.of(p, 2, q)


def test_genus_one_rejected():
    with pytest.raises(ValueError):
        TessellationSignature.of(8, 1)


def test_estimate_tie_break_at_integer():
    # every ratio in range is safely away from an integer, so plain ceil applies
    for g in range(2, 10):
        for p, _ in admissible_sides(g):
            if p % 2 == 0:
                from hypercolor.hypgeo import distance_ratio

                assert distance_estimate(p, g) == 2 * math.ceil(distance_ratio(p, g))


# -- fundamental polygon ----------------------------------------------------


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_polygon_single_vertex_cycle(g):
    poly = fundamental_polygon(g)
    cycles = poly.vertex_cycles()
    assert len(cycles) == 1 and len(cycles[0]) == 4 * g
    assert poly.cycle_angle_sums()[0] == pytest.approx(2 * math.pi, abs=1e-9)


@pytest.mark.parametrize("g", [2, 3, 6])
def test_side_maps_carry_sides_to_opposite(g):
    poly = fundamental_polygon(g)
    n = 4 * g
    for i, t in enumerate(poly.side_maps):
        assert t.is_hyperbolic()
        j = (i + 2 * g) % n
        # endpoints swap orientation onto the opposite side
        a, b = poly.vertices[i], poly.vertices[(i + 1) % n]
        c, d = poly.vertices[j], poly.vertices[(j + 1) % n]
        assert abs(complex(t(a)) - d) < 1e-9 and abs(complex(t(b)) - c) < 1e-9
        assert abs(complex(t(poly.side_midpoint(i))) - poly.side_midpoint(j)) < 1e-9


@settings(max_examples=50)
@given(disk_points)
def test_reduce_lands_inside(z):
    poly = fundamental_polygon(2)
    w, word = poly.reduce(z)
    assert poly.contains(w)
    # replaying the word reproduces the reduction
    u = z
    for i in word:
        u = complex(poly.side_maps[i](u))
    assert abs(u - w) < 1e-9
