import itertools
import random
from fractions import Fraction

import pytest

from plconvex.complex import FaceId, surface_from_polygons
from plconvex.generator import cube, dent, random_hull, simplex, torus
from plconvex.oracle import (
    NonPlanarFacet,
    OracleVerdict,
    extreme_point_oracle,
    facet_hyperplane,
    fan_oracle,
    supporting_hyperplane_oracle,
)


def test_cube_is_convex():
    assert supporting_hyperplane_oracle(cube()) == OracleVerdict(True)


def test_simplex_4():
    assert supporting_hyperplane_oracle(simplex(4)).convex


def test_dented_cube_fails_next_to_the_dent():
    s, v = dent(cube(), Fraction(2, 5))
    verdict = supporting_hyperplane_oracle(s)
    assert not verdict.convex
    facet = s.poset.vertex_lists[2][verdict.failing_facet.index]
    outside = verdict.strictly_outside_vertex.index
    # either the facet is one of the new cones at v, or v itself pokes through
    assert v in facet or outside == v


def test_torus():
    assert not supporting_hyperplane_oracle(torus()).convex


def test_nonplanar_facet():
    verts = [(0, 0, 0), (1, 0, 0), (1, 1, Fraction(1, 3)), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    polys = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
    with pytest.raises(NonPlanarFacet) as info:
        supporting_hyperplane_oracle(surface_from_polygons(verts, polys))
    assert info.value.facet == FaceId(2, 0)


def test_facet_hyperplane():
    coords = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)]
    normal, off = facet_hyperplane(coords, [1, 2, 3])
    assert normal[0] == normal[1] == normal[2] and off == 2 * normal[0]
    assert facet_hyperplane(coords, [0, 1, 1]) is None


def test_verdict_shape():
    with pytest.raises(ValueError):
        OracleVerdict(False)


class TestExtremePoints:
    def test_square_with_center(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (Fraction(1, 2), Fraction(1, 2))]
        assert extreme_point_oracle(pts) == [0, 1, 2, 3]

    def test_collinear(self):
        pts = [(0, 0, 0), (1, 1, 1), (2, 2, 2), (3, 3, 3)]
        assert extreme_point_oracle(pts) == [0, 3]

    def test_duplicates_are_not_extreme(self):
        assert extreme_point_oracle([(0, 0), (0, 0), (1, 0)]) == [2]

    def test_against_exhaustive_planes(self):
        rng = random.Random(12)
        pts = [tuple(rng.randint(-20, 20) for _ in range(3)) for _ in range(20)]
        # a point is extreme iff it spans a supporting plane with two others (no four coplanar here)
        expected = set()
        for a, b, c in itertools.combinations(range(20), 3):
            u = [pts[b][k] - pts[a][k] for k in range(3)]
            w = [pts[c][k] - pts[a][k] for k in range(3)]
            nrm = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
            if nrm == (0, 0, 0):
                continue
            side = [sum(nrm[k] * (p[k] - pts[a][k]) for k in range(3)) for p in pts]
            if all(x >= 0 for x in side) or all(x <= 0 for x in side):
                expected |= {a, b, c}
        assert set(extreme_point_oracle(pts)) == expected

    def test_hull_vertices_are_extreme(self):
        s = random_hull(40, 2)
        assert extreme_point_oracle(s.vertices) == list(range(len(s.vertices)))

    def test_size_limit(self):
        with pytest.raises(ValueError):
            extreme_point_oracle([(i, 0) for i in range(201)])


class TestFanOracle:
    def test_examples(self):
        e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        assert fan_oracle([e1, e2, e3]) == "Convex"
        assert fan_oracle([e1, e2, (-1, 0, 0), (0, -1, 0)]) == "Convex"
        assert fan_oracle([e1, e1, e2]) == "Invalid"
        assert fan_oracle([(1, 0, 1), (0, 1, -1), (-1, 0, 1), (0, -1, -1)]) == "NotConvex"
