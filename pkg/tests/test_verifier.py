import json
import random
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plconvex.complex import FaceId, surface_from_polygons
from plconvex.exact import float_sign
from plconvex.generator import (
    cross_polytope,
    cube,
    dent,
    dodecahedron,
    octahedron,
    permute_faces,
    pinched_tetrahedra,
    random_hull,
    random_linear_map,
    remove_facet,
    scale_surface,
    simplex,
    torus,
    transform_surface,
)
from plconvex.oracle import supporting_hyperplane_oracle
from plconvex.verifier import (
    EXACT,
    EXIT_CODES,
    Mode,
    Verdict,
    check_convexity,
    check_convexity_parallel,
)

SCHEMA = json.loads(resources.files("plconvex").joinpath("report.schema.json").read_text())

CANON = {
    "tetrahedron": simplex(3),
    "cube": cube(3),
    "octahedron": octahedron(),
    "dodecahedron": dodecahedron(),
    "4-simplex": simplex(4),
    "4-cube": cube(4),
    "4-cross": cross_polytope(4),
}


@pytest.mark.parametrize("name", CANON)
def test_canonical_polytopes_are_convex(name):
    rep = check_convexity(CANON[name])
    assert rep.verdict is Verdict.CONVEX
    assert rep.witness is None and rep.reason is None
    assert rep.processed == CANON[name].poset.count(CANON[name].n - 3)


def test_cube_counts():
    c = check_convexity(cube()).counts
    assert c["f_0"] == 8 and c["f_n-3_n-2"] == 24 and c["f_n-2_n-1"] == 24


@pytest.mark.parametrize("name", CANON)
def test_count_identities(name):
    s = CANON[name]
    c = check_convexity(s).counts
    # every (n-2)-face lies in exactly two facets
    assert c["f_n-2_n-1"] == 2 * c["f_n-2"]
    # star sizes: each (n-2)-face of a star sits in two of its facets
    assert c["f_n-3_n-1"] == c["f_n-3_n-2"]


def test_dented_cube():
    s, v = dent(cube(), Fraction(1, 2))
    rep = check_convexity(s)
    assert rep.verdict is Verdict.NOT_CONVEX
    assert rep.witness.dim == 0
    assert not supporting_hyperplane_oracle(s).convex
    # the failing star touches the dent
    star = {v} | {w for e in s.poset.vertex_lists[1] if v in e for w in e}
    assert rep.witness.index in star


def test_torus_not_convex():
    rep = check_convexity(torus())
    assert rep.verdict is Verdict.NOT_CONVEX
    assert EXIT_CODES[rep.verdict] == 1


def test_invalid_inputs():
    rep = check_convexity(remove_facet(cube(), 2))
    assert rep.verdict is Verdict.INVALID and rep.reason == "boundary_face"
    rep = check_convexity(pinched_tetrahedra())
    assert rep.verdict is Verdict.INVALID and rep.reason == "nonmanifold_link"


def test_early_termination():
    s, _ = dent(random_hull(300, 3), Fraction(1, 4), seed=2)
    rep = check_convexity(s)
    assert rep.verdict is Verdict.NOT_CONVEX
    assert rep.processed == rep.witness.index + 1
    assert rep.processed <= s.poset.count(0)


class TestParallel:
    @pytest.mark.parametrize("jobs", [2, 3, 8])
    def test_matches_serial(self, jobs):
        for s in (random_hull(400, 1), dent(random_hull(400, 1), Fraction(1, 3), seed=7)[0], cube(4)):
            serial = check_convexity(s)
            assert check_convexity_parallel(s, EXACT, jobs).comparable() == serial.comparable()

    def test_float_mode_matches_serial(self):
        s = random_hull(200, 4)
        mode = Mode("float", 1e-9)
        assert check_convexity_parallel(s, mode, 4).comparable() == check_convexity(s, mode).comparable()


class TestFloatMode:
    def test_float_sign_examples(self):
        assert float_sign(1e-12, 1e-9) == 0
        assert float_sign(-1.0, 1e-9) == -1

    @pytest.mark.parametrize("name", CANON)
    def test_zero_eps_equals_exact(self, name):
        s = CANON[name]
        assert check_convexity(s, Mode("float", 0.0)).verdict == check_convexity(s).verdict

    def test_hulls(self):
        for seed in range(5):
            s = random_hull(80, seed)
            assert check_convexity(s, Mode("float", 1e-9)).verdict is Verdict.CONVEX

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_sub_tolerance_dent_is_uncertain(self, seed):
        # cube whose top is a very flat pyramid; its apex sits 1e-13 below the top plane
        h = -Fraction(1, 10**13)
        verts = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
                 (Fraction(1, 2), Fraction(1, 2), 1 + h)]
        polys = [(0, 3, 2, 1), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
                 (4, 5, 8), (5, 6, 8), (6, 7, 8), (7, 4, 8)]
        s = transform_surface(surface_from_polygons(verts, polys), random_linear_map(3, random.Random(seed)))
        assert check_convexity(s).verdict is Verdict.NOT_CONVEX
        rep = check_convexity(s, Mode("float", 1e-9))
        assert rep.verdict is Verdict.UNCERTAIN and rep.uncertain_faces > 0
        assert EXIT_CODES[rep.verdict] == 3
        assert check_convexity(s, Mode("float", 0.0)).verdict is Verdict.NOT_CONVEX

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            Mode("float", -1.0)


class TestReport:
    def test_schema(self):
        for s in (cube(), dent(cube(), Fraction(1, 2))[0], remove_facet(cube(), 0)):
            doc = json.loads(check_convexity(s).to_json())
            jsonschema.validate(doc, SCHEMA)

    def test_degree_bound(self):
        assert check_convexity(cube()).audit.degree_max == 3
        assert check_convexity(cube(4)).audit.degree_max == 3

    def test_witness_face_id(self):
        s, _ = dent(cube(), Fraction(1, 2))
        d = check_convexity(s).to_dict()
        assert d["witness_dim"] == 0 and isinstance(d["witness_face"], int)


class TestInvariance:
    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6), st.sampled_from(["cube", "4-cube", "octahedron", "4-cross"]))
    def test_linear_map(self, seed, name):
        s = CANON[name]
        moved = transform_surface(s, random_linear_map(s.n, random.Random(seed)))
        assert check_convexity(moved).verdict is Verdict.CONVEX

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_relabelling_and_scaling(self, seed):
        s, _ = dent(cube(), Fraction(1, 3), seed=seed % 8)
        base = check_convexity(s).verdict
        assert check_convexity(permute_faces(s, seed)).verdict == base
        assert check_convexity(scale_surface(s, Fraction(7, 3))).verdict == base

    def test_witness_stable_under_scaling(self):
        s, _ = dent(random_hull(100, 9), Fraction(1, 2))
        a = check_convexity(s)
        b = check_convexity(scale_surface(s, 1000))
        assert a.witness == b.witness and a.reason == b.reason


def test_face_id_str():
    assert str(FaceId(1, 4)) == "1:4"
