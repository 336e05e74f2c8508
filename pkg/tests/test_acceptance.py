"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the lines
inline; they are printed either way) or directly as a script.
"""

from __future__ import annotations

import functools
import random
import sys
import time
from fractions import Fraction

import pytest

from plconvex.bench import run_bench
from plconvex.complex import surface_from_polygons
from plconvex.exact import QuotientMode
from plconvex.fan import FanReason, FanStatus, c_check
from plconvex.generator import (
    FAN_FAMILIES,
    cross_polytope,
    cube,
    dent,
    dodecahedron,
    fan_suite,
    octahedron,
    permute_faces,
    random_hull,
    random_linear_map,
    simplex,
    transform_surface,
    wound_fan,
)
from plconvex.geometry import build_quotient_map
from plconvex.oracle import fan_oracle, supporting_hyperplane_oracle
from plconvex.verifier import Mode, Verdict, check_convexity, check_convexity_parallel

SUITE_SEED = 2024
FLOAT = Mode("float", 1e-9)


# ---------------------------------------------------------------------------
# suites, built once


@functools.lru_cache(maxsize=None)
def canonical_suite():
    base = [("tetrahedron", simplex(3)), ("cube", cube(3)), ("octahedron", octahedron()),
            ("dodecahedron", dodecahedron()), ("4-simplex", simplex(4)), ("4-cube", cube(4)),
            ("4-cross", cross_polytope(4))]
    rng = random.Random(SUITE_SEED)
    mapped = [(name + "+map", transform_surface(s, random_linear_map(s.n, rng))) for name, s in base]
    return base + mapped


@functools.lru_cache(maxsize=None)
def hull_suite():
    rng = random.Random(SUITE_SEED)
    return [random_hull(rng.randint(20, 200), SUITE_SEED + i) for i in range(200)]


@functools.lru_cache(maxsize=None)
def dent_suite():
    """(surface, dented vertex, depth) per hull; depths drawn from [1/10, 1/2]."""
    rng = random.Random(SUITE_SEED + 1)
    out = []
    for i, s in enumerate(hull_suite()):
        depth = Fraction(rng.randint(10, 50), 100)
        d, v = dent(s, depth, seed=i)
        out.append((d, v, depth))
    return out


def all_surfaces():
    return ([s for _, s in canonical_suite()] + list(hull_suite()) + [d for d, _, _ in dent_suite()])


def sub_tolerance_fixture():
    """Cube with a very flat pyramid on top whose apex sits 1e-13 below the top plane."""
    h = -Fraction(1, 10**13)
    verts = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
             (Fraction(1, 2), Fraction(1, 2), 1 + h)]
    polys = [(0, 3, 2, 1), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
             (4, 5, 8), (5, 6, 8), (6, 7, 8), (7, 4, 8)]
    s = surface_from_polygons(verts, polys)
    return transform_surface(s, random_linear_map(3, random.Random(SUITE_SEED)))


def euler(s) -> int:
    c = s.poset.counts
    return c["f_0"] - c["f_n-2"] + c["f_n-1"]


def in_star(surface, witness: int, v: int) -> bool:
    if witness == v:
        return True
    return any(v in e and witness in e for e in surface.poset.vertex_lists[1])


# ---------------------------------------------------------------------------
# criteria: each returns (ok, detail)


def criterion_1():
    suite = canonical_suite()
    t = time.perf_counter()
    verdicts = [check_convexity(s).verdict for _, s in suite]
    check_s = time.perf_counter() - t
    oracle = [supporting_hyperplane_oracle(s).convex for _, s in suite]
    total_s = time.perf_counter() - t
    bad = [name for (name, _), v in zip(suite, verdicts) if v is not Verdict.CONVEX]
    disagree = [name for (name, _), o in zip(suite, oracle) if not o]
    ok = not bad and not disagree and total_s < 1.0
    return ok, (f"{len(suite)} polytopes, non-convex={bad}, oracle disagreements={disagree}, "
                f"check {check_s:.3f}s, check+oracle {total_s:.3f}s")


def criterion_2():
    t = time.perf_counter()
    hull_suite.cache_clear()
    suite = hull_suite()
    gen_s = time.perf_counter() - t
    verdicts = [check_convexity(s).verdict for s in suite]
    oracle = [supporting_hyperplane_oracle(s).convex for s in suite]
    eulers = [euler(s) for s in suite]
    total_s = time.perf_counter() - t
    n_convex = sum(v is Verdict.CONVEX for v in verdicts)
    n_agree = sum((v is Verdict.CONVEX) == o for v, o in zip(verdicts, oracle))
    n_euler = sum(e == 2 for e in eulers)
    ok = n_convex == n_agree == n_euler == 200 and total_s < 30
    return ok, (f"convex {n_convex}/200, oracle agree {n_agree}/200, Euler=2 {n_euler}/200, "
                f"{total_s:.1f}s incl. {gen_s:.1f}s generation")


def criterion_3():
    t = time.perf_counter()
    dent_suite.cache_clear()
    suite = dent_suite()
    n_nc = n_star = n_agree = 0
    for d, v, _ in suite:
        rep = check_convexity(d)
        nc = rep.verdict is Verdict.NOT_CONVEX
        n_nc += nc
        n_star += nc and in_star(d, rep.witness.index, v)
        n_agree += nc == (not supporting_hyperplane_oracle(d).convex)
    total_s = time.perf_counter() - t
    ok = n_nc == n_star == n_agree == len(suite) == 200 and total_s < 60
    return ok, (f"NotConvex {n_nc}/200, witness star holds dent {n_star}/200, "
                f"oracle agree {n_agree}/200, {total_s:.1f}s")


def criterion_4():
    suite = fan_suite(1200, seed=SUITE_SEED)
    families = {fam for fam, _ in suite}
    disagree = [(fam, rays) for fam, rays in suite if c_check(rays).status.value != fan_oracle(rays)]
    wound = c_check(wound_fan(7))
    wound_ok = wound.status is FanStatus.NOT_CONVEX and wound.reason is FanReason.WINDING_EXCEEDS_ONE
    needed = {"coplanar", "flat_dihedral", "opposite_ray", "wound7"}
    ok = len(suite) >= 1000 and not disagree and wound_ok and needed <= families
    return ok, (f"{len(suite)} fans over {len(families)} families, {len(disagree)} disagreements, "
                f"WoundFan(7) -> {wound.status.value}({wound.reason.value})")


def _diag_scale(s, rng):
    factors = [Fraction(rng.randint(1, 99), rng.randint(1, 99)) for _ in range(s.n)]
    return transform_surface(s, [[factors[i] if i == j else 0 for j in range(s.n)] for i in range(s.n)])


def criterion_5():
    rng = random.Random(SUITE_SEED + 5)
    pool = ([s for _, s in canonical_suite()] + list(hull_suite()[:18])
            + [d for d, _, _ in dent_suite()[:18]])
    failures = []
    for k, s in enumerate(pool[:50]):
        base = check_convexity(s).verdict
        shift = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(s.n)]
        variants = {
            "rescale": _diag_scale(s, rng),
            "affine": transform_surface(s, random_linear_map(s.n, rng), shift),
            "reindex": permute_faces(s, rng.randrange(10**6)),
        }
        for name, t in variants.items():
            if check_convexity(t).verdict is not base:
                failures.append((k, name))
    fans = fan_suite(50, seed=SUITE_SEED + 5)
    for fam, rays in fans:
        scaled = [tuple(k * x for x in r) for r, k in ((r, rng.randint(1, 1000)) for r in rays)]
        if c_check(scaled).status is not c_check(rays).status:
            failures.append((fam, "ray-rescale"))
    ok = len(pool) >= 50 and not failures
    return ok, f"50 surfaces x 3 transforms + 50 fans rescaled, failures={failures[:5]}"


def criterion_6():
    t = time.perf_counter()
    res = run_bench((100, 1_000, 10_000, 100_000), seed=SUITE_SEED, repeat=3)
    total_s = time.perf_counter() - t
    rows = ", ".join(f"{r.counts['f_n-3_n-2']}:{r.elapsed_ms:.0f}ms" for r in res.rows)
    ok = 0.8 <= res.slope <= 1.3 and all(r.verdict == "Convex" for r in res.rows) and total_s < 600
    return ok, f"slope {res.slope:.3f} over f_n-3,n-2 [{rows}], {total_s:.0f}s total"


def criterion_7():
    generic = max(check_convexity(s).audit.degree_max for s in hull_suite())
    fixture = cube(4)
    forced = Mode(force_general=True)
    modes = {build_quotient_map(fixture, e, force_general=True).mode for e in range(fixture.poset.count(1))}
    rep = check_convexity(fixture, forced)
    ok = (generic <= 3 and modes == {QuotientMode.GENERAL_SOLVE} and rep.verdict is Verdict.CONVEX
          and rep.audit.degree_max <= 4)
    return ok, (f"suite-2 max degree {generic}; 4-cube with forced GeneralSolve: "
                f"{rep.verdict.value}, max degree {rep.audit.degree_max}")


def criterion_8():
    mismatches = 0
    surfaces = all_surfaces()
    for s in surfaces:
        serial = check_convexity(s).comparable()
        for jobs in (2, 8):
            if check_convexity_parallel(s, Mode(), jobs).comparable() != serial:
                mismatches += 1
    ok = mismatches == 0
    return ok, f"{len(surfaces)} surfaces x jobs {{1,2,8}}, {mismatches} mismatches"


def criterion_9():
    convex_wrong = dent_wrong = uncertain = 0
    for s in [s for _, s in canonical_suite()] + list(hull_suite()):
        v = check_convexity(s, FLOAT).verdict
        convex_wrong += v is Verdict.NOT_CONVEX
        uncertain += v is Verdict.UNCERTAIN
    for d, _, depth in dent_suite():
        v = check_convexity(d, FLOAT).verdict
        dent_wrong += depth >= Fraction(1, 10) and v is not Verdict.NOT_CONVEX
        uncertain += v is Verdict.UNCERTAIN
    tiny = sub_tolerance_fixture()
    exact = check_convexity(tiny).verdict
    tiny_v = check_convexity(tiny, FLOAT).verdict
    tiny_ok = tiny_v in (exact, Verdict.UNCERTAIN)
    ok = convex_wrong == 0 and dent_wrong == 0 and uncertain == 0 and tiny_ok
    return ok, (f"convex reported NotConvex {convex_wrong}, dents missed {dent_wrong}, "
                f"Uncertain on suites {uncertain}; 1e-13 fold: exact {exact.value}, float {tiny_v.value}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(_line(k, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
