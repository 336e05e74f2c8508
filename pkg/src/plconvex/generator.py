"""Exact-rational test instances: convex polytopes, dents and fan fixtures.

Canonical polytopes are built by brute-force face enumeration over their
(small) vertex sets.  Random 3-polytopes come from a float hull of integer
points near a sphere that is then checked exactly edge by edge.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .complex import FacePoset, PLSurface, build_poset, surface_from_polygons
from .exact import affine_rank_int, cross, dot, null_space, sub

HULL_SCALE = 1 << 16
FAN_SCALE = 1 << 20


class GenError(RuntimeError):
    """No valid instance could be produced within the retry budget."""


class Family(str, Enum):
    RANDOM_HULL = "RandomHull"
    CUBE = "Cube"
    SIMPLEX = "Simplex"
    CROSS_POLYTOPE = "CrossPolytope"
    HYPERCUBE = "Hypercube"
    DODECAHEDRON = "Dodecahedron"
    DENTED = "Dented"
    WOUND_FAN = "WoundFan"


@dataclass(frozen=True)
class GenSpec:
    """What to generate.

    ``num_points`` is the sample size for RandomHull and the number of rays
    for WoundFan.  ``transform`` applies a seeded random invertible rational
    linear map.  Dented needs ``base`` and ``dent_depth`` in (0, 1).
    """

    ambient_dim: int = 3
    family: Family = Family.CUBE
    num_points: int = 0
    seed: int = 0
    base: "GenSpec | None" = None
    dent_depth: Fraction = Fraction(1, 2)
    transform: bool = False
    max_retries: int = 20

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "dent_depth", Fraction(self.dent_depth))
        if self.ambient_dim not in (3, 4):
            raise ValueError("ambient_dim must be 3 or 4")
        fam = self.family
        if fam is Family.RANDOM_HULL:
            if self.ambient_dim != 3:
                raise ValueError("RandomHull is 3-dimensional; use a transformed canonical polytope in R^4")
            if self.num_points < self.ambient_dim + 1:
                raise ValueError("RandomHull needs num_points >= n + 1")
        if fam is Family.DODECAHEDRON and self.ambient_dim != 3:
            raise ValueError("Dodecahedron is 3-dimensional")
        if fam is Family.DENTED:
            if self.base is None:
                raise ValueError("Dented needs a base spec")
            if not 0 < self.dent_depth < 1:
                raise ValueError("dent_depth must lie in (0, 1)")
        if fam is Family.WOUND_FAN and self.num_points < 5:
            raise ValueError("WoundFan needs at least 5 rays")


@dataclass
class Generated:
    """A generated surface plus provenance (the dented vertex, if any)."""

    surface: PLSurface
    spec: GenSpec
    dented_vertex: int | None = None
    extra: dict = field(default_factory=dict)


def generate(spec: GenSpec):
    """Build the instance described by ``spec``.

    Returns a :class:`PLSurface`, or a list of integer rays for WoundFan.
    """
    if spec.family is Family.WOUND_FAN:
        return wound_fan(spec.num_points)
    return generate_full(spec).surface


def generate_full(spec: GenSpec) -> Generated:
    fam = spec.family
    n = spec.ambient_dim
    if fam is Family.WOUND_FAN:
        raise ValueError("WoundFan is a fan fixture, not a surface")
    if fam is Family.DENTED:
        base = generate_full(spec.base).surface
        surface, v = dent(base, spec.dent_depth, spec.seed, spec.max_retries * 4)
        return Generated(surface, spec, v)
    if fam is Family.RANDOM_HULL:
        surface = random_hull(spec.num_points, spec.seed, spec.max_retries)
    elif fam is Family.DODECAHEDRON:
        surface = dodecahedron()
    elif fam in (Family.CUBE, Family.HYPERCUBE):
        surface = cube(4 if fam is Family.HYPERCUBE else n)
    elif fam is Family.SIMPLEX:
        surface = simplex(n)
    else:
        surface = cross_polytope(n)
    if spec.transform:
        rng = random.Random(spec.seed)
        surface = transform_surface(surface, random_linear_map(surface.n, rng))
    return Generated(surface, spec)


# ---------------------------------------------------------------------------
# exact face enumeration for small vertex sets


def _to_ints(points: Sequence[Sequence]) -> list[tuple[int, ...]]:
    fr = [tuple(Fraction(c) for c in p) for p in points]
    den = math.lcm(*(c.denominator for p in fr for c in p)) if fr else 1
    return [tuple(int(c * den) for c in p) for p in fr]


def _hyperplane(pts: Sequence[Sequence[int]]):
    p0 = pts[0]
    ns = null_space([sub(p, p0) for p in pts[1:]], len(p0))
    if len(ns) != 1:
        return None
    den = math.lcm(*(c.denominator for c in ns[0]))
    normal = tuple(int(c * den) for c in ns[0])
    return normal, dot(normal, p0)


def polytope_from_points(points: Sequence[Sequence]) -> PLSurface:
    """Boundary complex of the convex hull of ``points`` (all must be vertices).

    Facets are found from every affinely independent n-subset; lower faces
    are the pairwise intersections of the faces one dimension up.
    Exponential in general, fine for the canonical polytopes.
    """
    coords = _to_ints(points)
    n = len(coords[0])
    m = len(coords)
    facets: set[frozenset[int]] = set()
    for combo in itertools.combinations(range(m), n):
        hp = _hyperplane([coords[i] for i in combo])
        if hp is None:
            continue
        normal, off = hp
        vals = [dot(normal, c) - off for c in coords]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            facets.add(frozenset(i for i, x in enumerate(vals) if x == 0))
    faces = {n - 1: facets}
    for d in range(n - 2, max(n - 4, 0), -1):
        lower = set()
        for a, b in itertools.combinations(faces[d + 1], 2):
            common = a & b
            if len(common) > d and affine_rank_int([coords[i] for i in common]) == d:
                lower.add(common)
        faces[d] = lower
    used = set().union(*facets)
    if len(used) != m:
        raise GenError("points are not in convex position")
    vertex_lists = {d: sorted(tuple(sorted(f)) for f in fs) for d, fs in faces.items() if d >= 1}
    poset = build_poset(n, m, vertex_lists)
    verts = tuple(tuple(Fraction(c) for c in p) for p in points)
    return PLSurface(poset, verts)


def cube(n: int = 3) -> PLSurface:
    return polytope_from_points(list(itertools.product((0, 1), repeat=n)))


def simplex(n: int = 3) -> PLSurface:
    pts = [tuple(0 for _ in range(n))]
    pts += [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return polytope_from_points(pts)


def cross_polytope(n: int = 3) -> PLSurface:
    pts = []
    for i in range(n):
        for s in (1, -1):
            pts.append(tuple(s * int(i == j) for j in range(n)))
    return polytope_from_points(pts)


def tetrahedron() -> PLSurface:
    return simplex(3)


def octahedron() -> PLSurface:
    return cross_polytope(3)


def dodecahedron(phi: Fraction = Fraction(55, 34)) -> PLSurface:
    """Hull of the dodecahedron's vertex pattern with a rational golden ratio.

    With rational ``phi`` the pentagons are no longer planar, so the hull
    has the dodecahedron's vertices but a finer (partly triangulated)
    face structure.
    """
    inv = 1 / phi
    pts = list(itertools.product((-1, 1), repeat=3))
    for a, b in itertools.product((-1, 1), repeat=2):
        pts.append((0, a * inv, b * phi))
        pts.append((a * inv, b * phi, 0))
        pts.append((a * phi, 0, b * inv))
    return polytope_from_points(pts)


# ---------------------------------------------------------------------------
# maps and relabelling


def random_linear_map(n: int, rng: random.Random) -> list[list[Fraction]]:
    """Random invertible matrix with small rational entries."""
    while True:
        mat = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        if len(null_space(mat, n)) == 0:
            return mat


def transform_surface(surface: PLSurface, matrix, shift=None) -> PLSurface:
    """Apply ``x -> matrix @ x + shift`` to all vertices (vertex mode)."""
    n = surface.n
    shift = shift or [0] * n
    verts = tuple(
        tuple(sum(Fraction(matrix[i][j]) * v[j] for j in range(n)) + Fraction(shift[i]) for i in range(n))
        for v in surface.vertices
    )
    return PLSurface(surface.poset, verts)


def scale_surface(surface: PLSurface, factor) -> PLSurface:
    f = Fraction(factor)
    return PLSurface(surface.poset, tuple(tuple(c * f for c in v) for v in surface.vertices))


def permute_faces(surface: PLSurface, seed: int) -> PLSurface:
    """Same surface with vertices and faces of every stored dimension relabelled."""
    rng = random.Random(seed)
    poset = surface.poset
    n = surface.n
    vperm = list(range(poset.num_vertices))
    rng.shuffle(vperm)  # new index of old vertex i is vperm[i]
    verts = [None] * len(vperm)
    for old, new in enumerate(vperm):
        verts[new] = surface.vertices[old]
    vertex_lists = {}
    for d, faces in poset.vertex_lists.items():
        relabelled = [tuple(vperm[v] for v in f) for f in faces]
        order = list(range(len(relabelled)))
        rng.shuffle(order)
        vertex_lists[d] = [relabelled[i] for i in order]
    return PLSurface(build_poset(n, len(verts), vertex_lists), tuple(verts))


# ---------------------------------------------------------------------------
# random hulls


def random_hull(num_points: int, seed: int = 0, max_retries: int = 20) -> PLSurface:
    """Simplicial convex 3-polytope on integer points near a sphere of radius 1.

    Coordinates are rationals with denominator dividing ``HULL_SCALE``.  The
    Qhull triangulation is re-verified exactly: every triangle is oriented
    against an interior point and every edge must be strictly convex.
    Samples that fail (coplanar quadruples, duplicates) are redrawn.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        raw = rng.standard_normal((num_points, 3))
        norms = np.linalg.norm(raw, axis=1)
        if np.any(norms == 0):
            continue
        pts = np.rint(raw / norms[:, None] * HULL_SCALE).astype(np.int64)
        if len(np.unique(pts, axis=0)) != num_points:
            continue
        result = _exact_hull(pts)
        if result is None:
            continue
        verts, tris = result
        return surface_from_polygons(
            [tuple(Fraction(int(c), HULL_SCALE) for c in p) for p in verts], tris
        )
    raise GenError(f"no valid hull after {max_retries} samples")


def _exact_hull(pts: np.ndarray):
    try:
        hull = ConvexHull(pts.astype(float))
    except QhullError:
        return None
    used = sorted(int(i) for i in hull.vertices)
    remap = {old: new for new, old in enumerate(used)}
    verts = [tuple(int(c) for c in pts[i]) for i in used]
    m = len(verts)
    total = tuple(sum(v[j] for v in verts) for j in range(3))
    tris = []
    for simplex_ in hull.simplices:
        a, b, c = (remap[int(i)] for i in simplex_)
        pa, pb, pc = verts[a], verts[b], verts[c]
        normal = cross(sub(pb, pa), sub(pc, pa))
        inside = dot(normal, tuple(total[j] - m * pa[j] for j in range(3)))
        if inside == 0:
            return None
        tris.append((a, b, c) if inside < 0 else (a, c, b))
    third: dict[tuple[int, int], int] = {}
    for a, b, c in tris:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if (x, y) in third:
                return None
            third[(x, y)] = z
    for (x, y), z in third.items():
        w = third.get((y, x))
        if w is None:
            return None
        px = verts[x]
        if dot(cross(sub(verts[y], px), sub(verts[z], px)), sub(verts[w], px)) >= 0:
            return None
    if m - len(third) // 2 + len(tris) != 2:
        return None
    return verts, tris


# ---------------------------------------------------------------------------
# dents


def dent(surface: PLSurface, depth, seed: int = 0, max_tries: int = 80) -> tuple[PLSurface, int]:
    """Push a seed-chosen vertex toward the centroid and re-cone its star.

    The vertex ``v`` moves to ``centroid * depth + v * (1 - depth)``.  Every
    facet containing ``v`` is replaced by cones from the new position over
    its faces that avoid ``v``, so all faces stay flat.  Vertices whose dent
    leaves the surface convex are skipped.  Returns the surface and the
    dented vertex.
    """
    depth = Fraction(depth)
    if not 0 < depth < 1:
        raise ValueError("depth must lie in (0, 1)")
    verts = surface.vertices
    m = len(verts)
    n = surface.n
    centroid = tuple(sum(v[j] for v in verts) / m for j in range(n))
    order = list(range(m))
    random.Random(seed).shuffle(order)
    for v in order[:max_tries]:
        moved = tuple(centroid[j] * depth + verts[v][j] * (1 - depth) for j in range(n))
        out = _recone(surface, v, moved)
        if not _is_convex_after(out, v):
            return out, v
    raise GenError("every tried dent leaves the surface convex")


def _recone(surface: PLSurface, v: int, moved) -> PLSurface:
    poset = surface.poset
    n = surface.n
    star_facets = [frozenset(f) for f in poset.vertex_lists[n - 1] if v in f]
    region = frozenset().union(*star_facets)
    boundary: dict[int, list[tuple[int, ...]]] = {0: [(w,) for w in sorted(region) if w != v]}
    for d, faces in poset.vertex_lists.items():
        if d == n - 1:
            continue
        boundary[d] = [f for f in faces if v not in f and any(set(f) <= P for P in star_facets)]
    vertex_lists = {}
    for d, faces in poset.vertex_lists.items():
        kept = [f for f in faces if v not in f]
        cones = [tuple(sorted((*f, v))) for f in boundary.get(d - 1, [])]
        vertex_lists[d] = kept + cones
    verts = list(surface.vertices)
    verts[v] = tuple(moved)
    return PLSurface(build_poset(n, len(verts), vertex_lists), tuple(verts))


def _is_convex_after(surface: PLSurface, v: int) -> bool:
    coords = surface.int_coords
    for f in surface.poset.vertex_lists[surface.n - 1]:
        if v not in f:
            continue
        hp = _hyperplane([coords[i] for i in f])
        if hp is None:
            return True  # flat cone; treat as a failed dent
        normal, off = hp
        vals = [dot(normal, c) - off for c in coords]
        if any(x > 0 for x in vals) and any(x < 0 for x in vals):
            return False
    return True


# ---------------------------------------------------------------------------
# other surfaces


def torus(major: int = 6, minor: int = 4) -> PLSurface:
    """Quadrangulated torus of revolution with exact rational vertices.

    Quads join consecutive meridians and parallels; their meridian sides are
    parallel, so each quad is planar.
    """
    def circle(k):
        # rational points on the unit circle via t = tan(angle / 2)
        pts = []
        for i in range(k):
            half = math.pi * i / k
            if abs(math.cos(half)) < 1e-9:
                pts.append((Fraction(-1), Fraction(0)))
                continue
            t = Fraction(math.tan(half)).limit_denominator(1000)
            den = 1 + t * t
            pts.append(((1 - t * t) / den, 2 * t / den))
        return pts

    big, small = circle(major), circle(minor)
    R, r = 3, 1
    verts = []
    for c, s in big:
        for cp, sp in small:
            rho = R + r * cp
            verts.append((rho * c, rho * s, r * sp))
    quads = []
    for i in range(major):
        for j in range(minor):
            a = i * minor + j
            b = ((i + 1) % major) * minor + j
            c = ((i + 1) % major) * minor + (j + 1) % minor
            d = i * minor + (j + 1) % minor
            quads.append((a, b, c, d))
    return surface_from_polygons(verts, quads)


def pinched_tetrahedra() -> PLSurface:
    """Two tetrahedra glued at a single vertex: the link there is two cycles."""
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    tris = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3),
            (0, 4, 5), (0, 6, 4), (0, 5, 6), (4, 6, 5)]
    return surface_from_polygons(verts, tris)


def remove_facet(surface: PLSurface, facet: int) -> PLSurface:
    """Surface with one facet deleted (a surface with boundary)."""
    poset = surface.poset
    n = surface.n
    contains = dict(poset.contains)
    vl = dict(poset.vertex_lists)
    contains[n - 1] = tuple(c for i, c in enumerate(contains[n - 1]) if i != facet)
    vl[n - 1] = tuple(c for i, c in enumerate(vl[n - 1]) if i != facet)
    return PLSurface(FacePoset(n, poset.num_vertices, vl, contains), surface.vertices)


def disjoint_union(a: PLSurface, b: PLSurface) -> PLSurface:
    n = a.n
    off = a.poset.num_vertices
    vl = {}
    for d in a.poset.vertex_lists:
        vl[d] = list(a.poset.vertex_lists[d]) + [tuple(x + off for x in f) for f in b.poset.vertex_lists[d]]
    verts = a.vertices + b.vertices
    return PLSurface(build_poset(n, len(verts), vl), verts)


# ---------------------------------------------------------------------------
# fan fixtures


def wound_fan(k: int = 7, turns: int = 2) -> list[tuple[int, int, int]]:
    """Rays through a star polygon in the plane z = 1 that winds ``turns`` times.

    Consecutive rays are ``2 pi turns / k`` apart, so every corner turns the
    same way; ``k`` and ``turns`` must be coprime with ``2 turns < k``.
    """
    if math.gcd(k, turns) != 1 or 2 * turns >= k:
        raise ValueError("need gcd(k, turns) = 1 and 2 * turns < k")
    rays = []
    for j in range(k):
        ang = 2 * math.pi * turns * j / k
        rays.append((round(math.cos(ang) * FAN_SCALE), round(math.sin(ang) * FAN_SCALE), FAN_SCALE))
    return rays


FAN_FAMILIES = ("convex", "perturbed", "coplanar", "coplanar_shuffled", "flat_dihedral",
                "wedge", "opposite_ray", "random", "wound", "reversal")


def _int_map(rng: random.Random, vec, mat):
    return tuple(sum(mat[i][j] * vec[j] for j in range(3)) for i in range(3))


def _random_int_matrix(rng: random.Random):
    while True:
        mat = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if dot(mat[0], cross(mat[1], mat[2])) != 0:
            return mat


def _angles(rng: random.Random, k: int, max_gap: float = math.pi * 0.95) -> list[float]:
    while True:
        angs = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        gaps = [angs[(i + 1) % k] - angs[i] for i in range(k - 1)]
        gaps.append(angs[0] + 2 * math.pi - angs[-1])
        if max(gaps) < max_gap:
            return angs


def _circle_point(a: float, scale: int = 64) -> tuple[int, int]:
    return round(math.cos(a) * scale), round(math.sin(a) * scale)


def _half_plane_ray(t: float, d: tuple[int, int]) -> tuple[int, int, int]:
    s = max(1, round(math.sin(t) * 64))
    return s * d[0], s * d[1], round(math.cos(t) * 64) * 64


def random_fan(rng: random.Random, family: str, k: int) -> list[tuple[int, ...]]:
    """A random cyclic fan of ``k`` integer rays from one of :data:`FAN_FAMILIES`.

    Families aim at specific code paths (flat stars, wedges, doubled-back
    corners, multiple winding); the expected verdict is left to an oracle.
    """
    k = max(k, 3)
    mat = _random_int_matrix(rng)
    if family in ("convex", "perturbed", "reversal", "flat_dihedral"):
        angs = _angles(rng, k)
        h = rng.randint(20, 80)
        rays = [(*_circle_point(a), h) for a in angs]
        if family == "perturbed":
            i = rng.randrange(k)
            x, y, z = rays[i]
            rays[i] = (x + rng.randint(-40, 40), y + rng.randint(-40, 40), z + rng.randint(-60, 30))
        elif family == "reversal" and k >= 4:
            i = rng.randrange(k)
            a, b = rays[i], rays[(i + 1) % k]
            mid = tuple(2 * x + y for x, y in zip(a, b))
            rays.insert(i + 1, b)
            rays[i + 2 if i + 2 < len(rays) else 0] = mid
        elif family == "flat_dihedral":
            i = rng.randrange(k)
            a, b = rays[i], rays[(i + 1) % k]
            s, t = rng.randint(1, 4), rng.randint(1, 4)
            rays.insert(i + 1, tuple(s * x + t * y for x, y in zip(a, b)))
    elif family in ("coplanar", "coplanar_shuffled"):
        angs = _angles(rng, k, math.pi * 1.2)
        rays = [(*_circle_point(a), 0) for a in angs]
        if family == "coplanar_shuffled":
            rng.shuffle(rays)
    elif family in ("wedge", "opposite_ray"):
        u = (0, 0, 1)
        ka = max(1, (k - 2) // 2)
        kb = max(1, k - 2 - ka)
        ha = sorted(rng.uniform(0.05, math.pi - 0.05) for _ in range(ka))
        hb = sorted((rng.uniform(0.05, math.pi - 0.05) for _ in range(kb)), reverse=True)
        phi = rng.uniform(0.3, math.pi - 0.3) if family == "wedge" else rng.choice([math.pi, rng.uniform(0.3, 3.0)])
        da = (64, 0)
        db = _circle_point(phi)
        rays = [u]
        # integer multiples of the in-plane direction keep each half exactly planar
        rays += [_half_plane_ray(t, da) for t in ha]
        rays.append((0, 0, -1))
        rays += [_half_plane_ray(t, db) for t in hb]
        if family == "opposite_ray" and rng.random() < 0.5:
            j = rng.randrange(1, len(rays))
            rays[j] = tuple(x + rng.randint(-5, 5) for x in rays[j])
    elif family == "wound":
        turns = 2
        kk = max(k, 5)
        while math.gcd(kk, turns) != 1:
            kk += 1
        rays = wound_fan(kk, turns)
        return [_int_map(rng, r, mat) for r in rays]
    else:
        rays = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(k)]
    # one positive factor per ray keeps its direction
    scaled = [tuple(k * x for x in r) for r, k in ((r, rng.randint(1, 3)) for r in rays)]
    return [_int_map(rng, r, mat) for r in scaled]


def fan_suite(count: int, seed: int = 0, k_range=(3, 12)) -> list[tuple[str, list]]:
    """``count`` fixtures cycling through the families, plus WoundFan(7)."""
    rng = random.Random(seed)
    out = [("wound7", wound_fan(7))]
    fams = FAN_FAMILIES
    for i in range(count - 1):
        fam = fams[i % len(fams)]
        out.append((fam, random_fan(rng, fam, rng.randint(*k_range))))
    return out


def with_depth(spec: GenSpec, depth) -> GenSpec:
    return replace(spec, dent_depth=Fraction(depth))
