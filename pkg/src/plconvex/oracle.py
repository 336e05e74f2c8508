"""Brute-force convexity deciders used to cross-check the verifier.

These are deliberately naive (quadratic or worse) and share no code with the
star-by-star verifier beyond exact arithmetic helpers.  They are intended for
desk-scale inputs only.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .complex import FaceId, PLSurface
from .exact import null_space
from .lp import seidel_lp


class NonPlanarFacet(ValueError):
    def __init__(self, facet: FaceId):
        super().__init__(f"facet {facet} does not span a hyperplane")
        self.facet = facet


@dataclass(frozen=True)
class OracleVerdict:
    convex: bool
    failing_facet: FaceId | None = None
    strictly_outside_vertex: FaceId | None = None

    def __post_init__(self):
        missing = self.failing_facet is None or self.strictly_outside_vertex is None
        if self.convex != missing:
            raise ValueError("failing data must be present exactly when not convex")


def facet_hyperplane(coords: Sequence[Sequence[int]], facet_vertices: Sequence[int]):
    """Integer normal and offset of the hyperplane through a facet, or None."""
    p0 = coords[facet_vertices[0]]
    rows = [[x - y for x, y in zip(coords[v], p0)] for v in facet_vertices[1:]]
    n = len(p0)
    ns = null_space(rows, n)
    if len(ns) != 1:
        return None
    normal = ns[0]
    den = math.lcm(*(c.denominator for c in normal))
    normal = [int(c * den) for c in normal]
    offset = sum(a * b for a, b in zip(normal, p0))
    for v in facet_vertices:
        if sum(a * b for a, b in zip(normal, coords[v])) != offset:
            return None
    return normal, offset


def _side_matrix(normals: list[list[int]], coords: Sequence[Sequence[int]]) -> np.ndarray:
    big = max((abs(x) for row in normals for x in row), default=0)
    cbig = max((abs(x) for row in coords for x in row), default=0)
    n = len(normals[0]) if normals else 1
    dtype = np.int64 if big * cbig * n < 2**62 else object
    A = np.array(normals, dtype=dtype)
    X = np.array(coords, dtype=dtype)
    return A @ X.T


def supporting_hyperplane_oracle(surface: PLSurface) -> OracleVerdict:
    """Convex iff every facet hyperplane has all vertices weakly on one side."""
    if surface.vertices is None:
        raise ValueError("the oracle needs vertex coordinates")
    n = surface.n
    poset = surface.poset
    coords = surface.int_coords
    facets = poset.vertex_lists[n - 1]
    planes = []
    for i, vl in enumerate(facets):
        hp = facet_hyperplane(coords, vl)
        if hp is None:
            raise NonPlanarFacet(FaceId(n - 1, i))
        planes.append(hp)
    values = _side_matrix([p[0] for p in planes], coords)
    for i, (_, offset) in enumerate(planes):
        row = values[i] - offset
        above = row > 0
        below = row < 0
        if above.any() and below.any():
            # the minority side is reported as outside
            side = below if below.sum() <= above.sum() else above
            v = int(np.flatnonzero(side)[0])
            return OracleVerdict(False, FaceId(n - 1, i), FaceId(0, v))
    return OracleVerdict(True)


def extreme_point_oracle(points: Sequence[Sequence], seed: int = 0) -> list[int]:
    """Indices of points that are not convex combinations of the others.

    Point ``i`` is extreme iff it differs from every other point and some
    linear functional ``a`` has ``a . (p_j - p_i) < 0`` for all ``j != i``.
    The functional is found by an exact LP and re-checked exactly.
    """
    if len(points) > 200:
        raise ValueError("extreme_point_oracle is limited to 200 points")
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        return []
    d = len(pts[0])
    rng = random.Random(seed)
    out = []
    for i, p in enumerate(pts):
        diffs = [tuple(a - b for a, b in zip(q, p)) for j, q in enumerate(pts) if j != i]
        if any(not any(v) for v in diffs):
            continue
        if not diffs:
            out.append(i)
            continue
        # maximize t subject to a . diff + t <= 0, box |a|, |t| <= 1
        cons = [((*v, 1), 0) for v in diffs]
        sol = seidel_lp(cons, (0,) * d + (1,), bound=1, rng=rng)
        if sol is None or sol[d] <= 0:
            continue
        a = sol[:d]
        if all(sum(x * y for x, y in zip(a, v)) < 0 for v in diffs):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# fans


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _det(a, b, c):
    return _dot(a, _cross(b, c))


def _winding_about(axis, rays) -> int:
    """Turns of the cyclic ray sequence about ``axis``.

    Assumes every step turns positively by less than pi.  Counts arrivals
    at, or crossings of, the half-plane spanned by ``axis`` and ``rays[0]``.
    """
    r0 = rays[0]
    aa = _dot(axis, axis)

    def at_zero(x):
        if _det(axis, r0, x) != 0:
            return False
        return _dot(x, r0) * aa - _dot(x, axis) * _dot(r0, axis) > 0

    k = len(rays)
    count = 0
    for i in range(k):
        x, y = rays[i], rays[(i + 1) % k]
        if _det(axis, r0, x) <= 0 and not at_zero(x):
            if _det(axis, r0, y) > 0 or at_zero(y):
                count += 1
    return count


def fan_oracle(rays: Sequence[Sequence]) -> str:
    """Status of a cyclic fan: "Convex", "NotConvex" or "Invalid".

    Invalid: fewer than 3 rays, a zero ray, or consecutive parallel rays.
    Otherwise the fan is convex iff the plane of every 2-cone weakly
    supports all rays, every 2-cone turns the same way about an interior
    axis, and the fan goes around that axis exactly once.  The axis is the
    normal of the common plane for coplanar fans and the ray sum otherwise.
    """
    rays = [tuple(Fraction(c) for c in r) for r in rays]
    k = len(rays)
    if k < 3 or any(not any(r) for r in rays):
        return "Invalid"
    normals = [_cross(rays[i], rays[(i + 1) % k]) for i in range(k)]
    if any(not any(nm) for nm in normals):
        return "Invalid"
    coplanar = all(not any(_cross(normals[0], nm)) for nm in normals)
    if coplanar:
        axis = normals[0]
    else:
        for nm in normals:
            signs = {(s > 0) - (s < 0) for s in (_dot(nm, r) for r in rays)}
            if {1, -1} <= signs:
                return "NotConvex"
        axis = tuple(sum(r[j] for r in rays) for j in range(3))
        if not any(axis):
            return "NotConvex"
    turns = {(s > 0) - (s < 0) for s in (_dot(axis, nm) for nm in normals)}
    if len(turns) != 1 or 0 in turns:
        return "NotConvex"
    if turns == {-1}:
        rays = rays[::-1]
    return "Convex" if _winding_about(axis, rays) == 1 else "NotConvex"
