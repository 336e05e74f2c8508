"""Quotient maps and rays for the star of an (n-3)-face of a surface."""

from __future__ import annotations

from fractions import Fraction

from .complex import FaceId, PLSurface
from .exact import (
    DegenerateFace,
    QuotientMap,
    affine_hull,
    make_quotient_map,
    null_space,
    primitive,
    project_vector,
    row_echelon,
    solve_particular,
    sub,
)


class ZeroRay(ValueError):
    """An (n-2)-face of a star projects to a point."""


def _face_index(face) -> int:
    return face.index if isinstance(face, FaceId) else face


def center_vertices(surface: PLSurface, index: int) -> tuple[int, ...]:
    n = surface.n
    if n == 3:
        return (index,)
    return surface.poset.vertex_lists[n - 3][index]


def build_quotient_map(surface: PLSurface, face, force_general: bool = False,
                       scaled: bool = False) -> QuotientMap:
    """Projection along lin(F) for the (n-3)-face ``face``.

    Vertex mode reads lin(F) off the affine hull of F's vertices; facet mode
    intersects the hyperplanes of the facets around F.  With ``scaled`` the
    map lives in the integer-scaled coordinates of the surface.
    """
    index = _face_index(face)
    n = surface.n
    if surface.facet_mode:
        rows, rhs = _facet_system(surface, index)
        if len(row_echelon(rows)) != 3:
            raise DegenerateFace(f"facets around face {index} do not cut an (n-3)-flat")
        center = solve_particular(rows, rhs)
        if center is None:
            raise DegenerateFace(f"facets around face {index} have no common point")
        dirs = null_space(rows, n)
        if not scaled and surface.vertices is not None:
            center = tuple(c / surface.scale for c in center)
        return make_quotient_map(center, dirs, force_general)
    coords = surface.int_coords if scaled else surface.vertices
    pts = [coords[v] for v in center_vertices(surface, index)]
    dim, basis = affine_hull(pts)
    if dim != n - 3:
        raise DegenerateFace(f"face {index} spans a {dim}-flat, expected {n - 3}")
    return make_quotient_map(pts[0], basis, force_general)


def _facet_system(surface: PLSurface, index: int):
    eqs = surface.int_equations
    facets = sorted(surface.poset.facets_around(index))
    if len(facets) < 3:
        raise DegenerateFace(f"only {len(facets)} facets around face {index}")
    rows = [eqs[p][0] for p in facets]
    rhs = [eqs[p][1] for p in facets]
    return rows, rhs


def anchor_point(surface: PLSurface, ridge: int, center: int) -> tuple[Fraction, ...]:
    """A point of the (n-2)-face ``ridge`` off the flat of ``center``, in scaled
    coordinates.

    With vertex data this is the centroid of the ridge's vertices.  For
    3-dimensional facet input it is the other endpoint of the edge, solved
    from the planes around it.
    """
    n = surface.n
    poset = surface.poset
    if surface.vertices is not None and (n == 3 or n - 2 in poset.vertex_lists):
        vl = poset.vertex_lists[n - 2][ridge]
        coords = surface.int_coords
        k = len(vl)
        return tuple(Fraction(sum(coords[v][j] for v in vl), k) for j in range(n))
    if n == 3:
        others = [f for f in poset.contains[1][ridge] if f != center]
        if len(others) != 1:
            raise ZeroRay(f"edge {ridge} does not have two distinct ends")
        rows, rhs = _facet_system(surface, others[0])
        point = solve_particular(rows, rhs)
        if point is None or len(row_echelon(rows)) != 3:
            raise DegenerateFace(f"planes around vertex {others[0]} do not meet in a point")
        return point
    raise DegenerateFace("facet-equation input in dimension > 3 needs vertex anchors")


def ray_of_face(surface: PLSurface, qmap: QuotientMap, ridge, center=None) -> tuple[int, int, int]:
    """Primitive integer direction of the image of an (n-2)-face of the star.

    ``qmap`` must be built with ``scaled=True``.  ``center`` (the star's
    (n-3)-face) is needed in facet mode to pick the anchor.
    """
    g = _face_index(ridge)
    n = surface.n
    if not surface.facet_mode:
        for v in surface.poset.vertex_lists[n - 2][g]:
            img = project_vector(qmap, sub(surface.int_coords[v], qmap.center_point))
            if any(img):
                return primitive(img)
        raise ZeroRay(f"(n-2)-face {g} projects to a point")
    c = _face_index(center)
    p, q = surface.poset.cofaces[n - 2][g]
    eqs = surface.int_equations
    anchor = anchor_point(surface, g, c)
    toward = project_vector(qmap, sub(anchor, qmap.center_point))
    if not any(toward):
        raise ZeroRay(f"anchor of (n-2)-face {g} lies on the flat of face {c}")
    dirs = null_space([eqs[p][0], eqs[q][0]], n)
    if len(dirs) != n - 2:
        # identical hyperplanes across g: a flat ridge, use the anchor direction
        return primitive(toward)
    for d in dirs:
        img = project_vector(qmap, d)
        if any(img):
            if not _parallel(img, toward):
                raise ZeroRay(f"(n-2)-face {g} is inconsistent with its facet equations")
            same = sum(a * b for a, b in zip(img, toward)) > 0
            return primitive(img if same else tuple(-x for x in img))
    raise ZeroRay(f"(n-2)-face {g} projects to a point")


def _parallel(a, b) -> bool:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]) == (0, 0, 0)


def star_rays(surface: PLSurface, cycle, index: int, force_general: bool = False):
    """Rays of the star of (n-3)-face ``index`` in the order of its link ``cycle``.

    Returns ``(rays, qmap)``; ``qmap`` is ``None`` on the 3-dimensional
    vertex-mode fast path, where rays are plain coordinate differences.
    """
    n = surface.n
    ridges = cycle[0::2]
    if n == 3 and not surface.facet_mode and not force_general:
        coords = surface.int_coords
        edges = surface.poset.vertex_lists[1]
        o = coords[index]
        rays = []
        for g in ridges:
            a, b = edges[g]
            x = coords[b if a == index else a]
            rays.append((x[0] - o[0], x[1] - o[1], x[2] - o[2]))
        return rays, None
    qmap = build_quotient_map(surface, index, force_general, scaled=True)
    return [ray_of_face(surface, qmap, g, index) for g in ridges], qmap
