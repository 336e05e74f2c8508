"""Face posets, PL-surfaces, structural validation and star extraction.

Only the faces of dimension 0, n-3, n-2 and n-1 are stored.  A face is
addressed by :class:`FaceId` ``(dim, index)``; indices are dense per
dimension.  Surfaces are immutable once built and safe to share between
threads and forked worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .exact import affine_rank_int, cross, dot, sub


class FaceId(NamedTuple):
    dim: int
    index: int

    def __str__(self) -> str:
        return f"{self.dim}:{self.index}"


class SurfaceError(ValueError):
    """Base class for malformed surface input."""


class ParseError(SurfaceError):
    pass


class DimensionError(SurfaceError):
    pass


class MissingLinkError(SurfaceError):
    pass


class NotManifoldAtFace(ValueError):
    def __init__(self, face: FaceId, message: str):
        super().__init__(f"face {face}: {message}")
        self.face = face


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str | None = None
    face: FaceId | None = None
    message: str = ""
    flat_faces: tuple[FaceId, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


VALID = ValidationReport(True)


@dataclass(frozen=True, eq=False)
class FacePoset:
    """Incidences between faces of dimension 0, n-3, n-2, n-1.

    ``vertex_lists[d][i]`` lists the vertices of face ``(d, i)`` (or is
    absent for facet-equation input without vertices); ``contains[d][i]``
    lists the ids of the ``(d-1)``-faces it contains, for ``d`` in
    ``{n-2, n-1}``.
    """

    ambient_dim: int
    num_vertices: int
    vertex_lists: dict[int, tuple[tuple[int, ...], ...]]
    contains: dict[int, tuple[tuple[int, ...], ...]]
    num_faces: dict[int, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.ambient_dim

    def count(self, dim: int) -> int:
        if dim in self.num_faces:
            return self.num_faces[dim]
        if dim == 0:
            return self.num_vertices
        if dim in self.contains:
            return len(self.contains[dim])
        if dim in self.vertex_lists:
            return len(self.vertex_lists[dim])
        return self.num_faces.get(dim, 0)

    def faces(self, dim: int) -> list[FaceId]:
        return [FaceId(dim, i) for i in range(self.count(dim))]

    def vertices_of(self, face: FaceId) -> tuple[int, ...]:
        if face.dim == 0:
            return (face.index,)
        return self.vertex_lists[face.dim][face.index]

    @cached_property
    def cofaces(self) -> dict[int, list[list[int]]]:
        """``cofaces[d][i]``: the (d+1)-faces containing face ``(d, i)``."""
        up = {}
        for d in (self.n - 2, self.n - 1):
            lower = [[] for _ in range(self.count(d - 1))]
            for j, subs in enumerate(self.contains[d]):
                for i in subs:
                    lower[i].append(j)
            up[d - 1] = lower
        return up

    def facets_around(self, index: int) -> set[int]:
        """Facets containing the (n-3)-face ``index``."""
        up = self.cofaces
        return {p for g in up[self.n - 3][index] for p in up[self.n - 2][g]}

    @cached_property
    def counts(self) -> dict[str, int]:
        n = self.n
        up = self.cofaces
        f3 = self.count(n - 3)
        return {
            "f_0": self.count(0),
            "f_n-3": f3,
            "f_n-2": self.count(n - 2),
            "f_n-1": self.count(n - 1),
            "f_n-3_n-2": sum(len(g) for g in up[n - 3]),
            "f_n-3_n-1": sum(len(self.facets_around(i)) for i in range(f3)),
            "f_n-2_n-1": sum(len(c) for c in self.contains[n - 1]),
        }


@dataclass(frozen=True, eq=False)
class PLSurface:
    """A face poset together with its realization.

    Vertex mode: ``vertices`` holds exact rational coordinates.  Facet mode:
    ``facet_equations[i] = (normal, offset)`` describes ``normal . x = offset``
    for facet ``i``; vertex coordinates, if also present, serve only as
    anchors for orienting rays.
    """

    poset: FacePoset
    vertices: tuple[tuple[Fraction, ...], ...] | None = None
    facet_equations: tuple[tuple[tuple[Fraction, ...], Fraction], ...] | None = None

    @property
    def n(self) -> int:
        return self.poset.ambient_dim

    @property
    def facet_mode(self) -> bool:
        return self.facet_equations is not None

    @cached_property
    def scale(self) -> int:
        """Common denominator of all vertex coordinates."""
        dens = {c.denominator for v in self.vertices for c in v}
        return math.lcm(*dens) if dens else 1

    @cached_property
    def int_coords(self) -> tuple[tuple[int, ...], ...]:
        """Vertex coordinates scaled by :attr:`scale` to integers.

        Convexity and affine ranks are invariant under uniform scaling, so
        the predicates run on these.
        """
        D = self.scale
        if D == 1:
            return tuple(tuple(c.numerator for c in v) for v in self.vertices)
        return tuple(tuple(c.numerator * (D // c.denominator) for c in v) for v in self.vertices)

    @cached_property
    def int_equations(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Facet equations rescaled to integer normals, in integer coordinates."""
        out = []
        D = self.scale if self.vertices is not None else 1
        for normal, offset in self.facet_equations:
            den = math.lcm(*(c.denominator for c in normal), (offset * D).denominator)
            out.append((tuple(int(c * den) for c in normal), int(offset * D * den)))
        return tuple(out)


# ---------------------------------------------------------------------------
# validation


def validate_poset(poset: FacePoset, cycles_out: list | None = None) -> ValidationReport:
    """Closed manifold, circular links, connected facet graph (in that order).

    Link cycles found on the way are appended to ``cycles_out`` if given.
    """
    n = poset.n
    up = poset.cofaces
    for g, facets in enumerate(up[n - 2]):
        if len(facets) != 2:
            return ValidationReport(
                False, "boundary_face" if len(facets) < 2 else "nonmanifold_face",
                FaceId(n - 2, g), f"(n-2)-face in {len(facets)} facets",
            )
    for f in range(poset.count(n - 3)):
        try:
            cyc = link_cycle(poset, f)
        except NotManifoldAtFace as exc:
            return ValidationReport(False, "nonmanifold_link", exc.face, str(exc))
        if cycles_out is not None:
            cycles_out.append(cyc)
    nfacets = poset.count(n - 1)
    if nfacets == 0:
        return ValidationReport(False, "empty", None, "no facets")
    seen = [False] * nfacets
    seen[0] = True
    stack = [0]
    while stack:
        p = stack.pop()
        for g in poset.contains[n - 1][p]:
            for q in up[n - 2][g]:
                if not seen[q]:
                    seen[q] = True
                    stack.append(q)
    if not all(seen):
        missing = seen.index(False)
        return ValidationReport(False, "disconnected", FaceId(n - 1, missing),
                                "facet adjacency graph is disconnected")
    return VALID


def link_cycle(poset: FacePoset, index: int) -> list[int]:
    """Walk the link of (n-3)-face ``index``: ``[g0, p0, g1, p1, ...]``.

    Raises :class:`NotManifoldAtFace` unless the link is one cycle through
    at least three (n-2)-faces.
    """
    n = poset.n
    face = FaceId(n - 3, index)
    up = poset.cofaces
    gs = up[n - 3][index]
    if len(gs) < 3:
        raise NotManifoldAtFace(face, f"link has {len(gs)} (n-2)-faces, need at least 3")
    around: dict[int, list[int]] = {}
    for g in gs:
        facets = up[n - 2][g]
        if len(facets) != 2:
            raise NotManifoldAtFace(face, f"(n-2)-face {g} lies in {len(facets)} facets")
        for p in facets:
            around.setdefault(p, []).append(g)
    for p, pair in around.items():
        if len(pair) != 2:
            raise NotManifoldAtFace(face, f"facet {p} meets the link in {len(pair)} (n-2)-faces")
    g0 = gs[0]
    cycle = []
    g, p = g0, up[n - 2][g0][0]
    while True:
        cycle.append(g)
        cycle.append(p)
        a, b = around[p]
        g = b if a == g else a
        if g == g0:
            break
        f0, f1 = up[n - 2][g]
        p = f1 if f0 == p else f0
        if len(cycle) > 2 * len(gs):
            break
    if len(cycle) != 2 * len(gs):
        raise NotManifoldAtFace(face, "link is not a single cycle")
    return cycle


@dataclass(frozen=True)
class Star:
    """Cyclic alternating sequence ``(g0, p0, g1, p1, ...)`` around ``center``."""

    center: FaceId
    cycle: tuple[FaceId, ...]

    @property
    def ridges(self) -> tuple[FaceId, ...]:
        return self.cycle[0::2]

    @property
    def facets(self) -> tuple[FaceId, ...]:
        return self.cycle[1::2]


def extract_star(surface: PLSurface | FacePoset, center: FaceId | int) -> Star:
    poset = surface.poset if isinstance(surface, PLSurface) else surface
    n = poset.n
    index = center.index if isinstance(center, FaceId) else center
    cyc = link_cycle(poset, index)
    ids = tuple(FaceId(n - 2 if i % 2 == 0 else n - 1, x) for i, x in enumerate(cyc))
    return Star(FaceId(n - 3, index), ids)


def validate_realization(surface: PLSurface) -> ValidationReport:
    """Affine dimension of every face (vertex mode) / nonzero normals (facet mode)."""
    n = surface.n
    poset = surface.poset
    if surface.facet_mode:
        return _validate_equations(surface)
    coords = surface.int_coords
    for d in sorted(poset.vertex_lists):
        if d == 0:
            continue
        for i, vl in enumerate(poset.vertex_lists[d]):
            if len(vl) < d + 1 or _face_rank(coords, vl) != d:
                reason = "nonplanar_face" if len(vl) > d + 1 else "degenerate_face"
                return ValidationReport(False, reason, FaceId(d, i),
                                        f"{d}-face does not span a {d}-flat")
    if len(coords) and any(len(c) != n for c in coords):
        return ValidationReport(False, "bad_coordinates", None, "coordinate length mismatch")
    return VALID


def _face_rank(coords, vl) -> int:
    if len(vl) == 3 and len(coords[vl[0]]) == 3:
        a, b, c = (coords[v] for v in vl)
        return 2 if any(cross(sub(b, a), sub(c, a))) else affine_rank_int([a, b, c])
    if len(vl) == 2:
        return 1 if coords[vl[0]] != coords[vl[1]] else 0
    return affine_rank_int([coords[v] for v in vl])


def _validate_equations(surface: PLSurface) -> ValidationReport:
    n = surface.n
    poset = surface.poset
    eqs = surface.facet_equations
    if len(eqs) != poset.count(n - 1):
        return ValidationReport(False, "missing_equations", None,
                                "facet equation count differs from facet count")
    for i, (normal, _) in enumerate(eqs):
        if len(normal) != n or not any(normal):
            return ValidationReport(False, "zero_normal", FaceId(n - 1, i), "facet normal is zero")
    if surface.vertices is not None and n - 1 in poset.vertex_lists:
        for i, vl in enumerate(poset.vertex_lists[n - 1]):
            normal, offset = eqs[i]
            if any(dot(normal, surface.vertices[v]) != offset for v in vl):
                return ValidationReport(False, "inconsistent_equations", FaceId(n - 1, i),
                                        "facet vertices off their hyperplane")
    flat = []
    ieqs = surface.int_equations
    for g, (p, q) in enumerate(poset.cofaces[n - 2]):
        if _same_hyperplane(ieqs[p], ieqs[q]):
            flat.append(FaceId(n - 2, g))
    return ValidationReport(True, flat_faces=tuple(flat))


def _same_hyperplane(e1, e2) -> bool:
    (a, b), (c, d) = e1, e2
    row1 = list(a) + [b]
    row2 = list(c) + [d]
    i = next(j for j, x in enumerate(row1) if x)
    return all(x * row2[i] == y * row1[i] for x, y in zip(row1, row2))


# ---------------------------------------------------------------------------
# construction helpers


def build_poset(
    n: int,
    num_vertices: int,
    vertex_lists: dict[int, Sequence[Sequence[int]]],
    contains: dict[int, Sequence[Sequence[int]]] | None = None,
) -> FacePoset:
    """Poset from vertex lists; containment is derived by vertex-set inclusion
    between consecutive dimensions when not given."""
    vl = {d: tuple(tuple(f) for f in faces) for d, faces in vertex_lists.items() if d != 0}
    cont = {d: tuple(tuple(c) for c in v) for d, v in (contains or {}).items()}
    for d in (n - 2, n - 1):
        if d not in cont:
            cont[d] = _derive_contains(vl, d, num_vertices)
    return FacePoset(n, num_vertices, vl, cont)


def _derive_contains(vl, d: int, num_vertices: int) -> tuple[tuple[int, ...], ...]:
    lower = vl.get(d - 1) if d - 1 != 0 else tuple((v,) for v in range(num_vertices))
    by_vertex: dict[int, list[int]] = {}
    for j, f in enumerate(lower):
        by_vertex.setdefault(min(f), []).append(j)
    lower_sets = [frozenset(f) for f in lower]
    out = []
    for face in vl[d]:
        fs = frozenset(face)
        subs = sorted(j for v in face for j in by_vertex.get(v, ()) if lower_sets[j] <= fs)
        out.append(tuple(subs))
    return tuple(out)


def surface_from_polygons(vertices: Sequence[Sequence], polygons: Sequence[Sequence[int]]) -> PLSurface:
    """3-dimensional surface from vertex coordinates and cyclic polygon lists.

    Edges are the consecutive vertex pairs of the polygons, numbered in order
    of first appearance.
    """
    verts = tuple(tuple(Fraction(c) for c in v) for v in vertices)
    edge_index: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    facet_edges = []
    for poly in polygons:
        ids = []
        k = len(poly)
        for i in range(k):
            a, b = poly[i], poly[(i + 1) % k]
            key = (a, b) if a < b else (b, a)
            e = edge_index.get(key)
            if e is None:
                e = edge_index[key] = len(edges)
                edges.append(key)
            ids.append(e)
        facet_edges.append(tuple(ids))
    poset = FacePoset(
        3,
        len(verts),
        {1: tuple(edges), 2: tuple(tuple(p) for p in polygons)},
        {1: tuple(edges), 2: tuple(facet_edges)},
    )
    return PLSurface(poset, verts)


def facet_polygon(surface: PLSurface, facet: int) -> list[int]:
    """Cyclic vertex order of a facet of a 3-dimensional surface, from its edges."""
    poset = surface.poset
    edges = [poset.vertex_lists[1][e] for e in poset.contains[2][facet]]
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = edges[0][0]
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [x for x in adj[cur] if x != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        order.append(cur)
        if len(order) > len(edges):
            break
    return order
