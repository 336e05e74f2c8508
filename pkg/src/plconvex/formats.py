"""OFF and PLPOSET readers and writers.

OFF covers 3-dimensional vertex-mode surfaces.  PLPOSET is a JSON layout for
any n >= 3 that lists the faces of dimension 0, n-3, n-2 and n-1 with their
vertex lists and containments, plus optional facet equations.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .complex import (
    DimensionError,
    FacePoset,
    MissingLinkError,
    ParseError,
    PLSurface,
    SurfaceError,
    _derive_contains,
    facet_polygon,
    surface_from_polygons,
)
from .exact import RationalSyntaxError, format_rational, parse_rational

FORMATS = ("off", "plposet")


class FormatError(SurfaceError):
    """The surface cannot be written in the requested format."""


def _text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return data


def _rational(token: Any) -> Fraction:
    try:
        return parse_rational(token)
    except RationalSyntaxError as exc:
        raise ParseError(str(exc)) from None


def detect_format(path: str | None, data: bytes | str) -> str:
    """Guess the format from the file extension, then from the content."""
    if path:
        ext = os.path.splitext(path)[1].lower()
        if ext == ".off":
            return "off"
        if ext in (".json", ".plposet"):
            return "plposet"
    head = _text(data[:256] if isinstance(data, bytes) else data[:256]).lstrip()
    if head.startswith("{"):
        return "plposet"
    if head.startswith("OFF"):
        return "off"
    raise ParseError("cannot detect input format")


def parse_surface(data: bytes | str, format: str = "auto") -> PLSurface:
    fmt = format.lower()
    if fmt == "auto":
        fmt = detect_format(None, data)
    if fmt == "off":
        return parse_off(data)
    if fmt == "plposet":
        return parse_plposet(data)
    raise ValueError(f"unknown format {format!r}")


def emit_surface(surface: PLSurface, format: str) -> bytes:
    fmt = format.lower()
    if fmt == "off":
        return emit_off(surface)
    if fmt == "plposet":
        return emit_plposet(surface)
    raise ValueError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# OFF


def _off_tokens(text: str) -> list[list[str]]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            lines.append(line)
    return lines


def parse_off(data: bytes | str) -> PLSurface:
    lines = _off_tokens(_text(data))
    if not lines or lines[0][0] != "OFF":
        raise ParseError("missing OFF header")
    header = lines[0][1:]
    rest = lines[1:]
    if not header:
        if not rest:
            raise ParseError("missing counts line")
        header, rest = rest[0], rest[1:]
    if len(header) < 2:
        raise ParseError("counts line needs at least V and F")
    try:
        nv, nf = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"bad counts line: {' '.join(header)}") from None
    if nv < 0 or nf < 0:
        raise ParseError("negative counts")
    if len(rest) < nv + nf:
        raise ParseError(f"truncated OFF: expected {nv + nf} records, found {len(rest)}")
    verts = []
    for i in range(nv):
        toks = rest[i]
        if len(toks) < 3:
            raise ParseError(f"vertex {i} has fewer than 3 coordinates")
        if len(toks) > 3:
            raise DimensionError(f"vertex {i} has {len(toks)} coordinates; OFF input is 3-dimensional")
        verts.append(tuple(_rational(t) for t in toks))
    polys = []
    for j in range(nf):
        toks = rest[nv + j]
        try:
            k = int(toks[0])
            ids = [int(t) for t in toks[1 : 1 + k]]
        except ValueError:
            raise ParseError(f"face {j}: non-integer index") from None
        if len(ids) != k:
            raise ParseError(f"face {j}: expected {k} indices")
        if k < 3:
            raise ParseError(f"face {j} has fewer than 3 vertices")
        for v in ids:
            if not 0 <= v < nv:
                raise MissingLinkError(f"face {j} references unknown vertex {v}")
        polys.append(ids)
    return surface_from_polygons(verts, polys)


def emit_off(surface: PLSurface) -> bytes:
    if surface.n != 3:
        raise FormatError(f"OFF holds 3-dimensional surfaces only, got n={surface.n}")
    if surface.vertices is None:
        raise FormatError("OFF needs vertex coordinates")
    poset = surface.poset
    nf = poset.count(2)
    out = ["OFF", f"{poset.num_vertices} {nf} {poset.count(1)}"]
    for v in surface.vertices:
        out.append(" ".join(format_rational(c) for c in v))
    for p in range(nf):
        poly = facet_polygon(surface, p)
        out.append(" ".join(str(x) for x in [len(poly), *poly]))
    return ("\n".join(out) + "\n").encode("ascii")


# ---------------------------------------------------------------------------
# PLPOSET


def _records(faces: dict, key: str) -> list[dict] | None:
    recs = faces.get(key)
    if recs is None:
        return None
    if not isinstance(recs, list):
        raise ParseError(f"faces[{key!r}] must be a list")
    for r in recs:
        if not isinstance(r, dict) or not isinstance(r.get("id"), int):
            raise ParseError(f"faces[{key!r}]: records need an integer id")
    return sorted(recs, key=lambda r: r["id"])


def _int_list(rec: dict, field: str, where: str) -> tuple[int, ...] | None:
    vals = rec.get(field)
    if vals is None:
        return None
    if not isinstance(vals, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in vals):
        raise ParseError(f"{where}: {field!r} must be a list of integers")
    return tuple(vals)


def parse_plposet(data: bytes | str) -> PLSurface:
    try:
        doc = json.loads(_text(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    n = doc.get("dimension")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("missing integer 'dimension'")
    if n < 3:
        raise DimensionError(f"dimension must be at least 3, got {n}")
    faces = doc.get("faces")
    if not isinstance(faces, dict):
        raise ParseError("missing 'faces' object")

    verts = None
    if doc.get("vertices") is not None:
        if not isinstance(doc["vertices"], list):
            raise ParseError("'vertices' must be a list")
        verts = []
        for i, row in enumerate(doc["vertices"]):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"vertex {i} must have {n} coordinates")
            verts.append(tuple(_rational(c) for c in row))
        verts = tuple(verts)

    dims = sorted({0, n - 3, n - 2, n - 1})
    recs = {d: _records(faces, str(d)) for d in dims}
    for d in (n - 2, n - 1):
        if not recs[d]:
            raise ParseError(f"no faces of dimension {d}")
    if verts is not None:
        nv = len(verts)
    elif recs[0] is not None:
        nv = len(recs[0])
    else:
        nv = 0
    # face ids are renumbered densely in id order
    remap = {d: {r["id"]: i for i, r in enumerate(recs[d])} for d in dims if recs[d] is not None}
    for d, m in remap.items():
        if len(m) != len(recs[d]):
            raise ParseError(f"duplicate ids among {d}-faces")
    if 0 not in remap:
        remap[0] = {i: i for i in range(nv)}

    vertex_lists: dict[int, tuple] = {}
    for d in dims:
        if d == 0 or recs[d] is None:
            continue
        lists = [_int_list(r, "vertices", f"{d}-face {r['id']}") for r in recs[d]]
        if all(v is None for v in lists):
            continue
        if any(v is None for v in lists):
            raise ParseError(f"vertex lists must be given for all {d}-faces or none")
        out = []
        for r, vl in zip(recs[d], lists):
            mapped = []
            for v in vl:
                if v not in remap[0]:
                    raise MissingLinkError(f"{d}-face {r['id']} references unknown vertex {v}")
                mapped.append(remap[0][v])
            out.append(tuple(mapped))
        vertex_lists[d] = tuple(out)

    contains: dict[int, tuple] = {}
    for d in (n - 2, n - 1):
        lists = [_int_list(r, "contains", f"{d}-face {r['id']}") for r in recs[d]]
        if all(c is None for c in lists):
            if d not in vertex_lists or (d - 1 != 0 and d - 1 not in vertex_lists):
                raise ParseError(f"{d}-faces need 'contains' or vertex lists")
            contains[d] = _derive_contains(vertex_lists, d, nv)
            continue
        if any(c is None for c in lists):
            raise ParseError(f"'contains' must be given for all {d}-faces or none")
        if d - 1 not in remap:
            raise ParseError(f"{d}-faces reference {d - 1}-faces that are not listed")
        lower = remap[d - 1]
        out = []
        for r, cl in zip(recs[d], lists):
            mapped = []
            for c in cl:
                if c not in lower:
                    raise MissingLinkError(f"{d}-face {r['id']} contains unknown {d - 1}-face {c}")
                mapped.append(lower[c])
            out.append(tuple(mapped))
        contains[d] = tuple(out)

    num_faces = {d: len(recs[d]) for d in dims if recs[d] is not None and d != 0}
    num_faces[0] = nv
    poset = FacePoset(n, nv, vertex_lists, contains, num_faces)

    equations = None
    if doc.get("facet_equations") is not None:
        equations = _parse_equations(doc["facet_equations"], n, remap[n - 1])
    if verts is None and equations is None:
        raise ParseError("need 'vertices' or 'facet_equations'")
    return PLSurface(poset, verts, equations)


def _parse_equations(entries: Any, n: int, facet_ids: dict[int, int]):
    if not isinstance(entries, list):
        raise ParseError("'facet_equations' must be a list")
    table: dict[int, tuple] = {}
    for e in entries:
        if not isinstance(e, dict) or not isinstance(e.get("id"), int):
            raise ParseError("facet equations need an integer id")
        if e["id"] not in facet_ids:
            raise MissingLinkError(f"equation for unknown facet {e['id']}")
        normal = e.get("normal")
        if not isinstance(normal, list) or len(normal) != n:
            raise ParseError(f"facet {e['id']}: normal must have {n} entries")
        if "offset" not in e:
            raise ParseError(f"facet {e['id']}: missing offset")
        table[facet_ids[e["id"]]] = (tuple(_rational(c) for c in normal), _rational(e["offset"]))
    if len(table) != len(facet_ids):
        raise ParseError("every facet needs an equation")
    return tuple(table[i] for i in range(len(facet_ids)))


def plposet_document(surface: PLSurface) -> dict:
    """The JSON object :func:`emit_plposet` serializes."""
    poset = surface.poset
    n = surface.n
    doc: dict[str, Any] = {"dimension": n}
    if surface.vertices is not None:
        doc["vertices"] = [[format_rational(c) for c in v] for v in surface.vertices]
    faces: dict[str, list] = {}
    for d in sorted({0, n - 3, n - 2, n - 1}):
        recs = []
        for i in range(poset.count(d)):
            rec: dict[str, Any] = {"id": i}
            if d == 0:
                rec["vertices"] = [i]
            elif d in poset.vertex_lists:
                rec["vertices"] = list(poset.vertex_lists[d][i])
            if d in poset.contains and d in (n - 2, n - 1):
                rec["contains"] = list(poset.contains[d][i])
            recs.append(rec)
        faces[str(d)] = recs
    doc["faces"] = faces
    if surface.facet_equations is not None:
        doc["facet_equations"] = [
            {"id": i, "normal": [format_rational(c) for c in normal], "offset": format_rational(off)}
            for i, (normal, off) in enumerate(surface.facet_equations)
        ]
    return doc


def emit_plposet(surface: PLSurface) -> bytes:
    return (json.dumps(plposet_document(surface), separators=(",", ":")) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# comparison up to reindexing


def canonical_form(surface: PLSurface):
    """A value equal for two surfaces iff they agree up to face reindexing.

    Faces are described by their vertex coordinate sets (vertex mode), so
    relabelling vertices or faces does not change the result.
    """
    poset = surface.poset
    if surface.vertices is None:
        raise ValueError("canonical_form needs vertex coordinates")
    coords = surface.vertices
    out = [surface.n, tuple(sorted(coords))]
    for d in sorted(poset.vertex_lists):
        out.append((d, tuple(sorted(tuple(sorted(coords[v] for v in vl)) for vl in poset.vertex_lists[d]))))
    if surface.facet_equations is not None:
        facets = poset.vertex_lists.get(surface.n - 1)
        eq = []
        for i, (normal, off) in enumerate(surface.facet_equations):
            key = tuple(sorted(coords[v] for v in facets[i])) if facets else i
            eq.append((key, _normalized(normal, off)))
        out.append(tuple(sorted(eq)))
    return tuple(out)


def _normalized(normal, off):
    lead = next(c for c in normal if c)
    s = abs(lead)
    return tuple(c / s for c in normal), off / s
