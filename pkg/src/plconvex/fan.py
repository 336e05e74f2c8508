"""Convexity of a cyclically ordered fan of rays in 3-space (C-check).

A fan is a cyclic list of rays ``v_0 .. v_{k-1}``; consecutive rays bound the
2-cone that is the image of one facet.  The fan is convex when its union is
the boundary of a convex cone (or a plane, for a locally flat star).

The main route cuts the fan with a plane ``w.x = 1`` that every ray crosses
and tests the resulting planar polygon for convexity with winding number 1.
All predicates go through a :class:`~plconvex.exact.SignContext`, so the same
code runs exactly on integers/fractions or tolerantly on floats.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exact import SignContext, cross, dot, primitive
from .lp import seidel_lp


class FanStatus(str, Enum):
    CONVEX = "Convex"
    NOT_CONVEX = "NotConvex"
    INVALID = "Invalid"


class FanReason(str, Enum):
    NONE = "None"
    NO_SUPPORTING_HALFSPACE = "NoSupportingHalfspace"
    SIGN_FLIP = "SignFlip"
    WINDING_EXCEEDS_ONE = "WindingExceedsOne"
    COPLANAR_FOLD = "CoplanarFold"
    DEGENERATE_RAYS = "DegenerateRays"


@dataclass(frozen=True)
class FanVerdict:
    status: FanStatus
    reason: FanReason = FanReason.NONE
    witness_index: int | None = None

    def __post_init__(self):
        if (self.witness_index is None) != (self.status is FanStatus.CONVEX):
            raise ValueError("witness_index must be set exactly for non-convex verdicts")

    @property
    def convex(self) -> bool:
        return self.status is FanStatus.CONVEX


CONVEX = FanVerdict(FanStatus.CONVEX)


def _not_convex(reason: FanReason, index: int) -> FanVerdict:
    return FanVerdict(FanStatus.NOT_CONVEX, reason, index)


def _invalid(index: int) -> FanVerdict:
    return FanVerdict(FanStatus.INVALID, FanReason.DEGENERATE_RAYS, index)


def _ctx(ctx: SignContext | None) -> SignContext:
    return ctx if ctx is not None else SignContext()


# ---------------------------------------------------------------------------
# elementary predicates


def _parallel(ctx: SignContext, a, b) -> bool:
    """True when ``a`` and ``b`` are linearly dependent."""
    c = cross(a, b)
    if ctx.exact:
        ctx.note("parallel", 2)
        return c == (0, 0, 0)
    kap = (
        abs(a[1] * b[2]) + abs(a[2] * b[1]),
        abs(a[2] * b[0]) + abs(a[0] * b[2]),
        abs(a[0] * b[1]) + abs(a[1] * b[0]),
    )
    return all(ctx.sign("parallel", 2, ci, ki) == 0 for ci, ki in zip(c, kap))


def _dot_sign(ctx: SignContext, kind: str, degree: int, a, b) -> int:
    value = dot(a, b)
    kappa = 1.0 if ctx.exact else sum(abs(x * y) for x, y in zip(a, b))
    return ctx.sign(kind, degree, value, kappa)


def _lex_sign(ctx: SignContext, kind: str, degree: int, vec, kappas=(1.0, 1.0)) -> int:
    s = ctx.sign(kind, degree, vec[0], kappas[0])
    if s == 0:
        s = ctx.sign(kind, degree, vec[1], kappas[1])
    return s


def degenerate_ray_index(rays: Sequence, ctx: SignContext | None = None) -> int | None:
    """Index of the first zero ray or first ray parallel to its successor."""
    ctx = _ctx(ctx)
    k = len(rays)
    for i, v in enumerate(rays):
        if ctx.exact:
            if not any(v):
                return i
        elif max(abs(x) for x in v) == 0:
            return i
    for i in range(k):
        if _parallel(ctx, rays[i], rays[(i + 1) % k]):
            return i
    return None


def _coplanar(rays: Sequence, ctx: SignContext) -> bool:
    v0, v1 = rays[0], rays[1]
    return all(ctx.det3("orient", v0, v1, v) == 0 for v in rays[2:])


# ---------------------------------------------------------------------------
# reference plane


def _unit_sum(vectors) -> list[float]:
    total = [0.0, 0.0, 0.0]
    for v in vectors:
        fv = [float(x) for x in v]
        norm = math.sqrt(fv[0] * fv[0] + fv[1] * fv[1] + fv[2] * fv[2])
        if norm > 0:
            for j in range(3):
                total[j] += fv[j] / norm
    return total


def _proposals(rays: Sequence):
    yield _unit_sum(rays)
    # inward normals of a convex fan all lie in the dual cone
    k = len(rays)
    normals = _unit_sum(cross(rays[i], rays[(i + 1) % k]) for i in range(k))
    yield normals
    yield [-x for x in normals]


def positive_functional(rays: Sequence, seed: int = 0, ctx: SignContext | None = None):
    """A vector ``w`` with ``w . v > 0`` for every ray, or ``None``.

    Float proposals (the sum of the normalized rays, then the summed unit
    normals of the 2-cones) are rounded to integer vectors and verified
    exactly.  If all fail, an exact randomized LP decides feasibility of the
    open half-space.
    """
    ctx = _ctx(ctx)
    for total in _proposals(rays):
        scale = max(abs(t) for t in total)
        if not (scale > 0 and math.isfinite(scale)):
            continue
        if ctx.exact:
            w = tuple(round(t / scale * (1 << 30)) for t in total)
        else:
            w = tuple(total)
        if all(_dot_sign(ctx, "side", 1, w, v) > 0 for v in rays):
            return w
    return _lp_functional(rays, seed, ctx)


def _lp_functional(rays: Sequence, seed: int, ctx: SignContext):
    # maximize t subject to t <= w.v_i, |w_j| <= 1, |t| <= 1
    cons = [((-Fraction(v[0]), -Fraction(v[1]), -Fraction(v[2]), 1), 0) for v in rays]
    ctx.note("lp_feasibility", 4)
    sol = seidel_lp(cons, (0, 0, 0, 1), bound=1, rng=random.Random(seed))
    if sol is None or sol[3] <= 0:
        return None
    w = primitive(sol[:3])
    if ctx.exact:
        return w
    wf = tuple(float(x) for x in w)
    if all(_dot_sign(ctx, "side", 1, wf, v) > 0 for v in rays):
        return wf
    return None


def _chart(w) -> tuple[int, int, int]:
    """Index dropped from ``w`` (first nonzero coordinate) and the two kept."""
    k = next(i for i in range(3) if w[i] != 0)
    a, b = (i for i in range(3) if i != k)
    return k, a, b


def project_to_polygon(rays: Sequence, w) -> list[tuple[Fraction, Fraction]]:
    """Intersections ``v / (w . v)`` of the rays with the plane ``w . x = 1``.

    Points are given in the chart that drops the first nonzero coordinate of
    ``w``; the dropped coordinate is determined by the plane equation.
    """
    _, a, b = _chart(w)
    pts = []
    for v in rays:
        W = Fraction(dot(w, v))
        pts.append((Fraction(v[a]) / W, Fraction(v[b]) / W))
    return pts


# ---------------------------------------------------------------------------
# polygon convexity with winding number one


def _edge_cycle_verdict(turns: Sequence[int], lex: Sequence[int]) -> FanVerdict:
    """Shared decision from turn signs and lexicographic edge-direction signs.

    ``turns[i]`` is the turn at corner ``i + 1`` (between edges ``i`` and
    ``i + 1``); ``lex[i]`` is the sign of edge ``i``'s x-component, or of its
    y-component when the x-component vanishes.
    """
    k = len(lex)
    for i, s in enumerate(lex):
        if s == 0:
            return _invalid(i)
    if not any(turns):
        return _invalid(0)
    total = sum(turns)
    orient = (total > 0) - (total < 0) or next(t for t in turns if t)
    for i, t in enumerate(turns):
        if t == -orient:
            return _not_convex(FanReason.SIGN_FLIP, (i + 1) % k)
        if t == 0 and lex[i] != lex[(i + 1) % k]:
            # collinear corner that doubles back
            return _not_convex(FanReason.SIGN_FLIP, (i + 1) % k)
    changes = [i for i in range(k) if lex[i] != lex[(i + 1) % k]]
    if len(changes) != 2:
        where = (changes[2] + 1) % k if len(changes) > 2 else 0
        return _not_convex(FanReason.WINDING_EXCEEDS_ONE, where)
    return CONVEX


def polygon_convex_winding1(points: Sequence, ctx: SignContext | None = None) -> FanVerdict:
    """Is the closed polygon through ``points`` convex and wound exactly once?

    Zero turns are allowed (collinear corners) as long as one turn is strict.
    Winding is read off the number of sign changes of the edge directions'
    x-components, which is 2 per full turn.
    """
    ctx = _ctx(ctx)
    k = len(points)
    edges = [
        (points[(i + 1) % k][0] - points[i][0], points[(i + 1) % k][1] - points[i][1])
        for i in range(k)
    ]
    lex = []
    for i, e in enumerate(edges):
        if ctx.exact:
            lex.append(_lex_sign(ctx, "edge_lex", 2, e))
        else:
            p, q = points[i], points[(i + 1) % k]
            kap = (abs(p[0]) + abs(q[0]), abs(p[1]) + abs(q[1]))
            lex.append(_lex_sign(ctx, "edge_lex", 2, e, kap))
    turns = []
    for i in range(k):
        e, f = edges[i], edges[(i + 1) % k]
        value = e[0] * f[1] - e[1] * f[0]
        kappa = 1.0 if ctx.exact else abs(e[0] * f[1]) + abs(e[1] * f[0])
        turns.append(ctx.sign("orient", 3, value, kappa))
    return _edge_cycle_verdict(turns, lex)


def _homogeneous_polygon_verdict(rays: Sequence, w, ctx: SignContext) -> FanVerdict:
    """:func:`polygon_convex_winding1` on the cut polygon without dividing.

    Edge vectors are scaled by the positive factor ``(w.v_i)(w.v_{i+1})`` and
    the turn at a corner has the sign of ``det(v_i, v_{i+1}, v_{i+2})`` times
    a constant fixed by the chart, so no fractions are formed.
    """
    k = len(rays)
    _, a, b = _chart(w)
    W = [dot(w, v) for v in rays]
    lex = []
    for i in range(k):
        j = (i + 1) % k
        u, v = rays[i], rays[j]
        ex = v[a] * W[i] - u[a] * W[j]
        ey = v[b] * W[i] - u[b] * W[j]
        if ctx.exact:
            lex.append(_lex_sign(ctx, "edge_lex", 2, (ex, ey)))
        else:
            kap = (abs(v[a] * W[i]) + abs(u[a] * W[j]), abs(v[b] * W[i]) + abs(u[b] * W[j]))
            lex.append(_lex_sign(ctx, "edge_lex", 2, (ex, ey), kap))
    turns = [ctx.det3("orient", rays[i], rays[(i + 1) % k], rays[(i + 2) % k]) for i in range(k)]
    return _edge_cycle_verdict(turns, lex)


# ---------------------------------------------------------------------------
# flat stars and wedges


def coplanar_check(rays: Sequence, ctx: SignContext | None = None) -> FanVerdict:
    """Verdict for a fan whose rays all lie in one plane through the apex.

    Convex exactly when the rays sweep the plane once, monotonically, with
    every consecutive angular gap strictly below pi.
    """
    ctx = _ctx(ctx)
    k = len(rays)
    normal = None
    for i in range(k):
        c = cross(rays[i], rays[(i + 1) % k])
        if any(c):
            normal = c
            break
    if normal is None:
        return _invalid(0)
    drop = next(i for i in range(3) if normal[i] != 0)
    keep = [i for i in range(3) if i != drop]
    flat = [(v[keep[0]], v[keep[1]]) for v in rays]
    turns = []
    for i in range(k):
        p, q = flat[i], flat[(i + 1) % k]
        value = p[0] * q[1] - p[1] * q[0]
        kappa = 1.0 if ctx.exact else abs(p[0] * q[1]) + abs(p[1] * q[0])
        t = ctx.sign("flat_turn", 2, value, kappa)
        if t == 0:
            return _not_convex(FanReason.COPLANAR_FOLD, (i + 1) % k)
        turns.append(t)
    for i, t in enumerate(turns):
        if t != turns[0]:
            return _not_convex(FanReason.COPLANAR_FOLD, (i + 1) % k)
    lex = [_lex_sign(ctx, "flat_lex", 1, p) for p in flat]
    changes = [i for i in range(k) if lex[i] != lex[(i + 1) % k]]
    if len(changes) != 2:
        return _not_convex(FanReason.COPLANAR_FOLD, (changes[2] + 1) % k if len(changes) > 2 else 0)
    return CONVEX


def _wedge_check(rays: Sequence, ctx: SignContext) -> FanVerdict:
    """Convex fans with no supporting open half-space: two half-planes on a line.

    Such a fan bounds a dihedral wedge.  It contains exactly one pair of
    opposite rays ``u, -u`` and each of the two chains between them sweeps a
    half-plane bounded by ``span(u)``; the two half-planes must differ.
    """
    k = len(rays)
    opposite = []
    for i in range(k):
        for j in range(i + 1, k):
            if _parallel(ctx, rays[i], rays[j]):
                if _dot_sign(ctx, "side", 2, rays[i], rays[j]) > 0:
                    return _not_convex(FanReason.NO_SUPPORTING_HALFSPACE, j)
                opposite.append((i, j))
    if len(opposite) != 1:
        return _not_convex(FanReason.NO_SUPPORTING_HALFSPACE, opposite[1][1] if opposite else 0)
    i, j = opposite[0]
    chain_a = [rays[s % k] for s in range(i, j + 1)]
    chain_b = [rays[s % k] for s in range(j, i + k + 1)]
    u, a0, b0 = rays[i], chain_a[1], chain_b[1]
    if ctx.det3("orient", u, a0, b0) == 0:
        return _not_convex(FanReason.NO_SUPPORTING_HALFSPACE, (i + 1) % k)
    if not _half_plane_chain(chain_a, b0, ctx):
        return _not_convex(FanReason.NO_SUPPORTING_HALFSPACE, i)
    if not _half_plane_chain(chain_b, a0, ctx):
        return _not_convex(FanReason.NO_SUPPORTING_HALFSPACE, j)
    return CONVEX


def _half_plane_chain(chain: Sequence, ref, ctx: SignContext) -> bool:
    """Chain from ``u`` to ``-u`` sweeping one half-plane monotonically.

    ``ref`` is a ray off the chain's plane used to orient it.
    """
    u, x0 = chain[0], chain[1]
    side = ctx.det3("orient", u, x0, ref)
    for x in chain[2:-1]:
        if ctx.det3("orient", u, x0, x) != 0:
            return False
        if ctx.det3("orient", u, x, ref) != side:
            return False
    for x, y in zip(chain, chain[1:]):
        if ctx.det3("orient", x, y, ref) != side:
            return False
    return True


# ---------------------------------------------------------------------------


def c_check(rays: Sequence, seed: int = 0, ctx: SignContext | None = None) -> FanVerdict:
    """Decide whether the cyclic fan ``rays`` bounds a convex cone.

    Degenerate input (zero ray, consecutive rays equal or opposite in
    direction, fewer than three rays) is Invalid.
    """
    ctx = _ctx(ctx)
    rays = [tuple(r) for r in rays]
    if len(rays) < 3:
        return _invalid(0)
    bad = degenerate_ray_index(rays, ctx)
    if bad is not None:
        return _invalid(bad)
    if _coplanar(rays, ctx):
        return coplanar_check(rays, ctx)
    w = positive_functional(rays, seed, ctx)
    if w is None:
        return _wedge_check(rays, ctx)
    return _homogeneous_polygon_verdict(rays, w, ctx)


def c_check_float(rays: Sequence, eps: float, seed: int = 0,
                  ctx: SignContext | None = None) -> tuple[FanVerdict, bool]:
    """Tolerant C-check; returns the verdict and whether it is uncertain.

    The verdict is uncertain when some nonzero value was rounded to zero and
    the untolerated float evaluation reaches a different status.
    """
    frays = [tuple(float(x) for x in r) for r in rays]
    if ctx is None:
        ctx = SignContext(eps=eps)
    verdict = c_check(frays, seed, ctx)
    if ctx.tolerant_hits == 0:
        return verdict, False
    raw = c_check(frays, seed, ctx.strict())
    return verdict, raw.status is not verdict.status
