"""Exact rational linear algebra and sign predicates.

Everything here works on Python ints and ``fractions.Fraction`` so that the
sign of every predicate is decided exactly.  The float-tolerant variant of the
sign test lives in :class:`SignContext` so the same predicate code serves both
verification modes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Sequence

Vec = tuple  # tuple of int / Fraction / float

_RATIONAL_RE = re.compile(
    r"""^[+-]?(
        \d+/\d+                              # p/q
        |(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?    # integer or decimal, optional exponent
    )$""",
    re.VERBOSE,
)


class RationalSyntaxError(ValueError):
    pass


def parse_rational(text: str | int | float | Fraction) -> Fraction:
    """Convert a rational literal to an exact ``Fraction``.

    Strings follow the grammar ``[sign] digits ["/" digits | "." digits]``
    (an exponent suffix is tolerated for decimals).  Binary floats are
    expanded exactly, ints are taken as is.
    """
    if isinstance(text, bool):
        raise RationalSyntaxError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise RationalSyntaxError(f"not finite: {text!r}")
        return Fraction(text)
    s = str(text).strip()
    if not _RATIONAL_RE.match(s):
        raise RationalSyntaxError(f"malformed rational literal: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise RationalSyntaxError(f"zero denominator: {text!r}") from None


def format_rational(x: Fraction | int) -> str:
    """Inverse of :func:`parse_rational`; finite decimals are written as decimals."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    q = x.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    assert scaled.denominator == 1
    num = abs(scaled.numerator)
    sign = "-" if x < 0 else ""
    whole, frac = divmod(num, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


# ---------------------------------------------------------------------------
# vector helpers


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def dot(a: Vec, b: Vec):
    return sum(x * y for x, y in zip(a, b))


def cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def sign(x) -> int:
    return (x > 0) - (x < 0)


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = [Fraction(c) for c in vec]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    return tuple(ints)


def det3_value(a: Vec, b: Vec, c: Vec):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def det3_kappa(a: Vec, b: Vec, c: Vec) -> float:
    """Sum of absolute values of the six terms of the 3x3 determinant."""
    return (
        abs(a[0] * b[1] * c[2]) + abs(a[0] * b[2] * c[1])
        + abs(a[1] * b[0] * c[2]) + abs(a[1] * b[2] * c[0])
        + abs(a[2] * b[0] * c[1]) + abs(a[2] * b[1] * c[0])
    )


# ---------------------------------------------------------------------------
# predicate audit and sign evaluation


class PredicateAudit:
    """Per-kind invocation counters with the static degree bound of each kind.

    Not thread-safe by design: every task owns one and they are merged.
    """

    def __init__(self) -> None:
        self.counters: dict[str, list[int]] = {}

    def record(self, kind: str, degree: int, count: int = 1) -> None:
        entry = self.counters.get(kind)
        if entry is None:
            self.counters[kind] = [count, degree]
        else:
            entry[0] += count
            if degree > entry[1]:
                entry[1] = degree

    def merge(self, other: "PredicateAudit") -> None:
        for kind, (count, degree) in other.counters.items():
            self.record(kind, degree, count)

    @property
    def degree_max(self) -> int:
        return max((d for _, d in self.counters.values()), default=0)

    def as_dict(self) -> dict[str, dict[str, int]]:
        return {
            k: {"invocations": c, "degree": d}
            for k, (c, d) in sorted(self.counters.items())
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PredicateAudit) and self.counters == other.counters

    def __repr__(self) -> str:
        return f"PredicateAudit({self.as_dict()})"


def float_sign(x: float, eps: float, kappa: float = 1.0) -> int:
    """Tolerant sign: values within ``eps * kappa`` of zero count as zero."""
    tol = eps * kappa
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


@dataclass
class SignContext:
    """Evaluates predicate signs exactly (``eps is None``) or with tolerance.

    ``degree_offset`` lifts degrees measured in ray coordinates to degrees in
    the input coordinates; it is zero when the quotient is a plain coordinate
    selection.  ``tolerant_hits`` counts nonzero values rounded to zero.
    """

    eps: float | None = None
    audit: PredicateAudit | None = None
    degree_offset: int = 0
    degree_scale: int = 1
    tolerant_hits: int = 0

    @property
    def exact(self) -> bool:
        return self.eps is None

    def note(self, kind: str, degree: int) -> None:
        if self.audit is not None:
            self.audit.record(kind, degree * self.degree_scale + self.degree_offset)

    def sign(self, kind: str, degree: int, value, kappa: float = 1.0) -> int:
        self.note(kind, degree)
        if self.eps is None:
            return (value > 0) - (value < 0)
        s = float_sign(value, self.eps, kappa)
        if s == 0 and value != 0:
            self.tolerant_hits += 1
        return s

    def det3(self, kind: str, a: Vec, b: Vec, c: Vec) -> int:
        value = det3_value(a, b, c)
        kappa = 1.0 if self.eps is None else det3_kappa(a, b, c)
        return self.sign(kind, 3, value, kappa)

    def strict(self) -> "SignContext":
        """Same context but with zero tolerance (plain float signs)."""
        return SignContext(eps=0.0, audit=None, degree_offset=self.degree_offset,
                           degree_scale=self.degree_scale)


def det3(a: Vec, b: Vec, c: Vec, audit: PredicateAudit | None = None) -> int:
    """Exact sign of the 3x3 determinant with rows ``a, b, c``."""
    if audit is not None:
        audit.record("det3", 3)
    return sign(det3_value(a, b, c))


# ---------------------------------------------------------------------------
# rank and affine hulls


def row_echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon basis (nonzero rows only) of the span of ``rows``."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    basis: list[list[Fraction]] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return [row for row in mat[:r]]


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    m, n = len(mat), len(mat[0])
    rank = 0
    prev = 1
    for col in range(n):
        pivot = next((i for i in range(rank, m) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, m):
            mi = mat[i][col]
            row_r = mat[rank]
            mat[i] = [(p * x - mi * y) // prev for x, y in zip(mat[i], row_r)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def affine_rank_int(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return int_rank([sub(p, p0) for p in points[1:]])


def affine_hull(points: Sequence[Sequence]) -> tuple[int, list[tuple[Fraction, ...]]]:
    """Exact affine dimension of ``points`` and a basis of its direction space."""
    if not points:
        raise ValueError("affine_hull needs at least one point")
    p0 = points[0]
    basis = row_echelon([sub(p, p0) for p in points[1:]])
    return len(basis), [tuple(b) for b in basis]


def null_space(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Rational basis of ``{x : r.x = 0 for r in rows}``."""
    rref = row_echelon(rows) if rows else []
    pivots = []
    for row in rref:
        pivots.append(next(i for i, x in enumerate(row) if x != 0))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_particular(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Some solution of ``rows x = rhs`` (free variables set to zero), or None."""
    ncols = len(rows[0])
    aug = row_echelon([list(r) + [b] for r, b in zip(rows, rhs)])
    x = [Fraction(0)] * ncols
    for row in aug:
        p = next(i for i, v in enumerate(row) if v != 0)
        if p == ncols:
            return None
        x[p] = row[ncols]
    return tuple(x)


# ---------------------------------------------------------------------------
# quotient maps


class QuotientMode(str, Enum):
    COORDINATE_SUBSPACE = "CoordinateSubspace"
    GENERAL_SOLVE = "GeneralSolve"


class DegenerateFace(ValueError):
    """The flat of an (n-3)-face does not have dimension n-3."""


@dataclass(frozen=True)
class QuotientMap:
    """Linear projection of R^n along lin(F) onto a complementary 3-space.

    ``coords`` are the three coordinate indices of the chosen complement in
    CoordinateSubspace mode.  ``axis_aligned`` is true when the projection is
    a plain coordinate selection (no elimination terms).
    """

    center_point: tuple[Fraction, ...]
    direction_basis: tuple[tuple[Fraction, ...], ...]
    image_frame: tuple[tuple[Fraction, ...], ...]
    mode: QuotientMode
    coords: tuple[int, int, int] | None = None
    _solver: tuple = field(default=(), repr=False, compare=False)

    @property
    def ambient_dim(self) -> int:
        return len(self.center_point)

    @property
    def axis_aligned(self) -> bool:
        if self.mode is not QuotientMode.COORDINATE_SUBSPACE:
            return False
        return all(d[c] == 0 for d in self.direction_basis for c in self.coords)


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(j == i)) for j in range(n))


def make_quotient_map(center, direction_basis, force_general: bool = False) -> QuotientMap:
    """Build the projection along ``span(direction_basis)`` anchored at ``center``.

    Coordinate 3-subspaces are tried in lexicographic order; the first one
    complementary to the direction space wins.  Otherwise (or when forced)
    the complement is the orthogonal complement of the direction space.
    """
    n = len(center)
    center = tuple(Fraction(c) for c in center)
    dirs = tuple(tuple(Fraction(c) for c in d) for d in direction_basis)
    m = len(dirs)
    if m != n - 3 or (m and len(row_echelon(dirs)) != m):
        raise DegenerateFace(f"direction space has rank {len(row_echelon(dirs)) if m else 0}, expected {n - 3}")
    if not force_general:
        for S in combinations(range(n), 3):
            T = [j for j in range(n) if j not in S]
            # S is complementary iff the T-minor of the direction vectors is invertible
            minor = [[d[t] for t in T] for d in dirs]
            if m == 0 or len(row_echelon(minor)) == m:
                inv = _invert(minor) if m else []
                frame = tuple(_unit(n, s) for s in S)
                return QuotientMap(center, dirs, frame, QuotientMode.COORDINATE_SUBSPACE,
                                   coords=tuple(S), _solver=(tuple(T), inv))
    frame = tuple(null_space(dirs, n)) if m else tuple(_unit(n, i) for i in range(3))
    gram = [[dot(f, g) for g in frame] for f in frame]
    return QuotientMap(center, dirs, frame, QuotientMode.GENERAL_SOLVE,
                       _solver=(_invert(gram),))


def _invert(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    k = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(k)]
           for i, row in enumerate(mat)]
    rref = row_echelon(aug)
    if len(rref) != k or any(rref[i][i] != 1 for i in range(k)):
        raise ZeroDivisionError("singular matrix")
    return [row[k:] for row in rref]


def quotient_project(qmap: QuotientMap, p: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """Coordinates of ``p - center`` modulo lin(F), in ``qmap.image_frame``."""
    v = [Fraction(x) - c for x, c in zip(p, qmap.center_point)]
    return project_vector(qmap, v)


def project_vector(qmap: QuotientMap, v: Sequence) -> tuple:
    """Linear part of :func:`quotient_project` (no translation)."""
    if qmap.mode is QuotientMode.COORDINATE_SUBSPACE:
        T, inv = qmap._solver
        S = qmap.coords
        if not qmap.direction_basis:
            return tuple(v[s] for s in S)
        vt = [v[t] for t in T]
        # v_T = sum_j coef_j d_j[T]  ->  coef = vt . inv  (rows of the minor are d_j[T])
        coef = [sum(vt[i] * inv[i][j] for i in range(len(T))) for j in range(len(T))]
        return tuple(
            v[s] - sum(c * d[s] for c, d in zip(coef, qmap.direction_basis)) for s in S
        )
    (ginv,) = qmap._solver
    rhs = [dot(f, v) for f in qmap.image_frame]
    return tuple(sum(ginv[i][j] * rhs[j] for j in range(3)) for i in range(3))
