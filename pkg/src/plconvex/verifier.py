"""Global convexity verification: C-check the star of every (n-3)-face.

A closed connected PL-surface bounds a convex body exactly when the star of
every (n-3)-face is locally convex, so the verifier runs one independent fan
test per (n-3)-face and stops at the first failure.
"""

from __future__ import annotations

import concurrent.futures as cf
import json
import multiprocessing
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .complex import (
    FaceId,
    NotManifoldAtFace,
    PLSurface,
    link_cycle,
    validate_poset,
    validate_realization,
)
from .exact import DegenerateFace, PredicateAudit, SignContext, float_sign  # noqa: F401
from .fan import FanStatus, FanVerdict, c_check, c_check_float
from .geometry import ZeroRay, star_rays


class Verdict(str, Enum):
    CONVEX = "Convex"
    NOT_CONVEX = "NotConvex"
    INVALID = "Invalid"
    UNCERTAIN = "Uncertain"


EXIT_CODES = {
    Verdict.CONVEX: 0,
    Verdict.NOT_CONVEX: 1,
    Verdict.INVALID: 2,
    Verdict.UNCERTAIN: 3,
}


@dataclass(frozen=True)
class Mode:
    """Exact rational predicates, or float predicates with tolerance ``eps``.

    ``force_general`` skips the coordinate-subspace projection (testing aid).
    """

    kind: str = "exact"
    eps: float = 1e-9
    seed: int = 0
    force_general: bool = False

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.kind!r}")
        if self.kind == "float" and not self.eps >= 0:
            raise ValueError("eps must be nonnegative")

    @property
    def is_float(self) -> bool:
        return self.kind == "float"


EXACT = Mode()


@dataclass
class Report:
    verdict: Verdict
    witness: FaceId | None = None
    fan_verdict: FanVerdict | None = None
    reason: str | None = None
    counts: dict[str, int] = field(default_factory=dict)
    audit: PredicateAudit = field(default_factory=PredicateAudit)
    elapsed: float = 0.0
    processed: int = 0
    uncertain_faces: int = 0
    mode: str = "exact"

    def comparable(self) -> tuple:
        """All fields except elapsed time."""
        return (self.verdict, self.witness, self.fan_verdict, self.reason, self.counts,
                self.audit.as_dict(), self.processed, self.uncertain_faces, self.mode)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness_face": None if self.witness is None else self.witness.index,
            "witness_dim": None if self.witness is None else self.witness.dim,
            "reason": self.reason,
            "counts": dict(self.counts),
            "degree_max": self.audit.degree_max,
            "elapsed_ms": self.elapsed * 1000.0,
            "mode": self.mode,
            "processed_faces": self.processed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# per-face work


@dataclass
class _Outcome:
    status: Verdict
    fan: FanVerdict | None = None
    reason: str | None = None


def _face_seed(seed: int, index: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + index * 0xBF58476D1CE4E5B9) & ((1 << 64) - 1)


def check_face(surface: PLSurface, index: int, mode: Mode, audit: PredicateAudit,
               cycle=None) -> _Outcome:
    """C-check of the star of (n-3)-face ``index``."""
    n = surface.n
    try:
        if cycle is None:
            cycle = link_cycle(surface.poset, index)
        rays, qmap = star_rays(surface, cycle, index, mode.force_general)
    except NotManifoldAtFace:
        return _Outcome(Verdict.INVALID, reason="nonmanifold_link")
    except DegenerateFace:
        return _Outcome(Verdict.INVALID, reason="degenerate_face")
    except ZeroRay:
        return _Outcome(Verdict.INVALID, reason="zero_ray")
    offset, scale = 0, 1
    if surface.facet_mode:
        scale = n - 1
    elif qmap is not None and not qmap.axis_aligned:
        offset = n - 3
    seed = _face_seed(mode.seed, index)
    if mode.is_float:
        ctx = SignContext(eps=mode.eps, audit=audit, degree_offset=offset, degree_scale=scale)
        fv, uncertain = c_check_float(rays, mode.eps, seed, ctx=ctx)
        if uncertain:
            return _Outcome(Verdict.UNCERTAIN, fv, fv.reason.value)
    else:
        ctx = SignContext(audit=audit, degree_offset=offset, degree_scale=scale)
        fv = c_check(rays, seed, ctx)
    if fv.status is FanStatus.CONVEX:
        return _Outcome(Verdict.CONVEX, fv)
    status = Verdict.NOT_CONVEX if fv.status is FanStatus.NOT_CONVEX else Verdict.INVALID
    return _Outcome(status, fv, fv.reason.value)


@dataclass
class _ChunkResult:
    first_fail: int | None
    outcome: _Outcome | None
    audit: PredicateAudit
    processed: int
    uncertain: int


def _scan(surface: PLSurface, indices: Iterable[int], mode: Mode, cycles=None) -> _ChunkResult:
    audit = PredicateAudit()
    processed = 0
    uncertain = 0
    for i in indices:
        processed += 1
        out = check_face(surface, i, mode, audit, None if cycles is None else cycles[i])
        if out.status is Verdict.CONVEX:
            continue
        if out.status is Verdict.UNCERTAIN:
            uncertain += 1
            continue
        return _ChunkResult(i, out, audit, processed, uncertain)
    return _ChunkResult(None, None, audit, processed, uncertain)


def _prepare(surface: PLSurface, mode: Mode):
    """Validation shared by serial and parallel runs: a Report or the cycles."""
    report = Report(Verdict.INVALID, mode=mode.kind)
    poset = surface.poset
    cycles: list = []
    vp = validate_poset(poset, cycles)
    if vp.ok:
        report.counts = dict(poset.counts)
    else:
        report.counts = _safe_counts(surface)
        report.reason, report.witness = vp.reason, vp.face
        return report, None
    vr = validate_realization(surface)
    if not vr.ok:
        report.reason, report.witness = vr.reason, vr.face
        return report, None
    return report, cycles


def _safe_counts(surface: PLSurface) -> dict[str, int]:
    try:
        return dict(surface.poset.counts)
    except Exception:  # counts are best effort on broken input
        return {}


def _finish(report: Report, results: list[_ChunkResult], n: int, start: float) -> Report:
    witness_chunk = next((k for k, r in enumerate(results) if r.first_fail is not None), None)
    keep = results if witness_chunk is None else results[: witness_chunk + 1]
    for r in keep:
        report.audit.merge(r.audit)
        report.processed += r.processed
        report.uncertain_faces += r.uncertain
    if witness_chunk is not None:
        r = results[witness_chunk]
        report.verdict = r.outcome.status
        report.witness = FaceId(n - 3, r.first_fail)
        report.fan_verdict = r.outcome.fan
        report.reason = r.outcome.reason
    elif report.uncertain_faces:
        report.verdict = Verdict.UNCERTAIN
    else:
        report.verdict = Verdict.CONVEX
    report.elapsed = time.perf_counter() - start
    return report


def check_convexity(surface: PLSurface, mode: Mode = EXACT) -> Report:
    """Decide whether ``surface`` is the boundary of a convex polyhedron."""
    start = time.perf_counter()
    report, cycles = _prepare(surface, mode)
    if cycles is None:
        report.elapsed = time.perf_counter() - start
        return report
    nfaces = surface.poset.count(surface.n - 3)
    result = _scan(surface, range(nfaces), mode, cycles)
    return _finish(report, [result], surface.n, start)


# ---------------------------------------------------------------------------
# parallel driver

_WORKER_STATE: dict = {}


def _init_worker(surface, mode, cycles):
    _WORKER_STATE["job"] = (surface, mode, cycles)


def _run_chunk(bounds: tuple[int, int]) -> _ChunkResult:
    surface, mode, cycles = _WORKER_STATE["job"]
    return _scan(surface, range(*bounds), mode, cycles)


def check_convexity_parallel(surface: PLSurface, mode: Mode = EXACT, jobs: int = 1) -> Report:
    """Same Report as :func:`check_convexity`, with stars checked by ``jobs`` processes.

    Faces are split into contiguous index ranges; the witness is the smallest
    failing face, and audits of ranges past the witness are discarded so the
    report matches a serial run exactly.
    """
    if jobs <= 1:
        return check_convexity(surface, mode)
    start = time.perf_counter()
    report, cycles = _prepare(surface, mode)
    if cycles is None:
        report.elapsed = time.perf_counter() - start
        return report
    nfaces = surface.poset.count(surface.n - 3)
    nchunks = min(nfaces, jobs * 4) or 1
    step = -(-nfaces // nchunks)
    bounds = [(lo, min(lo + step, nfaces)) for lo in range(0, nfaces, step)]
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        ctx = multiprocessing.get_context()
    with cf.ProcessPoolExecutor(max_workers=jobs, mp_context=ctx, initializer=_init_worker,
                                initargs=(surface, mode, cycles)) as pool:
        results = list(pool.map(_run_chunk, bounds))
    return _finish(report, results, surface.n, start)
