"""Timing harness: verifier run time against the size of the input.

Each row is one RandomHull instance.  The fitted slope of log(time) against
log(f_{n-3,n-2}) estimates the exponent of the running time in the number of
face incidences; linear work gives a slope near 1.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .generator import random_hull
from .verifier import EXACT, Mode, check_convexity, check_convexity_parallel

DEFAULT_SIZES = (100, 1_000, 10_000, 100_000)
COUNT_KEYS = ("f_0", "f_n-3", "f_n-2", "f_n-1", "f_n-3_n-2", "f_n-3_n-1", "f_n-2_n-1")


@dataclass
class BenchRow:
    num_points: int
    counts: dict[str, int]
    elapsed_ms: float
    verdict: str
    mode: str
    jobs: int
    serial_ms: float | None = None

    @property
    def speedup(self) -> float | None:
        if self.serial_ms is None or self.elapsed_ms <= 0:
            return None
        return self.serial_ms / self.elapsed_ms


@dataclass
class BenchResult:
    rows: list[BenchRow] = field(default_factory=list)
    slope: float = math.nan

    def to_csv(self) -> str:
        with_speedup = any(r.serial_ms is not None for r in self.rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["num_points", *COUNT_KEYS, "elapsed_ms", "mode", "jobs", "verdict"]
        if with_speedup:
            header.append("speedup")
        w.writerow(header)
        for r in self.rows:
            row = [r.num_points, *(r.counts.get(k, 0) for k in COUNT_KEYS),
                   f"{r.elapsed_ms:.3f}", r.mode, r.jobs, r.verdict]
            if with_speedup:
                row.append("" if r.speedup is None else f"{r.speedup:.3f}")
            w.writerow(row)
        buf.write(f"# slope={self.slope:.4f}\n")
        return buf.getvalue()


def fit_slope(xs, ys) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    if len(xs) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def _timed(surface, mode: Mode, jobs: int, repeat: int):
    best = math.inf
    report = None
    for _ in range(repeat):
        start = time.perf_counter()
        if jobs > 1:
            report = check_convexity_parallel(surface, mode, jobs)
        else:
            report = check_convexity(surface, mode)
        best = min(best, time.perf_counter() - start)
    return report, best * 1000.0


def run_bench(sizes=DEFAULT_SIZES, seed: int = 0, mode: Mode = EXACT, jobs: int | None = None,
              repeat: int = 3, progress=None) -> BenchResult:
    """Time the verifier on one RandomHull per size.

    Instances below 10^4 points are timed ``repeat`` times (best kept).  With
    ``jobs > 1`` every instance is also timed serially and the speedup is
    reported; the slope always uses the serial times.
    """
    result = BenchResult()
    xs, ys = [], []
    for i, size in enumerate(sizes):
        surface = random_hull(size, seed + i)
        reps = repeat if size < 10_000 else 1
        report, serial_ms = _timed(surface, mode, 1, reps)
        row = BenchRow(size, dict(report.counts), serial_ms, report.verdict.value, mode.kind, 1)
        if jobs and jobs > 1:
            preport, par_ms = _timed(surface, mode, jobs, reps)
            if preport.comparable() != report.comparable():
                raise AssertionError("parallel report differs from serial report")
            row = BenchRow(size, dict(report.counts), par_ms, report.verdict.value, mode.kind, jobs,
                           serial_ms=serial_ms)
        result.rows.append(row)
        xs.append(report.counts["f_n-3_n-2"])
        ys.append(serial_ms)
        if progress is not None:
            progress(row)
    result.slope = fit_slope(xs, ys)
    return result
