import math

import pytest

from plconvex.bench import COUNT_KEYS, BenchResult, BenchRow, fit_slope, run_bench


def test_fit_slope():
    xs = [10, 100, 1000]
    assert fit_slope(xs, [2 * x for x in xs]) == pytest.approx(1.0)
    assert fit_slope(xs, [x * x for x in xs]) == pytest.approx(2.0)
    assert math.isnan(fit_slope([5], [1]))


def test_csv_layout():
    counts = {k: 1 for k in COUNT_KEYS}
    res = BenchResult([BenchRow(10, counts, 1.5, "Convex", "exact", 1)], slope=1.0)
    lines = res.to_csv().splitlines()
    assert lines[0] == "num_points," + ",".join(COUNT_KEYS) + ",elapsed_ms,mode,jobs,verdict"
    assert lines[1].endswith("1.500,exact,1,Convex")
    assert lines[2] == "# slope=1.0000"


def test_run_small():
    seen = []
    res = run_bench((30, 60, 120), seed=1, repeat=1, progress=seen.append)
    assert [r.num_points for r in res.rows] == [30, 60, 120]
    assert all(r.verdict == "Convex" for r in res.rows)
    assert len(seen) == 3
    # tiny sizes are noisy; only require a finite, positive trend
    assert math.isfinite(res.slope) and res.slope > 0


def test_parallel_rows_report_speedup():
    res = run_bench((50, 100), seed=2, jobs=2, repeat=1)
    assert all(r.jobs == 2 and r.speedup is not None for r in res.rows)
    assert "speedup" in res.to_csv().splitlines()[0]
