"""Benchmark the compiled tracking kernel against the pure Python twin.

The workload is the monodromy hot path: tracking every fiber strand of a
handful of corpus functions around every keyhole loop.  Run with

    python3 benchmarks/bench_tracking.py
"""

import time

import numpy as np

from rittdyn import _tracking, _tracking_py  # type: ignore[attr-defined]
from rittdyn import corpus
from rittdyn.numerics import DEFAULT_OPTIONS, _coeff_arrays, anchor_fiber, build_loops
from rittdyn.orbifold import ramification_portrait
from rittdyn.field import INF, point_to_complex


def workload():
    """(coeff arrays, waypoint arrays, start points) for the tracking runs."""
    jobs = []
    for name in ("t6", "a_23", "z8", "tame4", "lattes4", "d3"):
        f = corpus.get(name)
        port = ramification_portrait(f)
        finite = [point_to_complex(e.value) for e in port.branch_points if e.value is not INF]
        system = build_loops(finite, port.has_infinite_branch_value(), seed=0)
        fiber = anchor_fiber(f, system.anchor)
        arrays = _coeff_arrays(f)
        for loop in system.loops:
            wpts = np.ascontiguousarray(loop.waypoints, dtype=complex)
            for z in fiber:
                z0, chart = (complex(z), 0) if abs(z) <= 2.0 else (1.0 / complex(z), 1)
                jobs.append((arrays, wpts, z0, chart))
    return jobs


def run(kernel, jobs):
    opts = DEFAULT_OPTIONS
    t0 = time.perf_counter()
    for (pn, pd, rpn, rpd), wpts, z0, chart in jobs:
        status, _, _, _ = kernel.track_path(
            pn, pd, rpn, rpd, wpts, z0, chart, opts.rtol, opts.min_step, opts.max_newton
        )
        assert status == 0
    return time.perf_counter() - t0


def main():
    jobs = workload()
    print(f"workload: {len(jobs)} strand-loop tracks")
    # warm up both
    run(_tracking, jobs[:4])
    run(_tracking_py, jobs[:4])
    reps = 3
    compiled = min(run(_tracking, jobs) for _ in range(reps))
    pure = min(run(_tracking_py, jobs) for _ in range(reps))
    print(f"compiled kernel : {compiled * 1000:8.1f} ms")
    print(f"pure python     : {pure * 1000:8.1f} ms")
    print(f"speedup         : {pure / compiled:8.1f}x")


if __name__ == "__main__":
    main()
