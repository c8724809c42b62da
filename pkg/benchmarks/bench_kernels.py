"""Benchmark the hot sampling kernels on the compiled (numba) and pure-numpy
backends.

The backend is fixed at import time by WINDHIT_BACKEND, so the comparison
re-runs this script in a subprocess per backend and prints a side-by-side
table.  Run a single backend directly with e.g.

    WINDHIT_BACKEND=numpy python3 benchmarks/bench_kernels.py --n 20000
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time


def run_cases(n: int):
    from windhit import BACKEND_NAME, ConeSpec, OuSpec, paths
    from windhit.paths import RngStream

    cone = ConeSpec(math.pi / 4)
    dt = cone.c ** 2 / 2000.0
    cases = [
        ("one_sided_hit (exact)", lambda r: paths.one_sided_hit_batch(
            1.0, n, r)),
        ("two_sided_hit dt=1e-4", lambda r: paths.two_sided_hit_batch(
            1.0, 1e-4, n, r)),
        ("exp_functional u=1 dt=1e-3", lambda r: paths.exp_functional_log_batch(
            1.0, 1e-3, n, r)),
        ("exit_cone c=pi/4", lambda r: paths.exit_cone_log_batch(
            cone, 1.0, dt, n, r)),
        ("range_exit c=1 dt=1e-3", lambda r: paths.range_exit_log_batch(
            1.0, 1e-3, n, r)),
        ("winding t=1e4 (radial)", lambda r: paths.winding_at_time_batch(
            1e4, 1.0, n, r)),
        ("winding at indep hit b=1", lambda r: paths.winding_at_indep_hit_batch(
            1.0, n, r, track_max=True)),
        ("angle_exit_planar c=pi/4", lambda r: paths.angle_exit_planar_batch(
            cone, n, r)),
        ("ou_exit direct lam=1", lambda r: paths.ou_exit_batch(
            cone, OuSpec(lam=1.0), 1e-2, n, r, mode="direct")),
    ]
    out = {"backend": BACKEND_NAME, "n": n, "timings": {}}
    for label, fn in cases:
        fn(RngStream(1, 0))  # warm-up: JIT compile and touch caches
        t0 = time.perf_counter()
        fn(RngStream(2, 0))
        out["timings"][label] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20_000,
                    help="paths per kernel (default %(default)s)")
    ap.add_argument("--json", action="store_true",
                    help="emit raw JSON for this process's backend only")
    args = ap.parse_args()

    if args.json or os.environ.get("WINDHIT_BACKEND"):
        res = run_cases(args.n)
        if args.json:
            print(json.dumps(res))
            return
        print("backend=%s n=%d" % (res["backend"], res["n"]))
        for label, sec in res["timings"].items():
            print("  %-28s %8.3f s" % (label, sec))
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, WINDHIT_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__),
             "--n", str(args.n), "--json"],
            env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print("backend %s failed:\n%s" % (backend, proc.stderr),
                  file=sys.stderr)
            continue
        results[backend] = json.loads(proc.stdout.strip().splitlines()[-1])

    if not results:
        sys.exit(1)
    print("n = %d paths per kernel" % args.n)
    print("%-28s %10s %10s %8s" % ("kernel", "numba [s]", "numpy [s]",
                                   "speedup"))
    labels = list(next(iter(results.values()))["timings"])
    for label in labels:
        tb = results.get("numba", {}).get("timings", {}).get(label)
        tn = results.get("numpy", {}).get("timings", {}).get(label)
        speed = ("%8.1fx" % (tn / tb)) if tb and tn else "up     n/a"
        fmt = lambda v: ("%10.3f" % v) if v is not None else "       n/a"
        print("%-28s %s %s %s" % (label, fmt(tb), fmt(tn), speed))


if __name__ == "__main__":
    main()
