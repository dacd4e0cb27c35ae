#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel lanes.

The backend is fixed at import time, so the driver re-runs itself in a
subprocess per lane with SPLITG2_KERNELS set, then prints both timings
side by side.  Workloads cover the three kernel-bound layers: raw term
arithmetic, wedge products, and a full symbolic torsion solve.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations


def _bench(fn, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def _workloads():
    from splitg2 import catalog, kernels
    from splitg2.exterior import Form
    from splitg2.g2 import compatibility_defect, torsion_solve

    rng = random.Random(7)

    width = 3
    maps = []
    for _ in range(2):
        m = {}
        while len(m) < 40:
            e = tuple(rng.randint(0, 6) for _ in range(width))
            m[e] = rng.randint(-50, 50) or 1
        maps.append(m)

    def poly_mul():
        kernels.poly_mul(maps[0], maps[1])

    keys3 = list(combinations(range(1, 11), 3))
    forms = []
    for _ in range(2):
        terms = {}
        for key in rng.sample(keys3, 30):
            terms[key] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        forms.append(Form(10, 3, terms))

    def wedge():
        forms[0].wedge(forms[1])

    ml = catalog.scenario("Ml")

    def compat():
        compatibility_defect(ml.metric, ml.phi_family)

    def torsion():
        torsion_solve(ml.algebra, ml.metric, ml.phi_family)

    return [
        ("poly_mul 40x40 terms", poly_mul, 200),
        ("wedge 30x30 terms", wedge, 50),
        ("compatibility defect, symbolic", compat, 3),
        ("torsion solve, symbolic", torsion, 3),
    ]


def run_lane(repeat_scale):
    from splitg2 import kernels

    results = {"lane": kernels.backend_name(), "times": {}}
    for name, fn, repeat in _workloads():
        results["times"][name] = _bench(fn, max(1, int(repeat * repeat_scale)))
    print(json.dumps(results))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lane-run", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--repeat-scale", type=float, default=1.0,
                        help="multiply every repeat count (default 1.0)")
    args = parser.parse_args()

    if args.lane_run:
        run_lane(args.repeat_scale)
        return 0

    lanes = {}
    for lane in ("py", "c"):
        env = dict(os.environ, SPLITG2_KERNELS=lane)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--lane-run",
             "--repeat-scale", str(args.repeat_scale)],
            capture_output=True, text=True, env=env,
        )
        if proc.returncode != 0:
            if lane == "c":
                print("compiled lane unavailable; showing pure Python only")
                continue
            sys.stderr.write(proc.stderr)
            return 1
        data = json.loads(proc.stdout)
        assert data["lane"] == lane, "backend selection failed"
        lanes[lane] = data["times"]

    names = list(lanes["py"])
    width = max(len(n) for n in names)
    header = f"{'workload':<{width}}  {'py':>10}  {'c':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name in names:
        py_t = lanes["py"][name]
        if "c" in lanes:
            c_t = lanes["c"][name]
            print(f"{name:<{width}}  {py_t:>9.4f}s  {c_t:>9.4f}s  "
                  f"{py_t / c_t:>7.2f}x")
        else:
            print(f"{name:<{width}}  {py_t:>9.4f}s  {'-':>10}  {'-':>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
