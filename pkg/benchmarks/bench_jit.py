"""Compare the numba kernels against the interpreted fallback.

Each backend runs in its own interpreter (the switch is read at import), on the
same workload: every applicable method over a small (nu, lambda, x) grid.
Compilation is excluded by a warm-up pass.  Values from both backends are
checked to agree before timings are reported.

    python benchmarks/bench_jit.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from ncx2cdf import ncx2, backend
points = [(nu, lam, x) for nu in (2, 3, 8) for lam in (1.0, 4.0) for x in (0.5, 4.0, 9.0)]
def sweep():
    out = []
    for nu, lam, x in points:
        p = ncx2.Ncx2Params(nu, lam, x)
        for m in ncx2.applicable_methods(p):
            out.append((str(m), ncx2.cdf(p, m).value))
    return out
sweep()
times, values = [], None
for _ in range(int(sys.argv[1])):
    t0 = time.perf_counter()
    values = sweep()
    times.append(time.perf_counter() - t0)
json.dump({"backend": backend(), "best_s": min(times), "values": values}, sys.stdout)
"""


def run(disable, repeat):
    env = dict(os.environ, NCX2_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    worst = max(abs(a[1] - b[1]) for a, b in zip(fast["values"], slow["values"]))
    print(f"evaluations per sweep: {len(fast['values'])}")
    print(f"{fast['backend']:>8s}: {fast['best_s'] * 1e3:9.1f} ms")
    print(f"{slow['backend']:>8s}: {slow['best_s'] * 1e3:9.1f} ms")
    print(f"speedup: {slow['best_s'] / fast['best_s']:.1f}x   max |value difference|: {worst:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
