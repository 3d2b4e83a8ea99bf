"""Time the compiled kernels against the numpy fallback.

Each backend runs in its own interpreter because the choice is made at import
(``MKONHAUSER_PURE=1`` forces the fallback).

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, timeit
import numpy as np
from mkonhauser import kernels

n, repeat = int(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
z = rng.uniform(-6, 6, n) + 1j * rng.uniform(-20, 20, n)
coeffs = rng.normal(size=(8, 8))
ys, zs = rng.uniform(0, 2, 200), rng.uniform(0, 2, 200)
few = z[:6]
jobs = {
    "cgamma": lambda: kernels.cgamma(z),
    # small arrays, as in the closed-form Gamma products: call overhead dominates
    "cgamma[6]x1000": lambda: [kernels.cgamma(few) for _ in range(1000)],
    "clgamma": lambda: kernels.clgamma(z),
    "bipoly_grid": lambda: kernels.bipoly_grid(coeffs, 2, ys, zs),
}
out = {"backend": kernels.BACKEND}
for name, fn in jobs.items():
    fn()
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run_backend(pure: bool, n: int, repeat: int) -> dict:
    env = dict(os.environ, MKONHAUSER_PURE="1" if pure else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100_000, help="complex arguments for the gamma kernels")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    native = run_backend(False, args.n, args.repeat)
    python = run_backend(True, args.n, args.repeat)
    if native["backend"] != "native":
        print("compiled extension not importable; only the fallback was timed", file=sys.stderr)
    print(f"{'kernel':<16} {native['backend']:>10} {python['backend']:>10} {'speedup':>8}")
    for name in ("cgamma", "cgamma[6]x1000", "clgamma", "bipoly_grid"):
        a, b = native[name], python[name]
        print(f"{name:<16} {a * 1e3:>8.2f}ms {b * 1e3:>8.2f}ms {b / a:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
