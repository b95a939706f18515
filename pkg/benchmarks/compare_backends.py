"""Compare the compiled kernels with their pure-Python twins.

    python benchmarks/compare_backends.py [--repeat 3] [--n 2000]

Times the link-cut kernel, the tournament kernel and ``scatter_min`` under
both backends, then replays one pram trace end to end in a subprocess with
and without ``DYNMSF_PURE=1``.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from dynmsf import _lct_py

try:
    from dynmsf import _core
except ImportError:
    _core = None


def bench_linkcut(mod, n, rng):
    core = mod.LinkCutCore(2 * n)
    for x in range(n):
        core.reset(x, int(rng.integers(1 << 30)))
    parent = [-1] * n
    ops = 0
    for x in range(1, n):
        p = int(rng.integers(x))
        core.link(x, p)
        parent[x] = p
        ops += 1
    for _ in range(2 * n):
        a, b = (int(v) for v in rng.integers(n, size=2))
        core.path_max(a, b)
        x = int(rng.integers(1, n))
        core.cut(x, parent[x])
        core.link(x, parent[x])
        ops += 3
    return ops


def bench_tournament(mod, n, rng):
    J, width = 64, 256
    core = mod.TournamentCore(J, width)
    absent = int(np.iinfo(np.int64).max)
    rounds = max(1, n // 100)
    for _ in range(rounds):
        m = J * 32
        procs = np.arange(m, dtype=np.int64)
        trees = np.repeat(np.arange(J, dtype=np.int64), 32)
        leaves = np.tile(np.arange(32, dtype=np.int64), J)
        vals = rng.integers(1 << 40, size=m).astype(np.int64)
        core.run(procs, trees, leaves, vals, absent, True)
    return rounds


def bench_scatter(mod, n, rng):
    rounds = max(1, n // 10)
    for _ in range(rounds):
        idx = rng.integers(256, size=512).astype(np.int64)
        vals = rng.integers(1 << 40, size=512).astype(np.int64)
        mod.scatter_min(256, idx, vals, -1)
    return rounds


def timed(fn, mod, n, repeat):
    best = float("inf")
    for r in range(repeat):
        rng = np.random.default_rng(r)
        t0 = time.perf_counter()
        fn(mod, n, rng)
        best = min(best, time.perf_counter() - t0)
    return best


END_TO_END = (
    "import time;"
    "from dynmsf._backend import BACKEND;"
    "from dynmsf.harness.trace import gen_trace;"
    "from dynmsf.harness.runner import run_trace;"
    "t = gen_trace(64, {ops}, 0);"
    "s = time.perf_counter(); _, rep = run_trace(t, 'pram');"
    "print(BACKEND, time.perf_counter() - s, rep.ok)"
)


def end_to_end(pure, ops):
    env = dict(os.environ)
    if pure:
        env["DYNMSF_PURE"] = "1"
    else:
        env.pop("DYNMSF_PURE", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(ops=ops)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1]), out[2] == "True"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--ops", type=int, default=300, help="updates in the end-to-end trace")
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")
        return 1
    for name, fn in [("linkcut", bench_linkcut), ("tournament", bench_tournament),
                     ("scatter_min", bench_scatter)]:
        tc = timed(fn, _core, args.n, args.repeat)
        tp = timed(fn, _lct_py, args.n, args.repeat)
        print("kernel=%s cython=%.4fs python=%.4fs speedup=%.1fx" % (name, tc, tp, tp / tc))
    for pure in (False, True):
        backend, secs, ok = end_to_end(pure, args.ops)
        print("end_to_end backend=%s seconds=%.2f ok=%d" % (backend, secs, ok))
    return 0


if __name__ == "__main__":
    sys.exit(main())
