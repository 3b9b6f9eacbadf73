"""Compiled vs numpy product-state kernels.

Times ``product_variance`` (the optimizer objective) for both backends over a
range of chain sizes, then one full multi-start optimisation per backend.

    python benchmarks/bench_kernels.py [--nmin 4] [--nmax 10] [--repeat 5]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ising_qfi import _fallback

try:
    from ising_qfi import _kernels
except ImportError:
    _kernels = None


def _operator(N, seed=0):
    rng = np.random.default_rng(seed)
    dim = 2**N
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return np.asfortranarray(a + a.conj().T)


def bench_objective(nmin, nmax, repeat):
    print(f"{'N':>3} {'python [us]':>12} {'cython [us]':>12} {'speedup':>8}")
    for N in range(nmin, nmax + 1):
        op = _operator(N)
        rng = np.random.default_rng(N)
        th, ph = rng.uniform(0, np.pi, N), rng.uniform(0, 2 * np.pi, N)
        number = max(10, 20000 // 4**N * 50)
        t_py = min(timeit.repeat(lambda: _fallback.product_variance(th, ph, op), number=number, repeat=repeat)) / number
        if _kernels is None:
            print(f"{N:>3} {t_py * 1e6:12.1f} {'n/a':>12} {'':>8}")
            continue
        t_cy = min(timeit.repeat(lambda: _kernels.product_variance(th, ph, op), number=number, repeat=repeat)) / number
        print(f"{N:>3} {t_py * 1e6:12.1f} {t_cy * 1e6:12.1f} {t_py / t_cy:8.2f}")


_OPT_SNIPPET = """
import time
from ising_qfi import BACKEND, ModelParams, optimize
p = ModelParams({N}, 1.0, 1.0, 20.0)
optimize(p, "J", restarts=1)  # warm the operator cache
t0 = time.perf_counter()
run = optimize(p, "J", restarts={restarts}, seed=0)
print(BACKEND, time.perf_counter() - t0, repr(run.best_variance))
"""


def bench_optimize(N, restarts):
    # the backend is chosen at import, so each one runs in its own interpreter
    print(f"\noptimize(N={N}, restarts={restarts}):")
    for flag in ("1", "0"):
        env = dict(os.environ, ISING_QFI_PURE_PYTHON=flag)
        out = subprocess.run(
            [sys.executable, "-c", _OPT_SNIPPET.format(N=N, restarts=restarts)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.split()
        print(f"  {out[0]:<7} {float(out[1]):8.2f} s   best variance {out[2]}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmin", type=int, default=4)
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--opt-N", type=int, default=6)
    ap.add_argument("--opt-restarts", type=int, default=8)
    args = ap.parse_args(argv)
    bench_objective(args.nmin, args.nmax, args.repeat)
    bench_optimize(args.opt_N, args.opt_restarts)


if __name__ == "__main__":
    main()
