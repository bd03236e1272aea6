"""Compare the numba and numpy backends.

Two measurements:

* micro: the two hot kernels timed in-process on a B=3, 8x4 cluster.
* sweep: a short end-to-end ``run_sweep`` in a fresh interpreter per
  backend (the backend is fixed at import, so it needs a new process).

Usage::

    python3 benchmarks/bench_kernels.py [--trials 10] [--repeat 2000]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from cbsim import kernels

SWEEP_SNIPPET = """
import json, time
from cbsim.model import ClusterConfig, Scenario
from cbsim.simulate import run_sweep
cfg = ClusterConfig(3, 8, 4)
scen = Scenario(1.0, 0.0, snr_grid=(20.0,), trials={trials}, master_seed=1)
run_sweep(cfg, Scenario(1.0, 0.0, snr_grid=(20.0,), trials=1), ["max_sinr", "wmmse"])  # warm-up
t0 = time.perf_counter()
table = run_sweep(cfg, scen, ["ia", "max_sinr", "wmmse", "reconfigurable"])
print(json.dumps({{"seconds": time.perf_counter() - t0,
                  "means": {{s: table.mean(s, 20.0) for s in table.schemes}}}}))
"""


def _inputs(seed=0, B=3, nR=4, nT=8, d=2):
    r = np.random.default_rng(seed)
    c = lambda *s: r.standard_normal(s) + 1j * r.standard_normal(s)  # noqa: E731
    return c(B, B, nR, nT), c(B, nT, d), np.full(B, 0.1)


def micro(repeat):
    H, F, noise = _inputs()
    w = np.array([1.0, 0.0, 1.0])
    cases = {
        "gram_sum": (lambda: kernels.numpy_gram_sum(H[0], F, w),
                     lambda: kernels.gram_sum(H[0], F, w)),
        "link_rates": (lambda: kernels.numpy_link_rates(H, F, 0.5, noise, True),
                       lambda: kernels.link_rates(H, F, 0.5, noise, True)),
    }
    rows = []
    for name, (ref, fast) in cases.items():
        fast()  # trigger compilation
        t_np = min(timeit.repeat(ref, number=repeat, repeat=3)) / repeat
        t_fast = min(timeit.repeat(fast, number=repeat, repeat=3)) / repeat
        rows.append((name, t_np, t_fast))
    return rows


def sweep(backend, trials):
    env = dict(os.environ, CBSIM_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET.format(trials=trials)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--repeat", type=int, default=2000)
    args = parser.parse_args(argv)

    print(f"in-process backend: {kernels.BACKEND}")
    print(f"{'kernel':<12}{'numpy [us]':>12}{kernels.BACKEND + ' [us]':>14}{'speed-up':>10}")
    for name, t_np, t_fast in micro(args.repeat):
        print(f"{name:<12}{t_np * 1e6:>12.2f}{t_fast * 1e6:>14.2f}{t_np / t_fast:>9.1f}x")

    results = {b: sweep(b, args.trials) for b in ("numpy", "numba")}
    print(f"\nsweep: B=3, 8x4, 20 dB, {args.trials} trials, four coordinated schemes")
    for b, r in results.items():
        print(f"  {b:<6} {r['seconds']:7.2f} s")
    print(f"  speed-up {results['numpy']['seconds'] / results['numba']['seconds']:.2f}x")
    # rounding differs between backends, which can flip an early-exit or
    # stream-drop decision, so agreement is reported rather than asserted
    gap = max(abs(results["numpy"]["means"][s] - results["numba"]["means"][s])
              for s in results["numpy"]["means"])
    print(f"  largest difference in mean rate: {gap:.2e} bits/s/Hz")


if __name__ == "__main__":
    main()
