"""Time the compiled kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--n 5000] [--repeat 20]

Kernel timings call both implementations directly in one process. The
end-to-end fit is timed in two child processes, one with
``ARIMAKIT_DISABLE_NUMBA=1``, so each sees a clean backend selection.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from arimakit import kernels
from arimakit._backend import HAVE_NUMBA

FIT_SNIPPET = """
import time
from arimakit import fit, simulate, SimSpec, ArimaParams, ArimaOrder
from arimakit._backend import backend_name
s = simulate(SimSpec(ArimaParams(phi=(0.6,), theta=(0.3,)), n={n}, seed=42))
fit(s, ArimaOrder(1, 0, 1))
t0 = time.perf_counter()
for _ in range({repeat}):
    fit(s, ArimaOrder(1, 0, 1))
print(backend_name(), (time.perf_counter() - t0) / {repeat})
"""


def best_of(func, repeat):
    func()  # warm up (JIT compile)
    return min(timeit.repeat(func, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    z = rng.normal(size=args.n)
    phi, theta = np.array([0.5, -0.2]), np.array([0.3])
    r = np.r_[1.0, 0.6 ** np.arange(1, 41)]

    cases = [
        ("css_residuals", lambda: kernels.css_residuals_numba(z, phi, theta),
         lambda: kernels.css_residuals_numpy(z, phi, theta)),
        ("arma_filter", lambda: kernels.arma_filter_numba(z, phi, theta),
         lambda: kernels.arma_filter_numpy(z, phi, theta)),
        ("durbin_levinson", lambda: kernels.durbin_levinson_numba(r, 40),
         lambda: kernels.durbin_levinson_numpy(r, 40)),
    ]
    if not HAVE_NUMBA:
        print("numba not installed; the 'numba' column times the pure-python loop")
    print(f"{'kernel':<18}{'numba [us]':>12}{'numpy [us]':>12}{'ratio':>8}")
    for name, fast, slow in cases:
        a, b = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{name:<18}{a * 1e6:>12.1f}{b * 1e6:>12.1f}{b / a:>8.2f}")

    print(f"\nfull ARIMA(1,0,1) fit, n={args.n}")
    code = FIT_SNIPPET.format(n=args.n, repeat=max(1, args.repeat // 4))
    for disable in ("0", "1"):
        env = dict(os.environ, ARIMAKIT_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"  {out[0]:<8}{float(out[1]) * 1e3:>10.2f} ms")


if __name__ == "__main__":
    main()
