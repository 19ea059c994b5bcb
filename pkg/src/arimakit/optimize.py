"""Derivative-free Nelder-Mead simplex minimiser.

Standard coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
Infeasible points are expected to return ``inf``; they are always ranked worst.
Stops when the spread of objective values across the simplex falls below
``rtol * |f_best|`` or after ``maxiter`` iterations.
"""
from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    nit: int
    nfev: int
    converged: bool
    all_infeasible: bool = False


def nelder_mead(func, x0, steps, maxiter, rtol=1e-10):
    x0 = np.asarray(x0, dtype=float)
    steps = np.asarray(steps, dtype=float)
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += steps[i]
    fs = np.array([func(v) for v in sim])
    nfev = n + 1
    if not np.any(np.isfinite(fs)):
        return SimplexResult(x0, math.inf, 0, nfev, False, all_infeasible=True)

    nit = 0
    converged = False
    while True:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        f_best, f_worst = fs[0], fs[-1]
        if math.isfinite(f_worst) and f_worst - f_best <= rtol * abs(f_best):
            converged = True
            break
        if nit >= maxiter:
            break
        nit += 1

        centroid = sim[:-1].mean(axis=0)
        xr = centroid + (centroid - sim[-1])
        fr = func(xr)
        nfev += 1
        if fr < f_best:
            xe = centroid + 2.0 * (centroid - sim[-1])
            fe = func(xe)
            nfev += 1
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < f_worst:
            xc = centroid + 0.5 * (xr - centroid)
            fc = func(xc)
            nfev += 1
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (sim[-1] - centroid)
            fc = func(xc)
            nfev += 1
            if fc < f_worst:
                sim[-1], fs[-1] = xc, fc
                continue
        # shrink toward the best vertex
        for i in range(1, n + 1):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            fs[i] = func(sim[i])
        nfev += n

    return SimplexResult(sim[0].copy(), float(fs[0]), nit, nfev, converged,
                         all_infeasible=not math.isfinite(fs[0]))
