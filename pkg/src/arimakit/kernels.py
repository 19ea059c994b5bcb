"""Hot recursive loops, each in two interchangeable flavours.

``*_loop`` functions are explicit scalar recursions compiled by numba;
``*_numpy`` functions compute the same quantity with vectorised numpy and
``scipy.signal.lfilter``. The public names (``css_residuals``, ``arma_filter``,
``durbin_levinson``) point at whichever flavour the backend selected.
Both flavours are kept importable so they can be checked against each other.
"""
import numpy as np
from scipy.signal import lfilter

from ._backend import USE_NUMBA, njit


def _css_residuals_loop(z, phi, theta):
    n = z.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    a = np.zeros(n)
    for t in range(p, n):
        acc = z[t]
        for i in range(1, p + 1):
            acc -= phi[i - 1] * z[t - i]
        for j in range(1, q + 1):
            if t - j >= 0:
                acc += theta[j - 1] * a[t - j]
        a[t] = acc
    return a


def css_residuals_numpy(z, phi, theta):
    """Conditional residuals of a zero-mean ARMA, presample residuals fixed at 0.

    Returns an array the length of ``z`` whose first ``len(phi)`` entries are
    the (zero) presample residuals.
    """
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n, p = z.shape[0], phi.shape[0]
    e = z[p:].copy()
    for i in range(1, p + 1):
        e -= phi[i - 1] * z[p - i:n - i]
    a = np.zeros(n)
    if theta.shape[0]:
        a[p:] = lfilter([1.0], np.r_[1.0, -theta], e)
    else:
        a[p:] = e
    return a


def _arma_filter_loop(eps, phi, theta):
    n = eps.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    y = np.zeros(n)
    for t in range(n):
        acc = eps[t]
        for i in range(1, p + 1):
            if t - i >= 0:
                acc += phi[i - 1] * y[t - i]
        for j in range(1, q + 1):
            if t - j >= 0:
                acc -= theta[j - 1] * eps[t - j]
        y[t] = acc
    return y


def arma_filter_numpy(eps, phi, theta):
    """Run y_t = sum phi_i y_{t-i} + eps_t - sum theta_j eps_{t-j} from rest."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return lfilter(np.r_[1.0, -theta], np.r_[1.0, -phi], np.asarray(eps, dtype=float))


def _durbin_levinson_loop(r, max_lag):
    out = np.full(max_lag + 1, np.nan)
    out[0] = 1.0
    prev = np.zeros(max_lag + 1)
    cur = np.zeros(max_lag + 1)
    v = r[0]
    for k in range(1, max_lag + 1):
        if not v > 0.0:
            break
        num = r[k]
        for j in range(1, k):
            num -= prev[j] * r[k - j]
        kk = num / v
        cur[k] = kk
        for j in range(1, k):
            cur[j] = prev[j] - kk * prev[k - j]
        v = v * (1.0 - kk * kk)
        out[k] = kk
        for j in range(1, k + 1):
            prev[j] = cur[j]
    return out


def durbin_levinson_numpy(r, max_lag):
    """Partial autocorrelations 0..max_lag from autocorrelations ``r``.

    Entries past a point where the prediction-error variance stops being
    positive are left as NaN.
    """
    r = np.asarray(r, dtype=float)
    out = np.full(max_lag + 1, np.nan)
    out[0] = 1.0
    coef = np.zeros(0)
    v = r[0]
    for k in range(1, max_lag + 1):
        if not v > 0.0:
            break
        kk = (r[k] - coef @ r[k - 1:0:-1]) / v
        coef = np.r_[coef - kk * coef[::-1], kk]
        v = v * (1.0 - kk * kk)
        out[k] = kk
    return out


css_residuals_numba = njit(_css_residuals_loop)
arma_filter_numba = njit(_arma_filter_loop)
durbin_levinson_numba = njit(_durbin_levinson_loop)

if USE_NUMBA:
    def css_residuals(z, phi, theta):
        return css_residuals_numba(np.ascontiguousarray(z, dtype=np.float64),
                                   np.ascontiguousarray(phi, dtype=np.float64),
                                   np.ascontiguousarray(theta, dtype=np.float64))

    def arma_filter(eps, phi, theta):
        return arma_filter_numba(np.ascontiguousarray(eps, dtype=np.float64),
                                 np.ascontiguousarray(phi, dtype=np.float64),
                                 np.ascontiguousarray(theta, dtype=np.float64))

    def durbin_levinson(r, max_lag):
        return durbin_levinson_numba(np.ascontiguousarray(r, dtype=np.float64), int(max_lag))
else:
    css_residuals = css_residuals_numpy
    arma_filter = arma_filter_numpy
    durbin_levinson = durbin_levinson_numpy
