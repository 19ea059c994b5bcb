"""Point forecasts, psi-weight prediction intervals and trend labels."""
from dataclasses import dataclass

import numpy as np

from .errors import HorizonError
from .series import contiguous_run

Z95 = 1.96
DEFAULT_HORIZON = 14
TREND_LABELS = ("increasing", "decreasing", "slight_change", "unstable")


def integrated_ar_polynomial(phi, d):
    """Coefficients (in powers of B) of phi(B) * (1 - B)^d, constant term first."""
    poly = np.r_[1.0, -np.asarray(phi, dtype=float)]
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    return poly


def psi_weights(params, d, horizon):
    """psi_1 .. psi_H of the MA(infinity) form of (1-B)^-d phi(B)^-1 theta(B)."""
    if horizon < 1:
        raise HorizonError(f"horizon must be at least 1, got {horizon}")
    phistar = -integrated_ar_polynomial(params.phi, d)[1:]
    theta = params.theta
    psi = np.zeros(horizon + 1)
    psi[0] = 1.0
    for j in range(1, horizon + 1):
        acc = -theta[j - 1] if j <= len(theta) else 0.0
        for i in range(1, min(j, len(phistar)) + 1):
            acc += phistar[i - 1] * psi[j - i]
        psi[j] = acc
    return psi[1:]


@dataclass(frozen=True, eq=False)
class Forecast:
    horizon: int
    start_year: int
    points: np.ndarray
    half_width: np.ndarray
    psi: np.ndarray
    sigma2: float

    @property
    def years(self):
        return list(range(self.start_year, self.start_year + self.horizon))

    @property
    def lower95(self):
        return self.points - self.half_width

    @property
    def upper95(self):
        return self.points + self.half_width

    def to_dict(self):
        return {
            "horizon": self.horizon,
            "start_year": self.start_year,
            "years": self.years,
            "points": self.points.tolist(),
            "lower95": self.lower95.tolist(),
            "upper95": self.upper95.tolist(),
            "psi": self.psi.tolist(),
            "sigma2": self.sigma2,
        }


def forecast(fit, original, horizon=DEFAULT_HORIZON):
    """Forecast ``horizon`` years past the end of the run ``fit`` was estimated on.

    The ARMA recursion runs on the differenced scale with future innovations
    set to zero, then the forecasts are re-integrated from the last observed
    values. Bands are point +/- 1.96 forecast standard errors.
    """
    if horizon < 1:
        raise HorizonError(f"horizon must be at least 1, got {horizon}")
    offset, run = contiguous_run(original)
    if run.size == 0 or (original.start_year + offset,
                         original.start_year + offset + len(run) - 1) != tuple(fit.source_years):
        raise ValueError(f"fit was not produced from series {original.name!r}")

    order, prm = fit.order, fit.params
    levels = [run]
    for _ in range(order.d):
        levels.append(levels[-1][1:] - levels[-1][:-1])
    w = levels[-1]
    m = len(w)
    mu, phi, theta = prm.mu, prm.phi, prm.theta

    wt = np.r_[w, np.zeros(horizon)]
    at = np.r_[np.asarray(fit.residuals, dtype=float), np.zeros(horizon)]
    for t in range(m, m + horizon):
        val = mu
        for i, c in enumerate(phi, start=1):
            val += c * (wt[t - i] - mu)
        for j, c in enumerate(theta, start=1):
            val -= c * at[t - j]
        wt[t] = val
    points = wt[m:]
    for level in reversed(levels[:-1]):
        points = level[-1] + np.cumsum(points)

    psi = psi_weights(prm, order.d, horizon)
    var = prm.sigma2 * np.cumsum(np.r_[1.0, psi[:-1] ** 2])
    half = Z95 * np.sqrt(var)
    return Forecast(
        horizon=horizon,
        start_year=int(fit.source_years[1]) + 1,
        points=points,
        half_width=half,
        psi=psi,
        sigma2=prm.sigma2,
    )


@dataclass(frozen=True)
class TrendThresholds:
    relative_change: float = 0.10
    unstable_sign_changes: int = 3
    # successive differences smaller than this (relative to the anchor) count as flat
    flat_tolerance: float = 1e-9

    def to_dict(self):
        return {"relative_change": self.relative_change,
                "unstable_sign_changes": self.unstable_sign_changes,
                "flat_tolerance": self.flat_tolerance}


@dataclass(frozen=True)
class TrendLabel:
    label: str
    relative_change: float
    sign_changes: int

    def to_dict(self):
        return {"label": self.label, "relative_change": self.relative_change,
                "sign_changes": self.sign_changes}


def count_sign_changes(values, tol=0.0):
    """Sign flips in the successive differences of ``values``, ignoring |diff| <= tol."""
    diffs = np.diff(np.asarray(values, dtype=float))
    signs = np.sign(diffs[np.abs(diffs) > tol])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def classify_trend(last_observed, fc, thresholds=TrendThresholds()):
    """Label a forecast path as increasing, decreasing, slight_change or unstable."""
    scale = max(abs(float(last_observed)), 1.0)
    points = np.asarray(fc.points, dtype=float)
    rel = float((points[-1] - last_observed) / scale)
    flips = count_sign_changes(points, thresholds.flat_tolerance * scale)
    if flips >= thresholds.unstable_sign_changes:
        label = "unstable"
    elif rel > thresholds.relative_change:
        label = "increasing"
    elif rel < -thresholds.relative_change:
        label = "decreasing"
    else:
        label = "slight_change"
    return TrendLabel(label, rel, flips)
