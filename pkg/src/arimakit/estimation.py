"""Conditional-sum-of-squares ARMA estimation, Ljung-Box diagnostics and
AIC-based order selection."""
from dataclasses import dataclass, field
import math
import re

import numpy as np
from scipy import stats

from . import kernels
from .errors import (ArimaError, DegenerateSeriesError, InsufficientDataError,
                     InvalidParamsError, NonIdentifiableModelError, NonpositiveDofError,
                     NoViableModelError, UnusableSeriesError)
from .optimize import nelder_mead
from .series import acf, contiguous_run, difference

ROOT_MARGIN = 1e-9
SIMPLEX_RTOL = 1e-10
ITERATIONS_PER_PARAM = 500


@dataclass(frozen=True, order=True)
class ArimaOrder:
    p: int
    d: int
    q: int

    def __post_init__(self):
        for name in ("p", "d", "q"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"order component {name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def parse(cls, text):
        """Parse ``"p,d,q"`` (parentheses and spaces tolerated)."""
        parts = [s for s in re.split(r"[,\s]+", text.strip().strip("()")) if s]
        if len(parts) != 3:
            raise ValueError(f"order must look like p,d,q; got {text!r}")
        return cls(*(int(s) for s in parts))

    @property
    def n_params(self):
        """Parameters counted by the information criteria: phi, theta, mu, sigma2."""
        return self.p + self.q + 2

    def __str__(self):
        return f"({self.p},{self.d},{self.q})"


def _inverse_roots(coefs):
    """Reciprocal roots of 1 - c_1 z - ... - c_k z^k (companion eigenvalues)."""
    c = np.asarray(coefs, dtype=float)
    if c.size == 0:
        return np.zeros(0)
    if c.size == 1:
        return c.copy()
    return np.roots(np.r_[1.0, -c])


def roots_outside_unit_circle(coefs, margin=ROOT_MARGIN):
    """True when every root of 1 - sum c_i z^i has modulus > 1 + margin."""
    inv = _inverse_roots(coefs)
    if inv.size == 0:
        return True
    if not np.all(np.isfinite(inv)):
        return False
    return bool(np.max(np.abs(inv)) * (1.0 + margin) < 1.0)


def is_stationary(phi):
    return roots_outside_unit_circle(phi)


def is_invertible(theta):
    return roots_outside_unit_circle(theta)


@dataclass(frozen=True, eq=False)
class ArimaParams:
    """AR coefficients ``phi``, MA coefficients ``theta`` (entering with a minus
    sign), mean ``mu`` of the differenced series and innovation variance."""

    phi: tuple = ()
    theta: tuple = ()
    mu: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        phi = tuple(float(v) for v in np.atleast_1d(np.asarray(self.phi, dtype=float)))
        theta = tuple(float(v) for v in np.atleast_1d(np.asarray(self.theta, dtype=float)))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if not all(math.isfinite(v) for v in phi + theta + (self.mu,)):
            raise InvalidParamsError("parameters must be finite")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise InvalidParamsError(f"sigma2 must be positive, got {self.sigma2}")
        if not is_stationary(phi):
            raise InvalidParamsError(
                "nonstationary: a root of the AR polynomial 1 - phi_1 z - ... lies on or inside "
                "the unit circle")
        if not is_invertible(theta):
            raise InvalidParamsError(
                "noninvertible: a root of the MA polynomial 1 - theta_1 z - ... lies on or inside "
                "the unit circle")

    @property
    def p(self):
        return len(self.phi)

    @property
    def q(self):
        return len(self.theta)

    def to_dict(self):
        return {"phi": list(self.phi), "theta": list(self.theta),
                "mu": self.mu, "sigma2": self.sigma2}

    def __eq__(self, other):
        if not isinstance(other, ArimaParams):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


@dataclass(frozen=True)
class GridCell:
    order: ArimaOrder
    status: str  # "fitted", "skipped" or "failed"
    aic: float = None
    bic: float = None
    reason: str = None


@dataclass(frozen=True, eq=False)
class ArimaFit:
    order: ArimaOrder
    params: ArimaParams
    residuals: np.ndarray
    css: float
    loglik: float
    aic: float
    bic: float
    n_effective: int
    source_years: tuple
    iterations: int = 0
    converged: bool = True
    candidates: tuple = field(default=())

    @property
    def small_sample(self):
        return self.n_effective < 3 * self.order.n_params

    def to_dict(self):
        return {
            "order": {"p": self.order.p, "d": self.order.d, "q": self.order.q},
            "params": self.params.to_dict(),
            "css": self.css,
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "n_effective": self.n_effective,
            "source_years": list(self.source_years),
            "small_sample_warning": self.small_sample,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def css_objective(params, w):
    """Conditional sum of squares of a mean-adjusted ARMA.

    Residuals start at index ``p`` with the presample residuals set to zero.
    Returns ``(sum of squares, residuals)`` where the residual array covers the
    ``len(w) - p`` conditioned periods only.
    """
    w = np.asarray(w, dtype=float)
    if len(w) < params.p + 1:
        raise InsufficientDataError(
            f"css needs at least {params.p + 1} values for p={params.p}, have {len(w)}")
    a = kernels.css_residuals(w - params.mu, np.asarray(params.phi), np.asarray(params.theta))
    a = a[params.p:]
    return float(a @ a), a


def _check_fit_size(n_run, order):
    have = n_run - order.d
    need = order.n_params
    if have < need:
        raise InsufficientDataError(f"insufficient data: need ≥ {need}, have {max(have, 0)}")


def _loglik(css, n):
    sigma2 = css / n
    return sigma2, -0.5 * n * (math.log(2.0 * math.pi * sigma2) + 1.0)


def fit(series, order):
    """Fit ARIMA(p, d, q) by conditional sum of squares.

    Uses the longest contiguous run of observed values. For d = 0 the mean is
    estimated jointly with the ARMA coefficients; for d > 0 it is fixed at
    zero. The simplex starts at phi = theta = 0 (and mu at the sample mean);
    nonstationary or noninvertible candidates are rejected by an infinite
    penalty. Deterministic for fixed inputs.
    """
    if not isinstance(order, ArimaOrder):
        order = ArimaOrder(*order)
    offset, run = contiguous_run(series)
    if run.size == 0:
        raise UnusableSeriesError(f"series {series.name!r} has no observed values")
    _check_fit_size(len(run), order)
    w = difference(run, order.d)
    m = len(w)
    # the mean is estimated only for undifferenced data; differenced models carry no drift
    with_mean = order.d == 0
    if with_mean and np.ptp(w) == 0.0:
        raise DegenerateSeriesError("series is constant")
    p, q = order.p, order.q

    if p + q == 0:
        phi = theta = np.zeros(0)
        mu = float(w.mean()) if with_mean else 0.0
        nit, converged = 0, True
    else:
        def objective(x):
            phi, theta = x[:p], x[p:p + q]
            if not (is_stationary(phi) and is_invertible(theta)):
                return math.inf
            z = w - x[-1] if with_mean else w
            a = kernels.css_residuals(z, phi, theta)
            return float(a @ a)

        x0 = np.zeros(p + q)
        steps = np.full(p + q, 0.1)
        if with_mean:
            x0 = np.r_[x0, w.mean()]
            steps = np.r_[steps, 0.1 * w.std()]
        res = nelder_mead(objective, x0, steps,
                          maxiter=ITERATIONS_PER_PARAM * (p + q + 1), rtol=SIMPLEX_RTOL)
        if res.all_infeasible:
            raise NonIdentifiableModelError(
                f"every simplex vertex violates stationarity/invertibility for order {order}")
        x, nit, converged = res.x, res.nit, res.converged
        phi, theta = x[:p], x[p:p + q]
        mu = float(x[-1]) if with_mean else 0.0

    a = kernels.css_residuals(w - mu, phi, theta)
    css = float(a @ a)
    if not css > 0.0:
        raise NonIdentifiableModelError(
            f"order {order} reproduces the data exactly; innovation variance is zero")
    sigma2, loglik = _loglik(css, m)
    k = order.n_params
    first_year = series.start_year + offset
    return ArimaFit(
        order=order,
        params=ArimaParams(phi=phi, theta=theta, mu=mu, sigma2=sigma2),
        residuals=a,
        css=css,
        loglik=loglik,
        aic=-2.0 * loglik + 2.0 * k,
        bic=-2.0 * loglik + math.log(m) * k,
        n_effective=m,
        source_years=(first_year, first_year + len(run) - 1),
        iterations=nit,
        converged=converged,
    )


def fixed_fit(series, order, params):
    """An ArimaFit at given parameters (no optimisation); ``params.sigma2`` is kept.

    Handy for forecasting from a known model.
    """
    if not isinstance(order, ArimaOrder):
        order = ArimaOrder(*order)
    if (params.p, params.q) != (order.p, order.q):
        raise ValueError(f"params have (p, q) = ({params.p}, {params.q}), order is {order}")
    offset, run = contiguous_run(series)
    if run.size == 0:
        raise UnusableSeriesError(f"series {series.name!r} has no observed values")
    w = difference(run, order.d)
    if len(w) < order.p + 1:
        raise InsufficientDataError(f"insufficient data: need ≥ {order.p + 1}, have {len(w)}")
    m = len(w)
    a = kernels.css_residuals(w - params.mu, np.asarray(params.phi), np.asarray(params.theta))
    css = float(a @ a)
    loglik = (-0.5 * m * math.log(2.0 * math.pi * params.sigma2)
              - 0.5 * css / params.sigma2)
    k = order.n_params
    first_year = series.start_year + offset
    return ArimaFit(order=order, params=params, residuals=a, css=css, loglik=loglik,
                    aic=-2.0 * loglik + 2.0 * k, bic=-2.0 * loglik + math.log(m) * k,
                    n_effective=m, source_years=(first_year, first_year + len(run) - 1))


def ljung_box(residuals, lags, fitted_count=0):
    """Ljung-Box portmanteau statistic; returns ``(Q, dof)``."""
    if lags <= fitted_count:
        raise NonpositiveDofError(
            f"lags ({lags}) must exceed the number of fitted ARMA coefficients ({fitted_count})")
    x = np.asarray(residuals, dtype=float)
    n = len(x)
    r = acf(x, lags).values[1:]
    k = np.arange(1, lags + 1)
    q_stat = n * (n + 2) * float(np.sum(r * r / (n - k)))
    return q_stat, lags - fitted_count


@dataclass(frozen=True)
class LjungBoxResult:
    statistic: float
    dof: int
    lags: int
    p_value: float


def residual_diagnostics(fit_result, max_lags=10):
    """Ljung-Box on the conditioned residuals of a fit.

    Uses ``min(max_lags, n - 1)`` lags. Returns ``(result, None)`` or
    ``(None, reason)`` when the sample is too small or degenerate.
    """
    p, q = fit_result.order.p, fit_result.order.q
    res = fit_result.residuals[p:]
    lags = min(max_lags, len(res) - 1)
    if lags <= p + q:
        return None, (f"too few residuals ({len(res)}) for a Ljung-Box test "
                      f"with {p + q} fitted ARMA coefficients")
    try:
        stat, dof = ljung_box(res, lags, p + q)
    except ArimaError as exc:
        return None, str(exc)
    return LjungBoxResult(stat, dof, lags, float(stats.chi2.sf(stat, dof))), None


def _selection_key(f):
    o = f.order
    return (f.aic, o.p + o.q, o.d, o.p)


def select_model(series, max_p=0, max_q=0, d_candidates=(0,), orders=None):
    """Fit every (p, d, q) cell of the grid and return the fit with smallest AIC.

    The grid is p = 0..max_p, q = 0..max_q, d in ``d_candidates``, unless an
    explicit iterable of ``orders`` is given. Ties go to the smaller p + q,
    then the smaller d, then the smaller p. Cells without enough data are
    skipped. The returned fit's ``candidates`` lists every cell with its AIC or
    the reason it was not fitted.
    """
    if orders is None:
        d_values = sorted(set(int(d) for d in d_candidates))
        if max_p < 0 or max_q < 0:
            raise ValueError("max_p and max_q must be nonnegative")
        orders = [ArimaOrder(p, d, q) for d in d_values
                  for p in range(max_p + 1) for q in range(max_q + 1)]
    else:
        orders = [o if isinstance(o, ArimaOrder) else ArimaOrder(*o) for o in orders]
    if not orders:
        raise ValueError("empty selection grid")
    _, run = contiguous_run(series)
    cells, fits, failures = [], [], []
    for order in orders:
        try:
            if run.size == 0:
                raise UnusableSeriesError(f"series {series.name!r} has no observed values")
            _check_fit_size(len(run), order)
        except ArimaError as exc:
            cells.append(GridCell(order, "skipped", reason=str(exc)))
            failures.append((order, str(exc)))
            continue
        try:
            f = fit(series, order)
        except ArimaError as exc:
            cells.append(GridCell(order, "failed", reason=str(exc)))
            failures.append((order, str(exc)))
            continue
        cells.append(GridCell(order, "fitted", aic=f.aic, bic=f.bic))
        fits.append(f)
    if not fits:
        raise NoViableModelError(failures)
    best = min(fits, key=_selection_key)
    object.__setattr__(best, "candidates", tuple(cells))
    return best
