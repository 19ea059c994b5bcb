"""Annual series container, differencing and correlograms."""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .errors import (DegenerateSeriesError, LagRangeError, NumericalDegeneracyError,
                     OrderTooHighError)


@dataclass(frozen=True)
class Series:
    """A named annual series. Missing observations are stored as ``None``."""

    name: str
    start_year: int
    values: tuple

    def __post_init__(self):
        vals = []
        for v in self.values:
            if v is None or (isinstance(v, float) and math.isnan(v)):
                vals.append(None)
                continue
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"series {self.name!r}: non-finite value {v!r}")
            vals.append(v)
        if not vals:
            raise ValueError(f"series {self.name!r} is empty")
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self):
        return len(self.values)

    @property
    def years(self):
        return tuple(range(self.start_year, self.start_year + len(self.values)))

    @property
    def end_year(self):
        return self.start_year + len(self.values) - 1

    def as_array(self):
        """Values as float64 with NaN for missing slots."""
        return np.array([np.nan if v is None else v for v in self.values])


@dataclass(frozen=True)
class Correlogram:
    values: np.ndarray
    kind: str
    n: int

    @property
    def max_lag(self):
        return len(self.values) - 1


def contiguous_run(series):
    """Locate the longest run of present values, preferring the latest on ties.

    Returns ``(offset, values)`` where ``offset`` indexes the first slot of the
    run. An all-missing series gives ``(None, empty array)``.
    """
    best_start, best_len = None, 0
    start = None
    for i, v in enumerate(series.values + (None,)):
        if v is not None:
            if start is None:
                start = i
            continue
        if start is not None:
            if i - start >= best_len:
                best_start, best_len = start, i - start
            start = None
    if best_start is None:
        return None, np.zeros(0)
    run = series.values[best_start:best_start + best_len]
    return best_start, np.array(run, dtype=float)


def contiguous_values(series):
    return contiguous_run(series)[1]


def difference(values, d):
    """d-th order difference; ``d=0`` returns the input unchanged."""
    x = np.asarray(values, dtype=float)
    if d < 0:
        raise ValueError("differencing order must be nonnegative")
    if len(x) <= d:
        raise OrderTooHighError(f"cannot difference {len(x)} values {d} times")
    for _ in range(d):
        x = x[1:] - x[:-1]
    return x


def acf(values, max_lag):
    """Sample autocorrelations at lags 0..max_lag, divisor-n convention."""
    x = np.asarray(values, dtype=float)
    n = len(x)
    if n < 2:
        raise DegenerateSeriesError("need at least 2 values for an autocorrelation")
    if max_lag < 1 or max_lag >= n:
        raise LagRangeError(f"max_lag must lie in [1, {n - 1}], got {max_lag}")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if not denom > 0.0:
        raise DegenerateSeriesError("series has zero variance")
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for k in range(1, max_lag + 1):
        r[k] = (xc[:n - k] @ xc[k:]) / denom
    return Correlogram(values=r, kind="acf", n=n)


def pacf(acf_values, max_lag):
    """Partial autocorrelations by Durbin-Levinson from an ACF correlogram."""
    if acf_values.kind != "acf":
        raise ValueError("pacf expects an ACF correlogram")
    if max_lag < 1 or max_lag > acf_values.max_lag:
        raise LagRangeError(f"max_lag must lie in [1, {acf_values.max_lag}], got {max_lag}")
    out = kernels.durbin_levinson(acf_values.values[:max_lag + 1], max_lag)
    if not np.all(np.isfinite(out)) or np.any(np.abs(out) > 1.0 + 1e-12):
        raise NumericalDegeneracyError(
            "Durbin-Levinson recursion left the unit interval; "
            "the sample is too short or nearly singular for this many lags")
    return Correlogram(values=out, kind="pacf", n=acf_values.n)
