"""Box-Jenkins ARIMA toolkit: differencing, correlograms, CSS estimation,
Ljung-Box diagnostics, AIC selection and psi-weight interval forecasts."""
__version__ = "0.1.0"

from ._backend import backend_name
from .datasets import Dataset, builtin, read_csv, write_csv
from .errors import *  # noqa: F401,F403
from .estimation import (ArimaFit, ArimaOrder, ArimaParams, css_objective, fit, ljung_box,
                         residual_diagnostics, select_model)
from .forecasting import Forecast, TrendLabel, classify_trend, forecast, psi_weights
from .series import Correlogram, Series, acf, contiguous_values, difference, pacf
from .synthgen import SimSpec, simulate
