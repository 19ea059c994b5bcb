"""Per-series pipeline (fit -> diagnostics -> forecast -> trend) and report assembly.

A failing series becomes a row with ``status == "failed"`` and a reason; it
never aborts the rest of the report.
"""
import json
import re

from .errors import ArimaError
from .estimation import ArimaOrder, fit, residual_diagnostics, select_model
from .forecasting import DEFAULT_HORIZON, TrendThresholds, classify_trend, forecast
from .series import contiguous_run

SCHEMA_VERSION = "1.0"


def _empty_row(series):
    return {
        "series": series.name,
        "status": "ok",
        "reason": None,
        "source_years": None,
        "order": None,
        "params": None,
        "n_effective": None,
        "small_sample_warning": None,
        "fit": None,
        "diagnostics": None,
        "selection": None,
        "forecast": None,
        "trend": None,
    }


def _order_dict(order):
    return {"p": order.p, "d": order.d, "q": order.q}


def analyze_series(series, order=None, grid=None, horizon=DEFAULT_HORIZON,
                   thresholds=TrendThresholds(), with_forecast=True):
    """Run the pipeline for one series and return a JSON-ready row dict.

    Exactly one of ``order`` (an ArimaOrder) or ``grid`` (a dict with
    ``max_p``, ``max_q``, ``d_values``) selects how the model is chosen.
    """
    row = _empty_row(series)
    try:
        if grid is not None:
            result = select_model(series, grid["max_p"], grid["max_q"], grid["d_values"])
            row["selection"] = [
                {"order": _order_dict(c.order), "status": c.status, "aic": c.aic,
                 "bic": c.bic, "reason": c.reason}
                for c in result.candidates
            ]
        else:
            result = fit(series, order if order is not None else ArimaOrder(1, 0, 1))
    except ArimaError as exc:
        row["status"] = "failed"
        row["reason"] = str(exc)
        if getattr(exc, "failures", None):
            row["selection"] = [
                {"order": _order_dict(o), "status": "skipped", "aic": None, "bic": None,
                 "reason": reason}
                for o, reason in exc.failures
            ]
        return row

    info = result.to_dict()
    row["source_years"] = info["source_years"]
    row["order"] = info["order"]
    row["params"] = info["params"]
    row["n_effective"] = info["n_effective"]
    row["small_sample_warning"] = info["small_sample_warning"]
    row["fit"] = {k: info[k] for k in ("css", "loglik", "aic", "bic", "iterations", "converged")}

    lb, why = residual_diagnostics(result)
    row["diagnostics"] = {
        "ljung_box": None if lb is None else {
            "statistic": lb.statistic, "dof": lb.dof, "lags": lb.lags, "p_value": lb.p_value},
        "note": why,
    }

    if with_forecast:
        try:
            fc = forecast(result, series, horizon)
        except ArimaError as exc:
            row["status"] = "failed"
            row["reason"] = f"forecast: {exc}"
            return row
        _, run = contiguous_run(series)
        row["forecast"] = fc.to_dict()
        trend = classify_trend(run[-1], fc, thresholds)
        row["trend"] = dict(trend.to_dict(), thresholds=thresholds.to_dict())
    return row


def build_report(command, dataset, source, rows, settings):
    labels = {}
    for r in rows:
        if r["trend"] is not None:
            labels[r["trend"]["label"]] = labels.get(r["trend"]["label"], 0) + 1
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "dataset": {"source": source, "title": dataset.title, "years": dataset.years},
        "settings": settings,
        "rows": rows,
        "summary": {
            "series": len(rows),
            "failed": sum(r["status"] == "failed" for r in rows),
            "small_sample_warnings": sum(bool(r["small_sample_warning"]) for r in rows),
            "labels": dict(sorted(labels.items())),
        },
    }


def dumps(obj):
    """Deterministic JSON text (fixed key order, no NaN/inf, trailing newline)."""
    return json.dumps(obj, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def slugify(name):
    slug = re.sub(r"[^0-9a-z]+", "_", name.lower()).strip("_")
    return slug or "series"


def plot_rows(series, row):
    """Rows ``(year, kind, value, lower95, upper95)`` for plotting; observed first."""
    out = []
    for year, v in zip(series.years, series.values):
        out.append((year, "observed", v, None, None))
    fc = row.get("forecast")
    if fc:
        for year, pt, lo, hi in zip(fc["years"], fc["points"], fc["lower95"], fc["upper95"]):
            out.append((year, "forecast", pt, lo, hi))
    return out


def format_table(headers, rows):
    """Plain fixed-width text table."""
    cells = [[("" if c is None else str(c)) for c in r] for r in rows]
    widths = [len(h) for h in headers]
    for r in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    sep = "  ".join("-" * w for w in widths)
    body = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join([line, sep] + body)


def load_schema():
    """The JSON schema every ``--json`` output conforms to."""
    from importlib import resources
    return json.loads(resources.files("arimakit").joinpath("schema/report.schema.json")
                      .read_text(encoding="utf-8"))
