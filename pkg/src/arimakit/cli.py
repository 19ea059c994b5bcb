"""Command-line interface.

Exit codes: 0 success, 1 at least one series failed, 2 usage or input error.
"""
import argparse
import csv
import os
import sys

from . import __version__
from .datasets import TABLE_IDS, Dataset, _format_value, builtin, read_csv, write_csv
from .errors import ArimaError
from .estimation import ArimaOrder, ArimaParams
from .forecasting import DEFAULT_HORIZON, TrendThresholds
from .report import analyze_series, build_report, dumps, format_table, plot_rows, slugify
from .synthgen import SimSpec, simulate

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x, digits=6):
    if x is None:
        return "-"
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_fmt(v, digits) for v in x) + ")"
    if isinstance(x, float):
        return f"{x:.{digits}g}"
    return str(x)


def _order_str(o):
    return f"({o['p']},{o['d']},{o['q']})"


def _load_dataset(args):
    if args.csv is not None:
        try:
            if args.csv == "-":
                data = sys.stdin.buffer.read()
            else:
                with open(args.csv, "rb") as fh:
                    data = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.csv}: {exc.strerror}") from None
        label = "stdin" if args.csv == "-" else os.path.splitext(os.path.basename(args.csv))[0]
        try:
            return read_csv(data, title=label), f"csv:{args.csv}", label
        except ArimaError as exc:
            raise UsageError(f"{args.csv}: {exc}") from None
    table = args.builtin or "deaths"
    return builtin(table), f"builtin:{table}", table


def _select(dataset, names):
    if not names:
        return list(dataset.series)
    chosen = []
    for name in names:
        try:
            chosen.append(dataset.get(name))
        except KeyError:
            raise UsageError(f"unknown series {name!r}; available: "
                             + "; ".join(dataset.names)) from None
    return chosen


def _parse_d_values(text):
    try:
        return sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parse_order(text):
    try:
        return ArimaOrder.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _model_choice(args):
    if args.max_p is not None or args.max_q is not None:
        if args.order is not None:
            raise UsageError("--order cannot be combined with --max-p/--max-q")
        grid = {"max_p": args.max_p or 0, "max_q": args.max_q or 0, "d_values": args.d_values}
        return None, grid, {"mode": "select", "grid": grid}
    order = args.order or ArimaOrder(1, 0, 1)
    return order, None, {"mode": "order", "order": {"p": order.p, "d": order.d, "q": order.q}}


def _write_plot_data(directory, prefix, series_list, rows):
    os.makedirs(directory, exist_ok=True)
    for s, row in zip(series_list, rows):
        path = os.path.join(directory, f"{prefix}__{slugify(s.name)}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["year", "kind", "value", "lower95", "upper95"])
            for rec in plot_rows(s, row):
                w.writerow([rec[0], rec[1]] + [_format_value(v) for v in rec[2:]])


def _exit_code(rows):
    return EXIT_PARTIAL if any(r["status"] == "failed" for r in rows) else EXIT_OK


def _print_fit_rows(rows, out):
    table = []
    for r in rows:
        if r["status"] == "failed" and r["params"] is None:
            table.append([r["series"], "FAILED"] + [""] * 8)
            continue
        lb = r["diagnostics"]["ljung_box"] if r["diagnostics"] else None
        table.append([
            r["series"], _order_str(r["order"]), _fmt(r["params"]["phi"], 4),
            _fmt(r["params"]["theta"], 4), _fmt(r["params"]["mu"]), _fmt(r["params"]["sigma2"]),
            r["n_effective"], _fmt(r["fit"]["aic"]),
            "-" if lb is None else f"{lb['statistic']:.3g} ({lb['dof']})",
            "small-sample" if r["small_sample_warning"] else "",
        ])
    out.write(format_table(["series", "order", "phi", "theta", "mu", "sigma2", "n_eff",
                            "AIC", "LB Q (dof)", "warning"], table) + "\n")
    for r in rows:
        if r["status"] == "failed":
            out.write(f"error: {r['series']}: {r['reason']}\n")
        if r["selection"]:
            out.write(f"\nAIC table for {r['series']}:\n")
            out.write(format_table(
                ["order", "status", "AIC", "BIC", "note"],
                [[_order_str(c["order"]), c["status"], _fmt(c["aic"]), _fmt(c["bic"]),
                  c["reason"] or ""] for c in r["selection"]]) + "\n")
        if r["small_sample_warning"]:
            k = r["order"]["p"] + r["order"]["q"] + 2
            out.write(f"warning: {r['series']}: n_effective={r['n_effective']} is below "
                      f"3 x {k} parameters; estimates are fragile\n")


def cmd_fit(args, out):
    dataset, source, _ = _load_dataset(args)
    chosen = _select(dataset, args.series)
    order, grid, settings = _model_choice(args)
    rows = [analyze_series(s, order, grid, with_forecast=False) for s in chosen]
    if args.json:
        out.write(dumps(build_report("fit", dataset, source, rows, settings)))
    else:
        _print_fit_rows(rows, out)
    return _exit_code(rows)


def _print_forecasts(rows, out):
    for r in rows:
        out.write(f"\n== {r['series']}")
        if r["status"] == "failed":
            out.write(f": FAILED: {r['reason']}\n")
            continue
        fc, tr = r["forecast"], r["trend"]
        out.write(f"  ARIMA{_order_str(r['order'])}, years used "
                  f"{r['source_years'][0]}-{r['source_years'][1]}, "
                  f"trend {tr['label']} (R={tr['relative_change']:.3f}, "
                  f"S={tr['sign_changes']})"
                  + (", small-sample warning" if r["small_sample_warning"] else "") + "\n")
        out.write(format_table(
            ["year", "forecast", "lower95", "upper95"],
            [[y, f"{p:.2f}", f"{lo:.2f}", f"{hi:.2f}"]
             for y, p, lo, hi in zip(fc["years"], fc["points"], fc["lower95"], fc["upper95"])])
            + "\n")


def cmd_forecast(args, out):
    if args.horizon < 1:
        raise UsageError("--horizon must be at least 1")
    dataset, source, prefix = _load_dataset(args)
    chosen = _select(dataset, args.series)
    order, grid, settings = _model_choice(args)
    settings = dict(settings, horizon=args.horizon,
                    trend_thresholds=TrendThresholds().to_dict())
    rows = [analyze_series(s, order, grid, horizon=args.horizon) for s in chosen]
    if args.plot_data:
        _write_plot_data(args.plot_data, prefix, chosen, rows)
    if args.json:
        out.write(dumps(build_report("forecast", dataset, source, rows, settings)))
    else:
        _print_forecasts(rows, out)
    return _exit_code(rows)


def run_report(table_id, horizon=DEFAULT_HORIZON):
    """Imposed ARIMA(1,0,1) over one built-in table; returns (dataset, rows, report)."""
    dataset = builtin(table_id)
    order = ArimaOrder(1, 0, 1)
    settings = {"mode": "order", "order": {"p": 1, "d": 0, "q": 1}, "horizon": horizon,
                "trend_thresholds": TrendThresholds().to_dict()}
    rows = [analyze_series(s, order, horizon=horizon) for s in dataset.series]
    return dataset, rows, build_report("report", dataset, f"builtin:{table_id}", rows, settings)


def cmd_report(args, out):
    tables = TABLE_IDS if args.table == "all" else (args.table,)
    reports, all_rows = [], []
    for t in tables:
        dataset, rows, rep = run_report(t, args.horizon)
        reports.append(rep)
        all_rows.extend(rows)
        if args.plot_data:
            _write_plot_data(args.plot_data, t, dataset.series, rows)
    if args.json:
        out.write(dumps(reports[0] if len(reports) == 1 else
                        {"schema_version": reports[0]["schema_version"],
                         "command": "report", "reports": reports}))
    else:
        for rep in reports:
            out.write(f"\n{rep['dataset']['title']} ({rep['dataset']['source']}), "
                      f"ARIMA(1,0,1), forecast "
                      f"{rep['dataset']['years'][-1] + 1}-"
                      f"{rep['dataset']['years'][-1] + args.horizon}\n")
            table = []
            for r in rep["rows"]:
                if r["status"] == "failed":
                    table.append([r["series"], "unusable", "-", "-", "-", r["reason"]])
                    continue
                tr = r["trend"]
                table.append([r["series"], tr["label"], f"{tr['relative_change']:+.3f}",
                              tr["sign_changes"], f"{r['forecast']['points'][-1]:.1f}",
                              "small-sample" if r["small_sample_warning"] else ""])
            out.write(format_table(["series", "trend", "R", "S", "final", "note"], table) + "\n")
    return _exit_code(all_rows)


def cmd_simulate(args, out):
    try:
        params = ArimaParams(phi=args.phi, theta=args.theta, mu=args.mu, sigma2=args.sigma2)
        spec = SimSpec(params=params, n=args.n, d=args.d, burn_in=args.burn_in, seed=args.seed)
    except (ArimaError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    s = simulate(spec, name=args.name, start_year=args.start_year)
    if args.json:
        out.write(dumps({
            "schema_version": "1.0",
            "command": "simulate",
            "spec": {"phi": list(params.phi), "theta": list(params.theta), "mu": params.mu,
                     "sigma2": params.sigma2, "d": spec.d, "n": spec.n,
                     "burn_in": spec.burn_in, "seed": spec.seed},
            "series": {"name": s.name, "start_year": s.start_year, "values": list(s.values)},
        }))
    else:
        write_csv(Dataset(title=s.name, start_year=s.start_year, series=[s]), out)
    return EXIT_OK


def _add_input(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=TABLE_IDS,
                     help="use one of the embedded tables (default: deaths)")
    src.add_argument("--csv", metavar="PATH", help="wide CSV file, '-' for standard input")
    p.add_argument("--series", action="append", metavar="NAME",
                   help="series to process (repeatable; default: all)")


def _add_model(p):
    p.add_argument("--order", type=_parse_order, metavar="P,D,Q",
                   help="fixed order (default 1,0,1)")
    p.add_argument("--max-p", type=int, help="select by AIC over p = 0..MAX_P")
    p.add_argument("--max-q", type=int, help="select by AIC over q = 0..MAX_Q")
    p.add_argument("--d-values", type=_parse_d_values, default=[0], metavar="D[,D...]",
                   help="differencing orders to try when selecting (default 0)")


def build_parser():
    parser = argparse.ArgumentParser(prog="arimakit",
                                     description="ARIMA fitting and forecasting for annual series")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="estimate ARIMA models")
    _add_input(p)
    _add_model(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("forecast", help="forecast with 95%% intervals")
    _add_input(p)
    _add_model(p)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--plot-data", metavar="DIR", help="write observed+forecast CSV per series")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("report", help="ARIMA(1,0,1) trend report over a built-in table")
    p.add_argument("table", choices=TABLE_IDS + ("all",))
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--plot-data", metavar="DIR")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("simulate", help="emit a seeded synthetic series as CSV")
    p.add_argument("--phi", type=float, nargs="*", default=[])
    p.add_argument("--theta", type=float, nargs="*", default=[])
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="simulated")
    p.add_argument("--start-year", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "horizon", 1) < 1:
        print("arimakit: error: --horizon must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"arimakit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
