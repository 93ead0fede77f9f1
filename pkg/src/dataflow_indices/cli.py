"""Command-line front end.

Subcommands: si, smi, curve, layers, embed, quantize. Index commands print
(or write with ``--out``) a JSON report; ``--format csv`` / ``--format svg``
add views next to the ``--out`` file.

Exit codes: 0 ok, 2 usage or parameter error, 3 unreadable input,
4 invalid data, 5 anything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .datapipe import Series, lag_embed, subset_sample, whiten
from .errors import DataflowError, ParameterError, ParseError
from .indices import (
    DEFAULT_BETA,
    as_targets,
    monotonicity_violations,
    quantize_targets,
    separation_profile,
    smoothness_profile,
)
from .io import load_labels, load_layer_stack, load_matrix, read_csv, select_column, write_csv, write_tensor
from .report import make_report, utc_now, write_views


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _common(p: argparse.ArgumentParser, *, multi_r: bool = False) -> None:
    if multi_r:
        p.add_argument("--r", type=_int_list, default=[1], help="order(s), e.g. 1 or 1,2,3")
    else:
        p.add_argument("--r", type=int, default=1, help="order of the index")
    p.add_argument("--beta", type=float, default=DEFAULT_BETA, help="smoothness coefficient")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker threads (results do not depend on it)")
    p.add_argument("--out", type=Path, default=None, help="JSON report path (stdout if omitted)")
    p.add_argument("--format", action="append", choices=["json", "csv", "svg"], default=None,
                   help="extra views written next to --out; repeatable")
    p.add_argument("--whiten", action="store_true", help="standardise targets before indexing")
    p.add_argument("--input-format", choices=["csv", "tensor"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dataflow-indices",
        description="Separation and smoothness indices for datasets and layer activations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("si", help="separation index of one or more point matrices")
    p.add_argument("data", nargs="+", type=Path)
    p.add_argument("--labels", type=Path, help="label file (one integer column)")
    p.add_argument("--label-column", help="take labels from this column of each data file")
    p.add_argument("--n-classes", type=int, default=None, help="require labels in 1..N")
    _common(p, multi_r=True)

    p = sub.add_parser("smi", help="smoothness index of a point matrix against targets")
    p.add_argument("data", type=Path)
    p.add_argument("--targets", type=Path)
    p.add_argument("--target-column", help="take a scalar target from this column of the data file")
    _common(p, multi_r=True)

    p = sub.add_parser("curve", help="index versus number of shuffled samples")
    p.add_argument("data", type=Path)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--labels", type=Path)
    g.add_argument("--targets", type=Path)
    p.add_argument("--sizes", type=_int_list, required=True, help="comma-separated subset sizes")
    _common(p)

    p = sub.add_parser("layers", help="index of every layer in a manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--test-manifest", type=Path, default=None, help="overlay a second (test-set) stack")
    p.add_argument("--index", choices=["si", "smi"], default=None,
                   help="defaults to si for label manifests and smi for target manifests")
    p.add_argument("--ccr", type=Path, default=None,
                   help="CSV of externally measured rates: layer name, value[, test value]")
    _common(p)

    p = sub.add_parser("embed", help="lag-embed a scalar time series")
    p.add_argument("series", type=Path)
    p.add_argument("--lags", "-n", type=int, required=True)
    p.add_argument("--column", default=None, help="series column (default: the only column)")
    p.add_argument("--interval", default=None, help="e.g. daily, weekly, monthly (recorded only)")
    p.add_argument("--out-x", type=Path, required=True, help=".csv or binary tensor path")
    p.add_argument("--out-y", type=Path, required=True)

    p = sub.add_parser("quantize", help="bin a scalar target into equal-width class labels")
    p.add_argument("targets", type=Path)
    p.add_argument("--levels", type=int, required=True, help="number of levels n_c")
    p.add_argument("--column", default=None)
    p.add_argument("--out", type=Path, required=True, help="label CSV path")
    p.add_argument("--spec-out", type=Path, default=None, help="write y_min/y_max/rho as JSON")
    return parser


# ---------------------------------------------------------------------------


def _formats(args) -> set[str]:
    formats = set(args.format or [])
    if formats - {"json"} and args.out is None:
        raise ParameterError("--format csv/svg needs --out")
    if args.out is not None and args.out.suffix.lower() in (".csv", ".svg"):
        raise ParameterError("--out names the JSON report; use a .json path")
    return formats


def _check_orders(orders: list[int]) -> None:
    if min(orders) < 1:
        raise ParameterError(f"orders must be >= 1, got {orders}")


def _emit(report: dict, args, svg_kwargs: dict | None = None) -> None:
    text = write_views(report, args.out, _formats(args), svg_kwargs)
    if text is not None:
        sys.stdout.write(text)


def _load_targets(args, data_path: Path, column):
    if args.targets is not None:
        Y = as_targets(load_matrix(args.targets, args.input_format))
    elif column is not None:
        table = read_csv(data_path)
        Y = as_targets(table.values[:, select_column(table, column)])
    else:
        raise ParameterError("give --targets or --target-column")
    stats = None
    if args.whiten:
        Y, stats = whiten(Y)
    return Y, stats


def _whiten_info(stats) -> dict | None:
    if stats is None:
        return None
    return {"mean": stats.mean.tolist(), "std": stats.std.tolist()}


def cmd_si(args) -> None:
    started = utc_now()
    _formats(args)
    if (args.labels is None) == (args.label_column is None):
        raise ParameterError("give exactly one of --labels or --label-column")
    _check_orders(args.r)
    max_r = max(args.r)
    inputs = list(args.data)
    shared = None
    if args.labels is not None:
        shared = load_labels(args.labels, args.input_format, n_classes=args.n_classes)
        inputs.append(args.labels)
    series = {}
    for path in args.data:
        if shared is None:
            X = load_matrix(path, args.input_format, drop_column=args.label_column)
            labels = load_labels(path, args.input_format, column=args.label_column, n_classes=args.n_classes)
        else:
            X, labels = load_matrix(path, args.input_format), shared
        counts = separation_profile(X, labels, max_r, threads=args.threads)
        n = X.shape[0]
        records = [
            {"name": f"r={r}", "r": r, "value": int(counts[r - 1]) / n,
             "match_count": int(counts[r - 1]), "n_samples": n}
            for r in args.r
        ]
        series[str(path)] = records
    params = {"r": args.r, "labels": str(args.labels) if args.labels else None,
              "label_column": args.label_column, "n_classes": args.n_classes}
    report = make_report("si", params, inputs, series, started=started)
    _emit(report, args, {"x_key": "r", "title": "Separation index", "y_label": "SI"})


def cmd_smi(args) -> None:
    started = utc_now()
    _formats(args)
    _check_orders(args.r)
    X = load_matrix(args.data, args.input_format, drop_column=args.target_column)
    Y, stats = _load_targets(args, args.data, args.target_column)
    profile = smoothness_profile(X, Y, max(args.r), beta=args.beta, threads=args.threads)
    n = X.shape[0]
    records = [{"name": f"r={r}", "r": r, "value": float(profile[r - 1]), "n_samples": n} for r in args.r]
    inputs = [args.data] + ([args.targets] if args.targets else [])
    params = {"r": args.r, "beta": args.beta, "whiten": args.whiten,
              "target_column": args.target_column}
    extra = {
        "whitening": _whiten_info(stats),
        "monotonicity_violations": monotonicity_violations(profile),
    }
    report = make_report("smi", params, inputs, {str(args.data): records}, started=started, extra=extra)
    _emit(report, args, {"x_key": "r", "title": "Smoothness index", "y_label": "SmI"})


def cmd_curve(args) -> None:
    started = utc_now()
    _formats(args)
    X = load_matrix(args.data, args.input_format)
    stats = None
    if args.labels is not None:
        kind, response = "si", load_labels(args.labels, args.input_format)
    else:
        kind = "smi"
        response, stats = _load_targets(args, args.data, None)
    curve = subset_sample(X, response, args.sizes, args.seed, kind=kind, r=args.r,
                          beta=args.beta, threads=args.threads)
    records = []
    for size, value in curve:
        rec = {"name": str(size), "size": size, "value": value}
        if kind == "si":
            rec["match_count"] = round(value * size)
        records.append(rec)
    params = {"index": kind, "r": args.r, "beta": args.beta if kind == "smi" else None,
              "seed": args.seed, "sizes": sorted(set(args.sizes)), "whiten": args.whiten}
    inputs = [args.data, args.labels if args.labels is not None else args.targets]
    report = make_report(kind, params, inputs, {str(args.data): records}, started=started,
                         extra={"whitening": _whiten_info(stats)})
    report["command"] = "curve"
    label = "SI" if kind == "si" else "SmI"
    _emit(report, args, {"x_key": "size", "title": f"{label} versus number of samples", "y_label": label})


def _layer_records(stack, kind: str, args) -> tuple[list[dict], dict | None]:
    if kind == "si":
        if stack.kind != "labels":
            raise ParameterError("--index si needs a labels manifest")
        response, stats = stack.response, None
    else:
        if stack.kind != "targets":
            raise ParameterError("--index smi needs a targets manifest")
        response, stats = stack.response, None
        if args.whiten:
            response, stats = whiten(response)
    records = []
    for name, X in stack:
        n = X.shape[0]
        if kind == "si":
            count = int(separation_profile(X, response, args.r, threads=args.threads)[-1])
            records.append({"name": name, "value": count / n, "match_count": count})
        else:
            value = float(smoothness_profile(X, response, args.r, beta=args.beta, threads=args.threads)[-1])
            records.append({"name": name, "value": value})
    return records, _whiten_info(stats)


def _read_ccr(path: Path) -> dict[str, list[float]]:
    out: dict[str, list[float]] = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                out[row[0].strip()] = [float(v) for v in row[1:]]
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"{path}: line {lineno}: non-numeric rate") from None
    return out


def cmd_layers(args) -> None:
    started = utc_now()
    _formats(args)
    train = load_layer_stack(args.manifest, args.input_format)
    kind = args.index or ("si" if train.kind == "labels" else "smi")
    records, white = _layer_records(train, kind, args)
    series = {"train": records}
    inputs = [args.manifest, train.response_source, *train.sources]
    if args.test_manifest is not None:
        test = load_layer_stack(args.test_manifest, args.input_format)
        series["test"], _ = _layer_records(test, kind, args)
        inputs += [args.test_manifest, test.response_source, *test.sources]
    if args.ccr is not None:
        rates = _read_ccr(args.ccr)
        inputs.append(args.ccr)
        for col, name in enumerate(["ccr_train", "ccr_test"]):
            recs = [{"name": rec["name"], "value": rates[rec["name"]][col]}
                    for rec in records if rec["name"] in rates and len(rates[rec["name"]]) > col]
            if recs:
                series[name] = recs
    params = {"index": kind, "r": args.r, "beta": args.beta if kind == "smi" else None,
              "whiten": args.whiten}
    report = make_report("layers", params, inputs, series, started=started,
                         extra={"whitening": white})
    label = "SI" if kind == "si" else "SmI"
    _emit(report, args, {"title": f"{label} through layers", "y_label": label})


def _write_matrix(path: Path, arr) -> None:
    if path.suffix.lower() in (".csv", ".txt"):
        write_csv(path, arr)
    else:
        write_tensor(path, arr)


def cmd_embed(args) -> None:
    table = read_csv(args.series)
    if args.column is not None:
        values = table.values[:, select_column(table, args.column)]
    elif table.values.shape[1] == 1:
        values = table.values[:, 0]
    else:
        raise ParameterError(f"{args.series} has {table.values.shape[1]} columns; pick one with --column")
    X, y = lag_embed(Series(values, args.interval), args.lags)
    _write_matrix(args.out_x, X)
    _write_matrix(args.out_y, y)
    json.dump({"rows": X.shape[0], "lags": args.lags, "interval": args.interval,
               "x": str(args.out_x), "y": str(args.out_y)}, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def cmd_quantize(args) -> None:
    table = read_csv(args.targets)
    if args.column is not None:
        y = table.values[:, select_column(table, args.column)]
    elif table.values.shape[1] == 1:
        y = table.values[:, 0]
    else:
        raise ParameterError("multi-output quantization is not supported; pick one --column")
    labels, spec = quantize_targets(y, args.levels)
    write_csv(args.out, labels)
    info = {"n_c": spec.n_c, "y_min": spec.y_min, "y_max": spec.y_max, "rho": spec.rho,
            "counts": np.bincount(labels, minlength=spec.n_c + 1)[1:].tolist()}
    text = json.dumps(info, indent=2, sort_keys=True) + "\n"
    if args.spec_out is not None:
        args.spec_out.write_text(text)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "si": cmd_si,
    "smi": cmd_smi,
    "curve": cmd_curve,
    "layers": cmd_layers,
    "embed": cmd_embed,
    "quantize": cmd_quantize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except DataflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ParseError.exit_code
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
