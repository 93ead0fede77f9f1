"""Index reports: a JSON document plus derived CSV and SVG views.

A report holds one or more named series of records. Each record has a
``name`` (layer, subset size, input file), a ``value`` and optional extras
such as ``match_count`` or ``r``. Floats are written with Python's
shortest round-trip repr, so ``json.loads`` recovers every value exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from datetime import datetime, timezone
from pathlib import Path

from .plot import line_chart

__all__ = [
    "TIMESTAMP_KEYS",
    "file_digest",
    "make_report",
    "render_csv",
    "render_json",
    "render_svg",
    "summarize",
    "utc_now",
    "write_views",
]

TIMESTAMP_KEYS = ("started_utc", "finished_utc")


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def summarize(records: list[dict]) -> dict:
    """Min/max of the record values plus the first and last value along the axis."""
    if not records:
        return {}
    values = [rec["value"] for rec in records]
    lo = min(range(len(values)), key=values.__getitem__)
    hi = max(range(len(values)), key=values.__getitem__)
    return {
        "first": values[0],
        "last": values[-1],
        "min": values[lo],
        "min_at": records[lo]["name"],
        "max": values[hi],
        "max_at": records[hi]["name"],
    }


def make_report(
    command: str,
    params: dict,
    inputs: list,
    series: dict[str, list[dict]],
    *,
    started: str | None = None,
    extra: dict | None = None,
) -> dict:
    report = {
        "command": command,
        "params": params,
        "inputs": [{"path": str(p), "sha256": file_digest(p)} for p in inputs],
        "series": [
            {"name": name, "records": recs, "summary": summarize(recs)}
            for name, recs in series.items()
        ],
        "started_utc": started or utc_now(),
        "finished_utc": utc_now(),
    }
    if extra:
        report.update(extra)
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_csv(report: dict) -> str:
    """Flatten every series into rows of ``series,name,<record fields>``."""
    keys: list[str] = []
    for s in report["series"]:
        for rec in s["records"]:
            keys.extend(k for k in rec if k not in keys and k != "name")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "name", *keys])
    for s in report["series"]:
        for rec in s["records"]:
            writer.writerow(
                [s["name"], rec["name"], *(_cell(rec.get(k, "")) for k in keys)]
            )
    return buf.getvalue()


def _cell(v):
    return repr(v) if isinstance(v, float) else v


def render_svg(report: dict, *, x_key: str | None = None, title: str = "", y_label: str = "index") -> str:
    """Chart every series; x is ``record[x_key]`` or a categorical position.

    Categorical positions follow the order in which record names (layer
    names) first appear, so a sparse series lines up with the full ones.
    """
    positions: dict[str, float] = {}
    if x_key is None:
        for s in report["series"]:
            for rec in s["records"]:
                positions.setdefault(str(rec["name"]), float(len(positions) + 1))
    series = []
    for s in report["series"]:
        recs = s["records"]
        if x_key is None:
            xs = [positions[str(rec["name"])] for rec in recs]
        else:
            xs = [float(rec[x_key]) for rec in recs]
        series.append((s["name"], xs, [float(rec["value"]) for rec in recs]))
    x_ticks = [(x, name) for name, x in positions.items()] if x_key is None else None
    return line_chart(
        series, title=title, x_label=x_key or "layer", y_label=y_label, x_ticks=x_ticks
    )


def write_views(report: dict, out: Path | None, formats: set[str], svg_kwargs: dict | None = None) -> str | None:
    """Write the JSON report to ``out`` and requested CSV/SVG views beside it.

    Returns the JSON text when ``out`` is None so the caller can print it.
    """
    text = render_json(report)
    if out is None:
        return text
    out = Path(out)
    out.write_text(text)
    if "csv" in formats:
        out.with_suffix(".csv").write_text(render_csv(report))
    if "svg" in formats:
        out.with_suffix(".svg").write_text(render_svg(report, **(svg_kwargs or {})))
    return None
