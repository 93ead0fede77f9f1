"""Static SVG line charts, one ``<polyline>`` per data series.

Output depends only on the input numbers, so charts can be golden-file tested.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 60, 150, 40, 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") if v != int(v) else str(int(v))


def _scale(lo: float, hi: float, a: float, b: float):
    span = hi - lo or 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def line_chart(
    series: list[tuple[str, list[float], list[float]]],
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    x_ticks: list[tuple[float, str]] | None = None,
) -> str:
    """Render ``(label, xs, ys)`` series as an SVG document string.

    The y axis always covers [0, 1] and widens to include every value.
    """
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x_lo, x_hi = (min(xs_all), max(xs_all)) if xs_all else (0.0, 1.0)
    y_lo, y_hi = min([0.0, *ys_all]), max([1.0, *ys_all])
    px = _scale(x_lo, x_hi, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    py = _scale(y_lo, y_hi, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox=f"0 0 {WIDTH} {HEIGHT}",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    if title:
        ET.SubElement(svg, "text", {"x": str(WIDTH // 2), "y": "20", "text-anchor": "middle"}).text = title

    axes = ET.SubElement(svg, "g", {"stroke": "black", "stroke-width": "1"})
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    ET.SubElement(axes, "line", x1=str(x0), y1=str(y0), x2=str(x1), y2=str(y0))
    ET.SubElement(axes, "line", x1=str(x0), y1=str(y0), x2=str(x0), y2=str(y1))

    labels = ET.SubElement(svg, "g", {"font-size": "11", "font-family": "sans-serif"})
    for i in range(5):
        v = y_lo + (y_hi - y_lo) * i / 4
        ET.SubElement(
            labels, "text", {"x": str(x0 - 6), "y": f"{py(v) + 4:.2f}", "text-anchor": "end"}
        ).text = _fmt(v)
    if x_ticks is None:
        x_ticks = [(x, _fmt(x)) for x in sorted(set(xs_all))]
    for x, text in x_ticks:
        ET.SubElement(
            labels,
            "text",
            {
                "x": f"{px(x):.2f}",
                "y": str(y0 + 14),
                "text-anchor": "end",
                "transform": f"rotate(-45 {px(x):.2f} {y0 + 14})",
            },
        ).text = text
    if x_label:
        ET.SubElement(
            labels, "text", {"x": str((x0 + x1) // 2), "y": str(HEIGHT - 4), "text-anchor": "middle"}
        ).text = x_label
    if y_label:
        ET.SubElement(
            labels,
            "text",
            {"x": "14", "y": str((y0 + y1) // 2), "text-anchor": "middle",
             "transform": f"rotate(-90 14 {(y0 + y1) // 2})"},
        ).text = y_label

    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        ET.SubElement(
            svg, "polyline", {"points": points, "fill": "none", "stroke": color, "stroke-width": "2"}
        )
        ly = MARGIN_TOP + 16 * i
        ET.SubElement(
            svg, "line",
            {"x1": str(x1 + 10), "y1": str(ly), "x2": str(x1 + 30), "y2": str(ly), "stroke": color, "stroke-width": "2"},
        )
        ET.SubElement(
            svg, "text", {"x": str(x1 + 36), "y": str(ly + 4), "font-size": "11", "font-family": "sans-serif"}
        ).text = label

    ET.indent(svg)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
