"""Hand-rolled SVG plots.

Text output means golden-file tests can compare bytes, so everything
here is deterministic: fixed canvas, fixed palette, fixed number
formatting, no timestamps.  Three kinds: line, log_line (log y, points
at or below zero are dropped), heatmap.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .csvout import parse_csv


class SchemaMismatch(ValueError):
    """CSV columns or values do not fit the requested plot."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str                  # line | log_line | heatmap
    x: str
    y: str
    value: str | None = None   # heatmap color column
    series: str | None = None  # line-plot grouping column
    title: str = ""


DEFAULT_PLOTS = {
    "ber_sweep": PlotSpec("log_line", "snr_db", "ber", series="code",
                          title="bit error rate vs snr"),
    "interleaver_compare": PlotSpec("log_line", "burst_rate", "ber",
                                    series="interleaver",
                                    title="bit error rate vs burst rate"),
    "mac_compare": PlotSpec("line", "n_nodes", "delivered_norm",
                            series="protocol",
                            title="delivery ratio vs network size"),
    "snr_map": PlotSpec("heatmap", "frequency_khz", "distance_m",
                        value="snr_db", title="snr over range and frequency"),
}

W, H = 640, 440
ML, MR, MT, MB = 78, 24, 42, 54
PW, PH = W - ML - MR, H - MT - MB

PALETTE = ["#1f6fb2", "#d1495b", "#3a8f5d", "#8a5fb0", "#c78a2d", "#4f5d75"]

HEAT_STOPS = [
    (68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37),
]


def _f(v: float) -> str:
    return f"{v:.2f}"


def _num(row: list[str], idx: int, col: str) -> float:
    try:
        return float(row[idx])
    except (ValueError, IndexError):
        raise SchemaMismatch(f"column {col!r} holds non-numeric data") from None


def _col_index(columns: list[str], name: str) -> int:
    try:
        return columns.index(name)
    except ValueError:
        raise SchemaMismatch(
            f"column {name!r} not in CSV header {columns}"
        ) from None


def _heat_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(HEAT_STOPS) - 1)
    i = min(int(pos), len(HEAT_STOPS) - 2)
    frac = pos - i
    a, b = HEAT_STOPS[i], HEAT_STOPS[i + 1]
    rgb = tuple(round(a[c] + (b[c] - a[c]) * frac) for c in range(3))
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.0f}" y="24" text-anchor="middle" font-size="15">'
        f"{title}</text>",
    ]


def _axes(parts: list[str], xlabel: str, ylabel: str) -> None:
    parts.append(
        f'<line x1="{ML}" y1="{MT + PH}" x2="{ML + PW}" y2="{MT + PH}" stroke="black"/>'
    )
    parts.append(f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{MT + PH}" stroke="black"/>')
    parts.append(
        f'<text x="{ML + PW / 2:.0f}" y="{H - 12}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="20" y="{MT + PH / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {MT + PH / 2:.0f})">{ylabel}</text>'
    )


def render_plot(columns: list[str], rows: list[list[str]], spec: PlotSpec) -> str:
    if spec.kind not in ("line", "log_line", "heatmap"):
        raise SchemaMismatch(f"unknown plot kind {spec.kind!r}")
    if not rows:
        raise SchemaMismatch("no data rows")
    if spec.kind == "heatmap":
        return _render_heatmap(columns, rows, spec)
    return _render_lines(columns, rows, spec)


def _render_lines(columns, rows, spec: PlotSpec) -> str:
    xi = _col_index(columns, spec.x)
    yi = _col_index(columns, spec.y)
    si = _col_index(columns, spec.series) if spec.series else None

    groups: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        key = row[si] if si is not None else ""
        groups.setdefault(key, []).append(
            (_num(row, xi, spec.x), _num(row, yi, spec.y))
        )

    logy = spec.kind == "log_line"
    pts_all = [
        (x, y) for pts in groups.values() for x, y in pts if not logy or y > 0
    ]
    xs = [p[0] for p in pts_all]
    if logy:
        ys = [math.log10(p[1]) for p in pts_all]
    else:
        ys = [p[1] for p in pts_all]
    xmin, xmax = (min(xs), max(xs)) if xs else (0.0, 1.0)
    ymin, ymax = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if xmax == xmin:
        xmin, xmax = xmin - 0.5, xmax + 0.5
    if ymax == ymin:
        ymin, ymax = ymin - 0.5, ymax + 0.5
    if logy:
        ymin, ymax = math.floor(ymin), math.ceil(ymax)
        if ymax == ymin:
            ymax += 1

    def px(x: float) -> float:
        return ML + (x - xmin) / (xmax - xmin) * PW

    def py(y: float) -> float:
        return MT + PH - (y - ymin) / (ymax - ymin) * PH

    parts = _svg_open(spec.title or f"{spec.y} vs {spec.x}")
    _axes(parts, spec.x, f"{spec.y} (log10)" if logy else spec.y)

    for tx in _ticks(xmin, xmax):
        parts.append(
            f'<text x="{px(tx):.2f}" y="{MT + PH + 18}" text-anchor="middle">'
            f"{tx:.4g}</text>"
        )
    if logy:
        yticks = list(range(int(ymin), int(ymax) + 1))
        ylabels = [f"1e{t}" for t in yticks]
    else:
        yticks = _ticks(ymin, ymax)
        ylabels = [f"{t:.4g}" for t in yticks]
    for t, lab in zip(yticks, ylabels):
        parts.append(
            f'<text x="{ML - 6}" y="{py(t) + 4:.2f}" text-anchor="end">{lab}</text>'
        )
        parts.append(
            f'<line x1="{ML}" y1="{py(t):.2f}" x2="{ML + PW}" y2="{py(t):.2f}" '
            f'stroke="#dddddd"/>'
        )

    for gi, (key, pts) in enumerate(groups.items()):
        color = PALETTE[gi % len(PALETTE)]
        keep = [(x, y) for x, y in pts if not logy or y > 0]
        coords = " ".join(
            f"{px(x):.2f},{py(math.log10(y) if logy else y):.2f}" for x, y in keep
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{coords}"/>'
        )
        if spec.series:
            ly = MT + 14 + 16 * gi
            parts.append(
                f'<line x1="{ML + PW - 120}" y1="{ly - 4}" x2="{ML + PW - 100}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>'
            )
            parts.append(f'<text x="{ML + PW - 94}" y="{ly}">{key}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_heatmap(columns, rows, spec: PlotSpec) -> str:
    if not spec.value:
        raise SchemaMismatch("heatmap needs a value column")
    xi = _col_index(columns, spec.x)
    yi = _col_index(columns, spec.y)
    vi = _col_index(columns, spec.value)

    data = [
        (_num(r, xi, spec.x), _num(r, yi, spec.y), _num(r, vi, spec.value))
        for r in rows
    ]
    xvals = sorted({d[0] for d in data})
    yvals = sorted({d[1] for d in data})
    vmin = min(d[2] for d in data)
    vmax = max(d[2] for d in data)
    span = vmax - vmin or 1.0
    cw = PW / len(xvals)
    ch = PH / len(yvals)
    xpos = {v: i for i, v in enumerate(xvals)}
    ypos = {v: i for i, v in enumerate(yvals)}

    parts = _svg_open(spec.title or f"{spec.value} over {spec.x} and {spec.y}")
    _axes(parts, spec.x, spec.y)
    # one cell per CSV row; y axis runs bottom-up
    for x, y, v in data:
        cx = ML + xpos[x] * cw
        cy = MT + PH - (ypos[y] + 1) * ch
        parts.append(
            f'<rect class="cell" x="{_f(cx)}" y="{_f(cy)}" width="{_f(cw)}" '
            f'height="{_f(ch)}" fill="{_heat_color((v - vmin) / span)}"/>'
        )
    for v in xvals[:: max(1, len(xvals) // 6)]:
        parts.append(
            f'<text x="{_f(ML + (xpos[v] + 0.5) * cw)}" y="{MT + PH + 18}" '
            f'text-anchor="middle">{v:.4g}</text>'
        )
    for v in yvals[:: max(1, len(yvals) // 6)]:
        parts.append(
            f'<text x="{ML - 6}" y="{_f(MT + PH - (ypos[v] + 0.5) * ch + 4)}" '
            f'text-anchor="end">{v:.4g}</text>'
        )
    # color key, low to high
    for i in range(101):
        parts.append(
            f'<rect x="{_f(ML + PW * i / 101)}" y="{MT - 14}" '
            f'width="{_f(PW / 101 + 0.5)}" height="6" fill="{_heat_color(i / 100)}"/>'
        )
    parts.append(
        f'<text x="{ML}" y="{MT - 18}" font-size="10">{vmin:.4g}</text>'
    )
    parts.append(
        f'<text x="{ML + PW}" y="{MT - 18}" font-size="10" text-anchor="end">'
        f"{vmax:.4g}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(csv_path: str, plot_spec: PlotSpec, out_path: str | None = None) -> str:
    """Render a CSV file to an SVG next to it (or at out_path)."""
    with open(csv_path) as fh:
        columns, rows = parse_csv(fh.read())
    svg = render_plot(columns, rows, plot_spec)
    if out_path is None:
        out_path = os.path.splitext(csv_path)[0] + ".svg"
    with open(out_path, "w") as fh:
        fh.write(svg)
    return out_path
