"""Static SVG line charts for sweep results.

Hand-rolled SVG 1.1 (lines, circles, text only) so figures render anywhere
and identical inputs produce byte-identical files: series are drawn in sorted
protocol order, every coordinate is formatted to six significant digits, and
nothing depends on locale or wall clock. One polyline per protocol, circle
markers at each aggregate point, vertical error bars of one sample standard
deviation.
"""

from __future__ import annotations

import csv
import math
import statistics

from .errors import InvalidConfig, IoFailure

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 24, 44, 56
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

METRICS = {
    "pdr": ("pdr_mean", "pdr_std", "packet delivery ratio"),
    "delay": ("delay_mean", "delay_std", "average end-to-end delay (s)"),
}


def _f(x: float) -> str:
    return "%.6g" % x


def read_run_csv(path: str):
    """Parse a per-run results file back into (sweep_param, sample rows)."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    except OSError as e:
        raise IoFailure(str(e)) from e
    if not rows:
        raise InvalidConfig(f"{path}: no data rows")
    param = rows[0]["sweep_param"]
    samples = [(r["protocol"], float(r["sweep_value"]), float(r["pdr"]),
                float(r["avg_delay_s"])) for r in rows]
    return param, samples


def aggregate_samples(samples) -> list[dict]:
    """Group (protocol, value, pdr, delay) samples into plot-ready rows."""
    groups: dict[tuple[str, float], list[tuple[float, float]]] = {}
    for proto, value, p, d in samples:
        groups.setdefault((proto, value), []).append((p, d))
    out = []
    for (proto, value) in sorted(groups):
        cell = groups[(proto, value)]
        pdrs = [p for p, _ in cell if not math.isnan(p)]
        delays = [d for _, d in cell if not math.isnan(d)]
        out.append({
            "protocol": proto,
            "value": value,
            "runs": len(cell),
            "pdr_mean": statistics.fmean(pdrs) if pdrs else float("nan"),
            "pdr_std": statistics.stdev(pdrs) if len(pdrs) > 1 else 0.0,
            "delay_mean": statistics.fmean(delays) if delays else float("nan"),
            "delay_std": statistics.stdev(delays) if len(delays) > 1 else 0.0,
        })
    return out


def render_plot(rows: list[dict], metric: str, xlabel: str = "sweep value") -> str:
    """Build the SVG document for aggregate rows; no I/O."""
    if metric not in METRICS:
        raise InvalidConfig(f"metric must be one of {sorted(METRICS)}, got {metric!r}")
    if not rows:
        raise InvalidConfig("nothing to plot: no aggregate rows")
    mean_key, std_key, ylabel = METRICS[metric]

    series: dict[str, list[tuple[float, float, float]]] = {}
    for r in rows:
        m = r[mean_key]
        if math.isnan(m):
            continue
        series.setdefault(r["protocol"], []).append((r["value"], m, r[std_key]))
    for pts in series.values():
        pts.sort()

    xs = [r["value"] for r in rows]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_hi = 0.0
    for pts in series.values():
        for _, m, s in pts:
            y_hi = max(y_hi, m + s)
    if y_hi <= 0.0:
        y_hi = 1.0
    y_hi *= 1.05
    y_lo = 0.0

    px_w = WIDTH - MARGIN_L - MARGIN_R
    px_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * px_w

    def sy(y: float) -> float:
        return HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * px_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    axis = 'stroke="black" stroke-width="1"'
    text = 'font-family="sans-serif" font-size="12" fill="black"'
    x0, y0 = MARGIN_L, HEIGHT - MARGIN_B
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{WIDTH - MARGIN_R}" y2="{y0}" {axis}/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN_T}" {axis}/>')

    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        px = sx(fx)
        out.append(f'<line x1="{_f(px)}" y1="{y0}" x2="{_f(px)}" y2="{y0 + 5}" {axis}/>')
        out.append(f'<text x="{_f(px)}" y="{y0 + 20}" text-anchor="middle" {text}>{_f(fx)}</text>')
        fy = y_lo + (y_hi - y_lo) * i / 4
        py = sy(fy)
        out.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" {axis}/>')
        out.append(f'<text x="{x0 - 8}" y="{_f(py + 4)}" text-anchor="end" {text}>{_f(fy)}</text>')

    out.append(f'<text x="{MARGIN_L + px_w / 2}" y="{HEIGHT - 12}" '
               f'text-anchor="middle" {text}>{xlabel}</text>')
    out.append(f'<text x="{MARGIN_L + px_w / 2}" y="{MARGIN_T - 16}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="14" '
               f'fill="black">{ylabel} vs {xlabel}</text>')

    for si, proto in enumerate(sorted(series)):
        color = PALETTE[si % len(PALETTE)]
        pts = series[proto]
        for x, m, s in pts:
            if s > 0.0:
                px, top, bot = sx(x), sy(m + s), sy(m - s)
                bar = f'stroke="{color}" stroke-width="1"'
                out.append(f'<line x1="{_f(px)}" y1="{_f(top)}" x2="{_f(px)}" y2="{_f(bot)}" {bar}/>')
                out.append(f'<line x1="{_f(px - 4)}" y1="{_f(top)}" x2="{_f(px + 4)}" y2="{_f(top)}" {bar}/>')
                out.append(f'<line x1="{_f(px - 4)}" y1="{_f(bot)}" x2="{_f(px + 4)}" y2="{_f(bot)}" {bar}/>')
        if len(pts) >= 2:
            coords = " ".join(f"{_f(sx(x))},{_f(sy(m))}" for x, m, _ in pts)
            out.append(f'<polyline points="{coords}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5"/>')
        for x, m, _ in pts:
            out.append(f'<circle cx="{_f(sx(x))}" cy="{_f(sy(m))}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 14 + 16 * si
        lx = WIDTH - MARGIN_R - 130
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<circle cx="{lx + 11}" cy="{ly - 4}" r="3" fill="{color}"/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" {text}>{proto}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(rows: list[dict], metric: str, path: str,
              xlabel: str = "sweep value") -> None:
    """Render aggregate rows and write the SVG to path."""
    svg = render_plot(rows, metric, xlabel)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(svg)
    except OSError as e:
        raise IoFailure(str(e)) from e
