"""Deterministic file emitters: CSV for bulk numbers, JSON for reports, SVG
for figures.

Numeric text uses printf %.17g, which round-trips doubles and is locale
independent; infinities and NaN come out as the literals inf/-inf/nan.
Files are written with "\n" newlines regardless of platform so identical
inputs give identical bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DomainError


def format_float(x) -> str:
    return "%.17g" % float(x)


def _meta_lines(meta: dict) -> list:
    return [
        f"# tool: {meta['tool']} {meta['version']}",
        f"# driver: {meta['driver_fingerprint']}",
        f"# config: {json.dumps(meta['config'], sort_keys=True)}",
    ]


def _write_text(path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv(meta, header, rows) -> str:
    lines = _meta_lines(meta) + [header]
    for row in rows:
        lines.append(",".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path, times, states, meta) -> None:
    times = np.asarray(times, dtype=float)
    states = np.asarray(states, dtype=complex)
    rows = zip(times, states.real, states.imag)
    _write_text(path, _csv(meta, "t,re,im", rows))


def write_trace_csv(path, trace, meta) -> None:
    rows = zip(
        trace.params,
        trace.points.real,
        trace.points.imag,
        trace.extrapolation_error,
    )
    _write_text(path, _csv(meta, "t,re,im,err", rows))


def write_raster_csv(path, raster, meta) -> None:
    xs = raster.x_centers()
    ys = raster.y_centers()
    rows = (
        (xs[ix], ys[iy], raster.lifetimes[ix, iy])
        for ix in range(raster.nx)
        for iy in range(raster.ny)
    )
    _write_text(path, _csv(meta, "x,y,lifetime", rows))


def write_motion_csv(path, grid, meta) -> None:
    rows = (
        (a.real, a.imag, t, grid.values[i, j].real, grid.values[i, j].imag)
        for i, a in enumerate(grid.alphas)
        for j, t in enumerate(grid.params)
    )
    _write_text(path, _csv(meta, "alpha_re,alpha_im,t,re,im", rows))


def dump_json(payload: dict, meta) -> str:
    return json.dumps({"meta": meta, **payload}, sort_keys=True, indent=2) + "\n"


def write_json(path, payload: dict, meta) -> None:
    _write_text(path, dump_json(payload, meta))


def report_payload(report) -> dict:
    return {
        "entries": [dict(e) for e in report.entries],
        "all_passed": report.all_passed,
    }


# ---------------------------------------------------------------------------
# SVG

_SURVIVOR_COLOR = "#e8eef4"
_RAMP_LOW = (34, 17, 68)
_RAMP_HIGH = (255, 204, 102)
_LINE_COLORS = ("#0b3d91", "#b3002d", "#0a7d52", "#8a4fba", "#b36b00", "#187a8a")

_DEFAULT_STYLE = {
    "width": 640,
    "stroke_fraction": 0.004,
    "survivor_color": _SURVIVOR_COLOR,
    "ramp_low": _RAMP_LOW,
    "ramp_high": _RAMP_HIGH,
    "line_colors": _LINE_COLORS,
}


def _fmt(x) -> str:
    return "%.9g" % float(x)


def _blend(q, low, high) -> str:
    rgb = tuple(int(round(l + q * (h - l))) for l, h in zip(low, high))
    return "#%02x%02x%02x" % rgb


def _bbox_with_margin(x0, x1, y0, y1):
    w, h = x1 - x0, y1 - y0
    pad = 0.05 * max(w, h, 0.1)
    return x0 - pad, x1 + pad, y0 - pad, y1 + pad


def _polylines_of(data):
    if hasattr(data, "points"):
        return [np.asarray(data.points, dtype=complex)]
    arr = np.asarray(data, dtype=complex)
    if arr.ndim == 1:
        return [arr]
    if arr.ndim == 2:
        return [arr[i] for i in range(arr.shape[0])]
    raise DomainError("polyline data must be 1- or 2-dimensional")


def _raster_rects(raster, style):
    xs, ys = raster.x_centers(), raster.y_centers()
    x0, _, y0, _ = raster.window
    dx = xs[1] - xs[0] if raster.nx > 1 else 1.0
    dy = ys[1] - ys[0] if raster.ny > 1 else 1.0
    life = raster.lifetimes
    finite = np.isfinite(life)
    order = np.sort(life[finite]) if np.any(finite) else np.array([])
    parts = []
    for ix in range(raster.nx):
        for iy in range(raster.ny):
            val = life[ix, iy]
            if np.isnan(val):
                continue
            if np.isinf(val):
                color = style["survivor_color"]
            else:
                q = np.searchsorted(order, val, side="right") / len(order)
                color = _blend(q, style["ramp_low"], style["ramp_high"])
            left = x0 + ix * dx
            top = -(y0 + (iy + 1) * dy)
            parts.append(
                f'<rect x="{_fmt(left)}" y="{_fmt(top)}" '
                f'width="{_fmt(dx)}" height="{_fmt(dy)}" fill="{color}"/>'
            )
    return parts


def emit_svg(data, style=None, path=None, meta=None) -> None:
    """Render a hull raster or one or more trace polylines as SVG 1.1.

    Byte output is a pure function of the inputs; the metadata travels in
    an XML comment so the figure stays self-describing.
    """
    if path is None:
        raise DomainError("emit_svg needs an output path")
    merged = dict(_DEFAULT_STYLE)
    if style:
        merged.update(style)

    is_raster = hasattr(data, "lifetimes")
    if is_raster:
        x0, x1, y0, y1 = data.window
        body = _raster_rects(data, merged)
    else:
        lines = _polylines_of(data)
        pts = np.concatenate(lines)
        if pts.size == 0:
            raise DomainError("no points to render")
        x0, x1 = float(np.min(pts.real)), float(np.max(pts.real))
        y0, y1 = float(np.min(pts.imag)), float(np.max(pts.imag))
        span = max(x1 - x0, y1 - y0, 0.1)
        width = merged["stroke_fraction"] * span
        colors = merged["line_colors"]
        body = []
        for k, line in enumerate(lines):
            coords = " ".join(f"{_fmt(z.real)},{_fmt(-z.imag)}" for z in line)
            body.append(
                f'<polyline points="{coords}" fill="none" '
                f'stroke="{colors[k % len(colors)]}" stroke-width="{_fmt(width)}"/>'
            )

    bx0, bx1, by0, by1 = _bbox_with_margin(x0, x1, y0, y1)
    view = f"{_fmt(bx0)} {_fmt(-by1)} {_fmt(bx1 - bx0)} {_fmt(by1 - by0)}"
    w = merged["width"]
    h = int(round(w * (by1 - by0) / (bx1 - bx0)))
    head = ['<?xml version="1.0" encoding="UTF-8"?>']
    if meta is not None:
        head.append(f"<!-- {json.dumps(meta, sort_keys=True)} -->")
    head.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{view}" width="{w}" height="{h}">'
    )
    _write_text(path, "\n".join(head + body + ["</svg>"]) + "\n")
