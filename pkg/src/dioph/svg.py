"""Tiny deterministic SVG line-chart writer."""

from __future__ import annotations

from typing import Optional, Sequence

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#7f7f7f", "#17becf")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def line_chart(series: dict, *, width: int = 640, height: int = 400, title: str = "",
               x_label: str = "", y_label: str = "",
               x_range: Optional[Sequence[float]] = None,
               y_range: Optional[Sequence[float]] = None,
               styles: Optional[dict] = None) -> str:
    """Render ``{name: [(x, y), ...]}`` as polylines.

    A ``None`` y value breaks the line, so step discontinuities and gaps
    in applicability are drawn as separate segments.
    """
    pad_l, pad_r, pad_t, pad_b = 56, 150, 30, 44
    xs = [float(x) for pts in series.values() for x, y in pts if y is not None]
    ys = [float(y) for pts in series.values() for x, y in pts if y is not None]
    x0, x1 = x_range or (min(xs, default=0.0), max(xs, default=1.0))
    y0, y1 = y_range or (min(ys, default=0.0), max(ys, default=1.0))
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def px(x):
        return pad_l + (float(x) - x0) / (x1 - x0) * pw

    def py(y):
        return pad_t + (1 - (float(y) - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>')
    # axes with five ticks each
    out.append(f'<line x1="{pad_l}" y1="{pad_t + ph}" x2="{pad_l + pw}" y2="{pad_t + ph}" stroke="black"/>')
    out.append(f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + ph}" stroke="black"/>')
    for i in range(5):
        tx = x0 + (x1 - x0) * i / 4
        ty = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{_fmt(px(tx))}" y="{pad_t + ph + 16}" text-anchor="middle" '
                   f'font-size="10">{tx:.3g}</text>')
        out.append(f'<text x="{pad_l - 6}" y="{_fmt(py(ty) + 3)}" text-anchor="end" '
                   f'font-size="10">{ty:.3g}</text>')
    if x_label:
        out.append(f'<text x="{pad_l + pw / 2:.1f}" y="{height - 6}" text-anchor="middle" '
                   f'font-size="12">{x_label}</text>')
    if y_label:
        out.append(f'<text x="14" y="{pad_t + ph / 2:.1f}" text-anchor="middle" font-size="12" '
                   f'transform="rotate(-90 14 {pad_t + ph / 2:.1f})">{y_label}</text>')
    styles = styles or {}
    for k, (name, pts) in enumerate(series.items()):
        color = PALETTE[k % len(PALETTE)]
        extra = styles.get(name, "")
        segment: list[str] = []
        segments = []
        for x, y in pts:
            if y is None:
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{_fmt(px(x))},{_fmt(py(y))}")
        if segment:
            segments.append(segment)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" {extra}'
                       f'points="{" ".join(seg)}"/>'.replace("  ", " "))
        ly = pad_t + 14 * k + 8
        out.append(f'<line x1="{pad_l + pw + 10}" y1="{ly}" x2="{pad_l + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{pad_l + pw + 34}" y="{ly + 4}" font-size="10">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
