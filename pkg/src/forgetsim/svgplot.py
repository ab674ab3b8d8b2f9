"""Minimal self-contained SVG line charts.

Just enough plotting for the CLI's --plot flag: axes with 1-2-5 ticks, a few
line series, shaded lesson windows, a legend. Long series are decimated to a
bounded point count before rendering; the written files depend on nothing
outside this module.
"""
from __future__ import annotations

import math
from html import escape

__all__ = ["LineChart"]

_PALETTE = ("#1f6fb4", "#d1495b", "#2e933c", "#8447ad", "#c77d1e", "#3a7c8c")

_MAX_POINTS = 2000


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if not hi > lo:
        hi = lo + (abs(lo) if lo != 0 else 1.0)
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10 * mag
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    ticks = []
    v = math.ceil(lo / step) * step
    while v <= hi + step * 1e-9:
        ticks.append(0.0 if abs(v) < step * 1e-9 else v)
        v += step
    return ticks


def _fmt_tick(v: float) -> str:
    return format(v, ".6g")


def _decimate(xs: list[float], ys: list[float]) -> tuple[list[float], list[float]]:
    if len(xs) <= _MAX_POINTS:
        return xs, ys
    stride = -(-len(xs) // _MAX_POINTS)
    dx = xs[::stride]
    dy = ys[::stride]
    if dx[-1] != xs[-1]:
        dx.append(xs[-1])
        dy.append(ys[-1])
    return dx, dy


class LineChart:
    """Accumulates series and shaded spans, then renders one SVG document."""

    def __init__(
        self,
        title: str = "",
        x_label: str = "",
        y_label: str = "",
        width: int = 880,
        height: int = 520,
    ):
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.width = width
        self.height = height
        self._series: list[tuple[list[float], list[float], str | None]] = []
        self._spans: list[tuple[float, float]] = []

    def add_series(self, xs, ys, label: str | None = None) -> None:
        xs = [float(v) for v in xs]
        ys = [float(v) for v in ys]
        if len(xs) != len(ys):
            raise ValueError("series x and y lengths differ")
        if not xs:
            raise ValueError("series is empty")
        self._series.append((xs, ys, label))

    def add_vspan(self, x0: float, x1: float) -> None:
        self._spans.append((float(x0), float(x1)))

    def render(self) -> str:
        if not self._series:
            raise ValueError("chart has no series")
        ml, mr, mt, mb = 64, 16, 40 if self.title else 16, 48
        pw = self.width - ml - mr
        ph = self.height - mt - mb
        x_lo = min(min(xs) for xs, _, _ in self._series)
        x_hi = max(max(xs) for xs, _, _ in self._series)
        y_lo = min(min(ys) for _, ys, _ in self._series)
        y_hi = max(max(ys) for _, ys, _ in self._series)
        if y_lo > 0 and y_lo < 0.35 * (y_hi - y_lo) + y_lo:
            y_lo = 0.0  # anchor near-zero data at zero
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad = 0.04 * (y_hi - y_lo)
        y_hi += pad
        if y_lo != 0.0:
            y_lo -= pad

        def px(x: float) -> float:
            return ml + (x - x_lo) / (x_hi - x_lo) * pw

        def py(y: float) -> float:
            return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>',
        ]
        for x0, x1 in self._spans:
            a = max(px(max(x0, x_lo)), ml)
            b = min(px(min(x1, x_hi)), ml + pw)
            if b > a:
                parts.append(
                    f'<rect x="{a:.2f}" y="{mt}" width="{b - a:.2f}" height="{ph}" '
                    f'fill="#4a80b4" fill-opacity="0.08"/>'
                )
        for v in _nice_ticks(x_lo, x_hi):
            if x_lo <= v <= x_hi:
                x = px(v)
                parts.append(
                    f'<line x1="{x:.2f}" y1="{mt}" x2="{x:.2f}" y2="{mt + ph}" '
                    f'stroke="#dddddd" stroke-width="1"/>'
                )
                parts.append(
                    f'<text x="{x:.2f}" y="{mt + ph + 18}" font-size="12" '
                    f'text-anchor="middle" fill="#444444">{_fmt_tick(v)}</text>'
                )
        for v in _nice_ticks(y_lo, y_hi):
            if y_lo <= v <= y_hi:
                y = py(v)
                parts.append(
                    f'<line x1="{ml}" y1="{y:.2f}" x2="{ml + pw}" y2="{y:.2f}" '
                    f'stroke="#dddddd" stroke-width="1"/>'
                )
                parts.append(
                    f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="12" '
                    f'text-anchor="end" fill="#444444">{_fmt_tick(v)}</text>'
                )
        parts.append(
            f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
            f'stroke="#888888" stroke-width="1"/>'
        )
        for idx, (xs, ys, label) in enumerate(self._series):
            dx, dy = _decimate(xs, ys)
            pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(dx, dy))
            color = _PALETTE[idx % len(_PALETTE)]
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                f'stroke-width="1.6"/>'
            )
        legend_y = mt + 14
        for idx, (_, _, label) in enumerate(self._series):
            if label:
                color = _PALETTE[idx % len(_PALETTE)]
                parts.append(
                    f'<line x1="{ml + pw - 150}" y1="{legend_y - 4}" '
                    f'x2="{ml + pw - 126}" y2="{legend_y - 4}" '
                    f'stroke="{color}" stroke-width="2"/>'
                )
                parts.append(
                    f'<text x="{ml + pw - 120}" y="{legend_y}" font-size="12" '
                    f'fill="#222222">{escape(label)}</text>'
                )
                legend_y += 16
        if self.title:
            parts.append(
                f'<text x="{ml + pw / 2:.2f}" y="24" font-size="15" '
                f'text-anchor="middle" fill="#111111">{escape(self.title)}</text>'
            )
        if self.x_label:
            parts.append(
                f'<text x="{ml + pw / 2:.2f}" y="{self.height - 10}" font-size="13" '
                f'text-anchor="middle" fill="#333333">{escape(self.x_label)}</text>'
            )
        if self.y_label:
            parts.append(
                f'<text x="16" y="{mt + ph / 2:.2f}" font-size="13" '
                f'text-anchor="middle" fill="#333333" '
                f'transform="rotate(-90 16 {mt + ph / 2:.2f})">{escape(self.y_label)}</text>'
            )
        parts.append("</svg>")
        return "\n".join(parts) + "\n"
