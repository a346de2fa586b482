"""Dependency-free SVG line plots of trajectories.

Follows the usual styling for this kind of figure: adversaries are dashed
red, the reference is a heavy black line, leaders are blue, normal agents
cycle through a muted palette.  The y-range is fitted to the normal agents
and reference; adversary curves (which may be unbounded) are clipped to the
plot area.
"""

from __future__ import annotations

import math
from pathlib import Path

from .simulation import Trajectory

_PALETTE = (
    "#4878a8", "#6aa84f", "#8e63b0", "#c28e3c", "#50a0a0",
    "#a86478", "#74823c", "#5a78d2", "#3c9170", "#b0776a",
)

_WIDTH, _HEIGHT = 900, 540
_ML, _MR, _MT, _MB = 62.0, 16.0, 34.0, 42.0


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def render_trajectory_svg(traj: Trajectory, title: str | None = None) -> str:
    config = traj.config
    rounds = traj.horizon
    normals = config.normals
    leaders = config.leaders

    series_min = []
    series_max = []
    for i in normals + leaders:
        series_min.append(float(traj.states[:, i - 1].min()))
        series_max.append(float(traj.states[:, i - 1].max()))
    if traj.reference is not None:
        series_min.append(float(traj.reference.min()))
        series_max.append(float(traj.reference.max()))
    if not series_min:
        series_min, series_max = [0.0], [1.0]
    ylo, yhi = min(series_min), max(series_max)
    pad = 0.06 * (yhi - ylo) if yhi > ylo else 1.0
    ylo, yhi = ylo - pad, yhi + pad

    plot_w = _WIDTH - _ML - _MR
    plot_h = _HEIGHT - _MT - _MB

    def sx(t: float) -> float:
        return _ML + plot_w * (t / rounds if rounds else 0.0)

    def sy(v: float) -> float:
        return _MT + plot_h * (1.0 - (v - ylo) / (yhi - ylo))

    def polyline(values, style: str) -> str:
        pts = " ".join(f"{sx(t):.2f},{sy(float(v)):.2f}" for t, v in enumerate(values))
        return f'<polyline fill="none" {style} points="{pts}" clip-path="url(#plot)"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{_ML}" y="{_MT}" width="{plot_w}" '
        f'height="{plot_h}"/></clipPath></defs>',
    ]

    for tick in _nice_ticks(ylo, yhi):
        y = sy(tick)
        parts.append(
            f'<line x1="{_ML}" y1="{y:.2f}" x2="{_WIDTH - _MR}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 6}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{tick:g}</text>'
        )
    for tick in _nice_ticks(0, rounds):
        x = sx(tick)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MT}" x2="{x:.2f}" y2="{_HEIGHT - _MB}" '
            'stroke="#eeeeee" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_HEIGHT - _MB + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#444444">{tick:g}</text>'
        )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#888888" stroke-width="1"/>'
    )

    for idx, i in enumerate(normals):
        color = _PALETTE[idx % len(_PALETTE)]
        parts.append(
            polyline(traj.states[:, i - 1], f'stroke="{color}" stroke-width="1.2"')
        )
    for i in leaders:
        parts.append(
            polyline(traj.states[:, i - 1], 'stroke="#1f3c88" stroke-width="1.6"')
        )
    for i in config.adversaries:
        parts.append(
            polyline(
                traj.states[:, i - 1],
                'stroke="#cc2222" stroke-width="1.4" stroke-dasharray="6,4"',
            )
        )
    if traj.reference is not None:
        parts.append(polyline(traj.reference, 'stroke="#000000" stroke-width="2.2"'))

    if title:
        parts.append(
            f'<text x="{_WIDTH / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14" fill="#222222">{title}</text>'
        )
    parts.append(
        f'<text x="{_WIDTH / 2:.0f}" y="{_HEIGHT - 6}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12" fill="#444444">round</text>'
    )
    legend = [("normal", "#4878a8", ""), ("leader", "#1f3c88", ""),
              ("adversary", "#cc2222", ' stroke-dasharray="6,4"')]
    if traj.reference is not None:
        legend.append(("reference", "#000000", ""))
    x0 = _ML + 10
    for label, color, dash in legend:
        parts.append(
            f'<line x1="{x0}" y1="{_MT + 12}" x2="{x0 + 26}" y2="{_MT + 12}" '
            f'stroke="{color}" stroke-width="2"{dash}/>'
        )
        parts.append(
            f'<text x="{x0 + 31}" y="{_MT + 16}" font-family="sans-serif" '
            f'font-size="11" fill="#333333">{label}</text>'
        )
        x0 += 36 + 7 * len(label) + 18
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_trajectory_svg(traj: Trajectory, path, title: str | None = None) -> None:
    Path(path).write_text(render_trajectory_svg(traj, title))
