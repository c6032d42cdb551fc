"""Dependency-free SVG scatter plots of experiment records."""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Sequence
from xml.sax.saxutils import escape

from .bench import ExperimentRecord
from .simulator import wald_interval

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 64, 150, 24, 52

# (colour, marker) per backend family, matching the usual published legend
STYLES = {"ionq": ("black", "circle"), "ibm": ("blue", "square"), "rigetti": ("red", "triangle")}
FALLBACK = [("green", "diamond"), ("purple", "circle"), ("orange", "square")]


def _style(backend: str, k: int) -> tuple[str, str]:
    for prefix, style in STYLES.items():
        if backend.startswith(prefix):
            return style
    return FALLBACK[k % len(FALLBACK)]


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _marker(shape: str, x: float, y: float, colour: str, r: float = 4.5) -> str:
    if shape == "circle":
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{colour}"/>'
    if shape == "square":
        return (f'<rect x="{_fmt(x - r)}" y="{_fmt(y - r)}" width="{_fmt(2 * r)}" '
                f'height="{_fmt(2 * r)}" fill="{colour}"/>')
    if shape == "triangle":
        pts = [(x, y - r * 1.2), (x - r * 1.1, y + r * 0.8), (x + r * 1.1, y + r * 0.8)]
    else:
        pts = [(x, y - r * 1.3), (x + r, y), (x, y + r * 1.3), (x - r, y)]
    coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
    return f'<polygon points="{coords}" fill="{colour}"/>'


def render_svg(records: Sequence[ExperimentRecord], title: str = "",
               curve: Callable[[float], float] | None = None) -> str:
    """Success versus parameter, one series per backend, Wald 95% error bars.

    ``curve`` (e.g. a fitted model) is drawn as a polyline over the x range.
    """
    if not records:
        raise ValueError("no records to plot")
    for r in records:
        if r.shots == 0:
            raise ValueError(f"no shots in record {r.backend}/{r.experiment}/{r.parameter}")

    series: dict[str, list[ExperimentRecord]] = defaultdict(list)
    for r in records:
        series[r.backend].append(r)
    xs = [r.parameter for r in records]
    x0, x1 = min(xs), max(xs)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    sx = lambda x: LEFT + (x - x0) / (x1 - x0) * pw  # noqa: E731
    sy = lambda y: TOP + (1 - y) * ph  # noqa: E731

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:g}" y="16" text-anchor="middle">{escape(title)}</text>')
    for k in range(6):
        y = k / 5
        out.append(f'<line x1="{LEFT - 4}" y1="{_fmt(sy(y))}" x2="{LEFT}" y2="{_fmt(sy(y))}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(sy(y) + 4)}" text-anchor="end">{y:.1f}</text>')
    ticks = sorted(set(xs))
    step = max(1, len(ticks) // 12)
    for x in ticks[::step]:
        out.append(f'<line x1="{_fmt(sx(x))}" y1="{TOP + ph}" x2="{_fmt(sx(x))}" y2="{TOP + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{_fmt(sx(x))}" y="{TOP + ph + 18}" text-anchor="middle">{x}</text>')
    experiment = records[0].experiment
    out.append(f'<text x="{LEFT + pw / 2:g}" y="{HEIGHT - 12}" text-anchor="middle">'
               f'{escape(experiment)} parameter</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:g}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:g})">success probability</text>')

    if curve is not None:
        pts = [x0 + (x1 - x0) * i / 200 for i in range(201)]
        path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(min(max(curve(x), 0.0), 1.0)))}" for x in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="gray" stroke-width="1.5"/>')

    for k, (backend, recs) in enumerate(sorted(series.items())):
        colour, shape = _style(backend, k)
        out.append(f'<g class="series" data-backend="{escape(backend)}">')
        for r in sorted(recs, key=lambda r: r.parameter):
            p, half = wald_interval(r.successes, r.shots)
            x, lo, hi = sx(r.parameter), sy(max(p - half, 0.0)), sy(min(p + half, 1.0))
            out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(lo)}" x2="{_fmt(x)}" y2="{_fmt(hi)}" stroke="{colour}"/>')
            out.append(_marker(shape, x, sy(p), colour))
        out.append("</g>")
        ly = TOP + 12 + 20 * k
        out.append(_marker(shape, WIDTH - RIGHT + 20, ly, colour))
        out.append(f'<text x="{WIDTH - RIGHT + 32}" y="{ly + 4}">{escape(backend)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(records: Iterable[ExperimentRecord], path, **kwargs) -> None:
    text = render_svg(list(records), **kwargs)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
