"""SVG rendering of the t-x1 section of shells, hyperboloids, cones, lines
and points, for documentation figures.

Scene format (JSON)::

    {"view": {"xmin": -4, "xmax": 4, "tmin": -4, "tmax": 4},
     "shells": [{"center": [...], "radius": "1/1", "orientation": "FORWARD"}],
     "hyperboloids": [{"center": [...], "radius": "1/1"}],
     "cones": [{"apex": [...]}],
     "lines": [{"base": [...], "direction": [...]}],
     "points": [[...]]}

Only the section ``x2 = ... = xn = 0`` is drawn; a center off that section
shows as the hyperbola of squared radius ``r² + |offset|²``.
"""
from __future__ import annotations

import math
from typing import Iterable
from xml.sax.saxutils import escape

from .core import Event
from .serialize import parse_event, parse_hyperboloid, parse_shell

WIDTH = HEIGHT = 480
SAMPLES = 200
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class _Canvas:
    def __init__(self, xmin, xmax, tmin, tmax):
        if xmin >= xmax or tmin >= tmax:
            raise ValueError("empty view box")
        self.xmin, self.xmax, self.tmin, self.tmax = xmin, xmax, tmin, tmax
        self.items = []

    def px(self, x, t):
        sx = (x - self.xmin) / (self.xmax - self.xmin) * WIDTH
        sy = HEIGHT - (t - self.tmin) / (self.tmax - self.tmin) * HEIGHT
        return sx, sy

    def polyline(self, pts: Iterable, color: str, dash: bool = False):
        coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in (self.px(x, t) for x, t in pts))
        style = ' stroke-dasharray="6,4"' if dash else ""
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{style}/>')

    def dot(self, x, t, color: str, label: str = ""):
        a, b = self.px(x, t)
        self.items.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        if label:
            self.items.append(f'<text x="{a + 5:.2f}" y="{b - 5:.2f}" font-size="11">{escape(label)}</text>')

    def render(self) -> str:
        axes = []
        ox, oy = self.px(0.0, 0.0)
        if 0 <= ox <= WIDTH:
            axes.append(f'<line x1="{ox:.2f}" y1="0" x2="{ox:.2f}" y2="{HEIGHT}" stroke="#bbb"/>')
        if 0 <= oy <= HEIGHT:
            axes.append(f'<line x1="0" y1="{oy:.2f}" x2="{WIDTH}" y2="{oy:.2f}" stroke="#bbb"/>')
        body = "\n  ".join(axes + self.items)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}">\n  {body}\n</svg>\n')


def _section(center: Event, radius2: float):
    """Center and squared radius of the hyperbola cut by the t-x1 plane."""
    c = center.to_float()
    offset2 = sum(x * x for x in c.x[1:])
    return float(c.t), float(c.x[0]), radius2 + offset2


def _sheet(canvas: _Canvas, ct, cx, r2, sign, color):
    r = math.sqrt(r2)
    span = max(abs(canvas.xmin - cx), abs(canvas.xmax - cx))
    s_max = math.asinh(span / r) if r > 0 else 0.0
    pts = [(cx + r * math.sinh(s), ct + sign * r * math.cosh(s))
           for s in (-s_max + 2 * s_max * k / SAMPLES for k in range(SAMPLES + 1))]
    canvas.polyline(pts, color)


def render_scene(scene: dict) -> str:
    view = scene.get("view", {})
    canvas = _Canvas(float(view.get("xmin", -4)), float(view.get("xmax", 4)),
                     float(view.get("tmin", -4)), float(view.get("tmax", 4)))
    colors = iter(PALETTE * 64)
    for data in scene.get("hyperboloids", []):
        H = parse_hyperboloid(data)
        ct, cx, r2 = _section(H.center, float(H.radius) ** 2)
        color = next(colors)
        _sheet(canvas, ct, cx, r2, 1, color)
        _sheet(canvas, ct, cx, r2, -1, color)
    for data in scene.get("shells", []):
        S = parse_shell(data)
        ct, cx, r2 = _section(S.center, float(S.radius) ** 2)
        _sheet(canvas, ct, cx, r2, S.orientation.value, next(colors))
    for data in scene.get("cones", []):
        apex = parse_event(data["apex"]).to_float()
        ct, cx = float(apex.t), float(apex.x[0])
        span = max(abs(canvas.xmin - cx), abs(canvas.xmax - cx))
        color = next(colors)
        for slope in (1, -1):
            canvas.polyline([(cx - span, ct - slope * span), (cx + span, ct + slope * span)], color, dash=True)
    for data in scene.get("lines", []):
        base = parse_event(data["base"]).to_float()
        d = parse_event(data["direction"]).to_float()
        if d.t == 0 and d.x[0] == 0:
            continue
        span = 2 * max(abs(canvas.xmax - canvas.xmin), abs(canvas.tmax - canvas.tmin))
        norm = math.hypot(float(d.t), float(d.x[0]))
        k = span / norm
        canvas.polyline([(base.x[0] - k * d.x[0], base.t - k * d.t), (base.x[0] + k * d.x[0], base.t + k * d.t)],
                        next(colors))
    for i, data in enumerate(scene.get("points", [])):
        label = ""
        if isinstance(data, dict):
            label, data = data.get("label", ""), data["event"]
        p = parse_event(data).to_float()
        canvas.dot(float(p.x[0]), float(p.t), "#000", label)
    return canvas.render()
