"""SVG rendering of scenes and plan documents.

Cells are drawn on a unit grid scaled by ``cell_px``; the scene's y axis
points north, so rows are flipped for SVG space.  Robot paths are
polylines through cell centers in per-robot colors; refill excursions
are dashed; depots are stars; blocked cells are crossed out.
"""
from __future__ import annotations

import math
from pathlib import Path

from .scene import Scene

PALETTE = (
    "#d62728", "#9467bd", "#1f77b4", "#2ca02c", "#ff7f0e", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a",
)


class RenderError(ValueError):
    pass


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


class _Svg:
    def __init__(self, width: float, height: float):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(width)}" height="{_fmt(height)}" '
            f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
        ]

    def add(self, element: str):
        self.parts.append(element)

    def polyline(self, points, stroke, width=2.0, dashed=False, opacity=1.0):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        self.add(f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
                 f'stroke-width="{_fmt(width)}" stroke-linejoin="round" '
                 f'stroke-linecap="round" opacity="{opacity}"{dash}/>')

    def line(self, x1, y1, x2, y2, stroke, width=1.0):
        self.add(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                 f'y2="{_fmt(y2)}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>')

    def rect(self, x, y, w, h, fill, stroke="none"):
        self.add(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
                 f'height="{_fmt(h)}" fill="{fill}" stroke="{stroke}"/>')

    def polygon(self, points, fill, stroke="black"):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.add(f'<polygon points="{pts}" fill="{fill}" stroke="{stroke}" '
                 f'stroke-width="0.8"/>')

    def text(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


def _star(cx: float, cy: float, radius: float) -> list:
    pts = []
    for i in range(10):
        r = radius if i % 2 == 0 else radius * 0.45
        a = math.pi / 2 + i * math.pi / 5
        pts.append((cx + r * math.cos(a), cy - r * math.sin(a)))
    return pts


def render_plan_svg(scene: Scene, plan_doc: dict, cell_px: float = 24.0) -> str:
    """Render a plan document over its scene as an SVG string."""
    meta = plan_doc.get("scene", {})
    if meta and (meta.get("width") != scene.width or meta.get("height") != scene.height):
        raise RenderError("plan document does not match the scene dimensions")
    W, H = scene.width * cell_px, scene.height * cell_px

    def center(cell) -> tuple:
        x, y = cell
        return ((x + 0.5) * cell_px, (scene.height - 1 - y + 0.5) * cell_px)

    svg = _Svg(W, H)
    svg.rect(0, 0, W, H, "white")
    for gx in range(scene.width + 1):
        svg.line(gx * cell_px, 0, gx * cell_px, H, "#dddddd", 0.5)
    for gy in range(scene.height + 1):
        svg.line(0, gy * cell_px, W, gy * cell_px, "#dddddd", 0.5)
    for y in range(scene.height):
        for x in range(scene.width):
            if scene.blocked[y, x]:
                cx, cy = center((x, y))
                r = cell_px * 0.3
                svg.rect(cx - cell_px / 2, cy - cell_px / 2, cell_px, cell_px, "#f0f0f0")
                svg.line(cx - r, cy - r, cx + r, cy + r, "#555555", 1.2)
                svg.line(cx - r, cy + r, cx + r, cy - r, "#555555", 1.2)

    for i, plan in enumerate(plan_doc.get("plans", [])):
        color = PALETTE[i % len(PALETTE)]
        for run in plan.get("runs", [plan.get("path", [])]):
            if len(run) >= 2:
                svg.polyline([center(c) for c in run], color, width=cell_px * 0.1)
        for trip in plan.get("refills", []):
            if len(trip.get("outbound", [])) >= 2:
                svg.polyline([center(c) for c in trip["outbound"]], color,
                             width=cell_px * 0.06, dashed=True, opacity=0.7)

    for i, plan in enumerate(plan_doc.get("plans", [])):
        cx, cy = center(plan["depot"])
        svg.polygon(_star(cx, cy, cell_px * 0.38), "#ffd700")
    if not plan_doc.get("plans"):
        for depot in scene.depots:
            cx, cy = center(depot)
            svg.polygon(_star(cx, cy, cell_px * 0.38), "#ffd700")
    return svg.text()


def save_plan_svg(scene: Scene, plan_doc: dict, path,
                  cell_px: float = 24.0) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_plan_svg(scene, plan_doc, cell_px))
    return path
