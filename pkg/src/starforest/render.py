"""Deterministic SVG drawings of geometric decompositions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geom import bounding_box
from .model import Decomposition

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#000000", "#aec7e8",
    "#ff9896", "#98df8a", "#c5b0d5", "#ffbb78",
)
DASHES = ("", "8 4", "2 3", "8 3 2 3")


@dataclass(frozen=True)
class RenderSpec:
    size: int = 800
    palette: tuple[str, ...] = field(default=PALETTE)
    point_radius: int = 6
    labels: bool = True
    highlight_centers: bool = True
    dash_cycle: bool = True


def _styles(count: int, spec: RenderSpec) -> list[tuple[str, str]]:
    colors = len(spec.palette)
    limit = colors * (len(DASHES) if spec.dash_cycle else 1)
    if count > limit:
        raise ValueError(
            f"{count} forests but only {limit} distinct styles; supply a larger palette"
        )
    return [(spec.palette[i % colors], DASHES[i // colors]) for i in range(count)]


def render_svg(points, d: Decomposition | None = None, spec: RenderSpec = RenderSpec()) -> str:
    forests = d.forests if d is not None else ()
    styles = _styles(len(forests), spec)
    if points:
        x0, y0, x1, y1 = bounding_box(points)
    else:
        x0 = y0 = 0
        x1 = y1 = 1
    span = max(x1 - x0, y1 - y0, 1)
    inner = Fraction(spec.size * 8, 10)
    margin = spec.size // 10
    scale = inner / span
    w = int((x1 - x0) * scale) + 2 * margin
    h = int((y1 - y0) * scale) + 2 * margin

    def xy(p):
        # y grows upward in the plane and downward in SVG
        return round((p[0] - x0) * scale) + margin, round((y1 - p[1]) * scale) + margin

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" '
        f'width="{w}" height="{h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    center_color: dict[int, str] = {}
    for fi, (f, (color, dash)) in enumerate(zip(forests, styles)):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<g id="forest-{fi}" stroke="{color}" stroke-width="2" fill="none"{extra}>')
        for u, v in sorted(f.edges()):
            (ax, ay), (bx, by) = xy(points[u]), xy(points[v])
            out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        out.append("</g>")
        for c in sorted(f.centers()):
            center_color.setdefault(c, color)
    out.append('<g id="points" stroke="black" stroke-width="1">')
    for i, p in enumerate(points):
        x, y = xy(p)
        fill = center_color.get(i, "white") if spec.highlight_centers else "white"
        out.append(f'<circle cx="{x}" cy="{y}" r="{spec.point_radius}" fill="{fill}"/>')
    out.append("</g>")
    if spec.labels:
        out.append('<g id="labels" font-family="sans-serif" font-size="14" fill="black">')
        for i, p in enumerate(points):
            x, y = xy(p)
            out.append(f'<text x="{x + spec.point_radius + 2}" y="{y - spec.point_radius - 2}">{i}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
