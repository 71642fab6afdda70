from pathlib import Path

import numpy as np

from src.floyd.errors import InvalidConfig, OutputError
from src.floyd.floyd_metric import MetricSpec, radial, tail_sum
from src.floyd.formats import format_value
from src.floyd.tree_core import VertexAddress
from src.utils.rationals import format_rational
from src.utils.settings import get_setting_int

_TAU = 2 * np.pi


def _wedges(spec: MetricSpec, depth: int) -> dict[VertexAddress, tuple[float, float]]:
    wedges = {spec.tree.root: (0.0, _TAU)}
    for v in spec.tree.vertices(depth):
        start, stop = wedges[v]
        if v.depth == depth:
            continue
        children = spec.tree.children(v)
        bounds = np.linspace(start, stop, len(children) + 1)
        for index, child in enumerate(children):
            wedges[child] = (float(bounds[index]), float(bounds[index + 1]))
    return wedges


def render_ball(spec: MetricSpec, depth: int, tol=None) -> str:
    if depth < 0:
        raise InvalidConfig(f"Ball depth must be >= 0, got {depth}")
    # the picture is centred on the root vertex
    spec = MetricSpec(spec.tree, spec.h)
    canvas = get_setting_int("svg_canvas", 640)
    margin = get_setting_int("svg_margin", 24)
    centre = canvas / 2
    total = tail_sum(spec.h, 0, tol)
    scale = (centre - margin) / float(total.hi)

    vertices = list(spec.tree.vertices(depth))
    wedges = _wedges(spec, depth)
    radii = [radial(spec, v) for v in vertices]
    angles = np.array([sum(wedges[v]) / 2 for v in vertices])
    lengths = np.array([float(r) for r in radii]) * scale
    xs = centre + lengths * np.cos(angles)
    ys = centre - lengths * np.sin(angles)
    position = {v: (xs[i], ys[i]) for i, v in enumerate(vertices)}

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{canvas}" height="{canvas}" '
        f'viewBox="0 0 {canvas} {canvas}">',
        f'  <circle class="boundary" cx="{centre:.3f}" cy="{centre:.3f}" r="{float(total.hi) * scale:.3f}" '
        f'fill="none" stroke="#888888" data-radius="{format_value(total)}"/>',
        f'  <text x="{centre:.3f}" y="{margin / 2 + 4:.3f}" text-anchor="middle" font-size="12">'
        f"S(0) = {format_value(total)}</text>",
    ]
    for v in vertices:
        if v.is_root:
            continue
        x1, y1 = position[v.parent]
        x2, y2 = position[v]
        lines.append(f'  <line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke="#333333"/>')
    for v, r in zip(vertices, radii):
        x, y = position[v]
        lines.append(
            f'  <circle class="vertex" cx="{x:.3f}" cy="{y:.3f}" r="3" '
            f'data-address="{v}" data-radius="{format_rational(r)}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_ball(spec: MetricSpec, depth: int, out: str | Path, tol=None) -> int:
    text = render_ball(spec, depth, tol)
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as error:
        raise OutputError(f"Cannot write {out}: {error}", details={"path": str(out)})
    return spec.tree.ball_size(depth)
