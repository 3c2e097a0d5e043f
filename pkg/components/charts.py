from pathlib import Path
from typing import Sequence

import plotly.graph_objects as go

from utils.exceptions import ModHypError, PreconditionError

SVG_NS = "http://www.w3.org/2000/svg"


def render_svg(points: Sequence[tuple[int, int]], n: int) -> str:
    """Standalone SVG of a planar point set in [1, n)^2.

    Each point is a filled unit square with origin at the bottom left, so the
    picture reads like the usual xy-plane.
    """
    if n < 2:
        raise PreconditionError(f"modulus must be at least 2, got n={n}")
    cells = []
    for x, y in points:
        if not (1 <= x < n and 1 <= y < n):
            raise PreconditionError(f"point ({x}, {y}) lies outside [1, {n})")
        cells.append(f'<rect x="{x}" y="{n - 1 - y}" width="1" height="1"/>')
    return "\n".join([
        f'<svg xmlns="{SVG_NS}" viewBox="0 0 {n} {n}" width="{max(n, 256)}" height="{max(n, 256)}">',
        f'<path d="M0 0H{n}V{n}H0Z" fill="white" stroke="black" stroke-width="{max(n / 400, 0.1):g}"/>',
        '<g fill="black" shape-rendering="crispEdges">',
        *cells,
        "</g>",
        "</svg>",
        "",
    ])


def build_figure(x: Sequence[int], y: Sequence[int], a: int, n: int) -> go.Figure:
    """Interactive scatter of H_2(a;n)"""
    fig = go.Figure()
    fig.add_trace(
        go.Scatter(
            x=list(x),
            y=list(y),
            mode="markers",
            marker={"size": 3, "color": "black"},
            name=f"H_2({a};{n})",
        )
    )
    fig.update_layout(
        title=f"xy = {a} mod {n}",
        xaxis={"range": [0, n], "title": "x"},
        yaxis={"range": [0, n], "title": "y", "scaleanchor": "x"},
        template="plotly_white",
        showlegend=False,
    )
    return fig


def write_plot(path: Path, x: Sequence[int], y: Sequence[int], a: int, n: int) -> None:
    """Write an .html plotly page, or SVG for any other suffix"""
    try:
        if path.suffix.lower() == ".html":
            build_figure(x, y, a, n).write_html(path)
        else:
            path.write_text(render_svg(list(zip(x, y)), n), encoding="utf-8")
    except OSError as e:
        raise ModHypError(f"Failed to write plot {path}: {e}") from e
