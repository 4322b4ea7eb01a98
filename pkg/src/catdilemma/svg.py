"""Ternary SVG panels of the frequency triangle.

Vertex convention: q0 at the apex (0.5, sqrt(3)/2), q1 bottom-left (0, 0),
q2 bottom-right (1, 0).  Empirical points are ``<circle class="point">``,
oracle cells ``<polygon class="cell">``.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from catdilemma.coverage import TriangleGrid

APEX = (0.5, math.sqrt(3.0) / 2.0)
LEFT = (0.0, 0.0)
RIGHT = (1.0, 0.0)

SIZE = 400.0
MARGIN = 40.0

LABELS = {
    "foods": ("pair {1,2} (q0)", "pair {0,2} (q1)", "pair {0,1} (q2)"),
    "electoral": (
        "ballot B vs C (q0)",
        "ballot A vs C (q1)",
        "ballot A vs B (q2)",
    ),
}

TITLES = {
    "all": "Optimal strategies",
    "intransitive": "Optimal intransitive strategies",
    "transitive": "Optimal transitive strategies",
}


def to_cartesian(q) -> np.ndarray:
    """Barycentric (q0, q1, q2) -> triangle-plane (x, y)."""
    q = np.asarray(q, dtype=float)
    x = q[..., 0] * APEX[0] + q[..., 1] * LEFT[0] + q[..., 2] * RIGHT[0]
    y = q[..., 0] * APEX[1] + q[..., 1] * LEFT[1] + q[..., 2] * RIGHT[1]
    return np.stack([x, y], axis=-1)


def _px(xy: np.ndarray) -> np.ndarray:
    xy = np.asarray(xy, dtype=float)
    return np.stack([MARGIN + SIZE * xy[..., 0], MARGIN + SIZE * (APEX[1] - xy[..., 1])], axis=-1)


def _f(v: float) -> str:
    return f"{v:.3f}"


def render_panel(
    points=None,
    grid: TriangleGrid | None = None,
    cell_mask=None,
    title: str = "",
    labels: str = "foods",
    colour: str = "#1f4e9c",
) -> str:
    """One triangle panel as an SVG 1.1 document."""
    width = SIZE + 2 * MARGIN
    height = SIZE * APEX[1] + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]

    if grid is not None and cell_mask is not None:
        out.append('<g id="cells" fill="#9fb7de" stroke="none">')
        for k in np.flatnonzero(np.asarray(cell_mask)):
            corners = _px(to_cartesian(grid.vertices(int(k))))
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in corners)
            out.append(f'<polygon class="cell" points="{pts}"/>')
        out.append("</g>")

    if points is not None:
        pts = _px(to_cartesian(np.asarray(points, dtype=float).reshape(-1, 3)))
        out.append(f'<g id="points" fill="{colour}" stroke="none">')
        for x, y in pts:
            out.append(f'<circle class="point" cx="{_f(x)}" cy="{_f(y)}" r="0.8"/>')
        out.append("</g>")

    tri = _px(np.array([APEX, LEFT, RIGHT]))
    outline = " ".join(f"{_f(x)},{_f(y)}" for x, y in tri)
    out.append(f'<polygon class="axes" points="{outline}" fill="none" stroke="black"/>')
    names = LABELS[labels]
    anchors = [(tri[0], "middle", 0, -8), (tri[1], "start", -MARGIN + 4, 20), (tri[2], "end", MARGIN - 4, 20)]
    for name, ((x, y), anchor, dx, dy) in zip(names, anchors):
        out.append(
            f'<text x="{_f(x + dx)}" y="{_f(y + dy)}" font-size="11" '
            f'text-anchor="{anchor}">{escape(name)}</text>'
        )
    out.append(f'<text x="{_f(width / 2)}" y="14" font-size="13" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
