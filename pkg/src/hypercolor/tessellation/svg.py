"""SVG 1.1 drawings of colored complexes in the Poincare disk."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import numpy as np

from ..hypgeo import FundamentalPolygon, Mobius
from .complex import CellComplex, Coloring
from .geometric import _Quotienter, build_universal_patch, polygon_center

FILL = {"R": "#e0533d", "G": "#3aa55d", "B": "#3b6fd8"}
HIGHLIGHT = "#f5d200"
SIZE = 600


def _xy(z: complex, scale: float) -> tuple[float, float]:
    # screen y grows downward
    return (scale * (1 + z.real), scale * (1 - z.imag))


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def geodesic_arc(z1: complex, z2: complex, scale: float) -> str:
    """Path segment (without the initial move) for the geodesic z1 -> z2."""
    x2, y2 = _xy(z2, scale)
    det = z1.real * z2.imag - z1.imag * z2.real
    if abs(det) < 1e-12:
        return f"L {_fmt(x2)} {_fmt(y2)}"
    # circle orthogonal to the unit circle: 2 Re(c conj z) = 1 + |z|^2
    b1, b2 = (1 + abs(z1) ** 2) / 2, (1 + abs(z2) ** 2) / 2
    cx = (b1 * z2.imag - b2 * z1.imag) / det
    cy = (z1.real * b2 - z2.real * b1) / det
    c = complex(cx, cy)
    radius = abs(z1 - c)
    cross = ((z2 - z1).conjugate() * (c - z1)).imag
    # screen y is flipped, so a centre on the left means a clockwise sweep on screen
    sweep = 0 if cross > 0 else 1
    r = _fmt(radius * scale)
    return f"A {r} {r} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"


def polygon_path(points, scale: float) -> str:
    pts = list(points)
    x0, y0 = _xy(pts[0], scale)
    parts = [f"M {_fmt(x0)} {_fmt(y0)}"]
    for a, b in zip(pts, pts[1:] + pts[:1]):
        parts.append(geodesic_arc(a, b, scale))
    parts.append("Z")
    return " ".join(parts)


def _group_words(polygon: FundamentalPolygon, max_len: int = 2) -> list[Mobius]:
    gens = list(polygon.pairings) + [t.inverse() for t in polygon.pairings]
    words = [Mobius.identity()]
    frontier = [Mobius.identity()]
    for _ in range(max_len):
        frontier = [w @ g for w in frontier for g in gens]
        words += frontier
    return words


def _tiles(cx: CellComplex, polygon: FundamentalPolygon | None) -> list[tuple[int, list[complex]]]:
    """Every patch face meeting the polygon, labelled by the face orbit it belongs to."""
    if polygon is None:
        return [(f, list(pts)) for f, pts in enumerate(cx.face_coords)]
    patch = build_universal_patch(
        cx.signature, polygon, str(cx.meta.get("seed", "face")), float(cx.meta.get("rotation", 0.0))
    )
    reps = [polygon_center(pts) for pts in cx.face_coords]
    quot = _Quotienter(list(polygon.pairings), 2, 1e-7)
    labels, _ = quot.classes(reps + [face.center for face in patch.faces])
    rep_of = {labels[f]: f for f in range(len(reps))}
    out = []
    for face, lab in zip(patch.faces, labels[len(reps):]):
        pts = list(face.vertices)
        if lab in rep_of and (polygon.contains(np.array(pts), tol=1e-9).any() or polygon.contains(face.center)):
            out.append((rep_of[lab], pts))
    return out


def _images(z: complex, polygon: FundamentalPolygon | None) -> list[complex]:
    if polygon is None:
        return [z]
    out = []
    for m in _group_words(polygon):
        w = complex(m(z))
        if polygon.contains(w, tol=1e-9) and all(abs(w - u) > 1e-6 for u in out):
            out.append(w)
    return out


def render_svg(
    cx: CellComplex,
    coloring: Coloring | None = None,
    polygon: FundamentalPolygon | None = None,
    highlight: list[int] | None = None,
    size: int = SIZE,
) -> str:
    """Disk-model drawing; complexes without coordinates get a schematic."""
    if not cx.has_embedding:
        return render_schematic(cx, coloring, highlight, size)
    scale = size / 2
    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=str(size),
        height=str(size),
        viewBox=f"0 0 {size} {size}",
    )
    ET.SubElement(
        root, "circle", cx=_fmt(scale), cy=_fmt(scale), r=_fmt(scale),
        fill="white", stroke="black", **{"stroke-width": "1"},
    )
    tiles = _tiles(cx, polygon)
    layer = root
    if polygon is not None:
        defs = ET.SubElement(root, "defs")
        clip = ET.SubElement(defs, "clipPath", id="domain")
        ET.SubElement(clip, "path", d=polygon_path(polygon.vertices, scale))
        layer = ET.SubElement(root, "g", **{"clip-path": "url(#domain)"})
    for f, pts in tiles:
        fill = FILL[coloring.face_color[f]] if coloring else "#dddddd"
        ET.SubElement(
            layer, "path", d=polygon_path(pts, scale), fill=fill,
            stroke="black", **{"stroke-width": "0.8", "fill-opacity": "0.85"},
        )
    if polygon is not None:
        ET.SubElement(
            root, "path", d=polygon_path(polygon.vertices, scale), fill="none",
            stroke="black", **{"stroke-width": "2", "stroke-dasharray": "6 3"},
        )
    if highlight and cx.vertex_coords is not None:
        marks = []
        for v in highlight:
            marks += _images(cx.vertex_coords[v], polygon)
        for z in marks:
            x, y = _xy(z, scale)
            ET.SubElement(
                root, "circle", cx=_fmt(x), cy=_fmt(y), r="6",
                fill=HIGHLIGHT, stroke="black",
            )
    return _serialize(root)


def render_schematic(
    cx: CellComplex,
    coloring: Coloring | None = None,
    highlight: list[int] | None = None,
    size: int = SIZE,
) -> str:
    """Faces on a circle joined by one line per shared edge (no embedding known)."""
    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=str(size),
        height=str(size),
        viewBox=f"0 0 {size} {size}",
    )
    c, ring = size / 2, size * 0.4
    pos = [
        (c + ring * math.cos(2 * math.pi * f / cx.n_faces), c - ring * math.sin(2 * math.pi * f / cx.n_faces))
        for f in range(cx.n_faces)
    ]
    marked = set(highlight or ())
    for e, fs in enumerate(cx.edge_faces):
        if len(fs) != 2:
            continue
        (x1, y1), (x2, y2) = pos[fs[0]], pos[fs[1]]
        on_string = any(v in marked for v in cx.edges[e])
        ET.SubElement(
            root, "line", x1=_fmt(x1), y1=_fmt(y1), x2=_fmt(x2), y2=_fmt(y2),
            stroke=HIGHLIGHT if on_string else "#888888",
            **{"stroke-width": "3" if on_string else "0.6"},
        )
    for f, (x, y) in enumerate(pos):
        fill = FILL[coloring.face_color[f]] if coloring else "#dddddd"
        ET.SubElement(root, "circle", cx=_fmt(x), cy=_fmt(y), r="12", fill=fill, stroke="black")
        label = ET.SubElement(
            root, "text", x=_fmt(x), y=_fmt(y + 4), **{"text-anchor": "middle", "font-size": "10"}
        )
        label.text = str(f)
    return _serialize(root)


def _serialize(root: ET.Element) -> str:
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
