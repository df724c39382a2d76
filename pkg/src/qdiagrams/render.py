"""
Grid layout of diagrams and its TikZ and SVG renderings.

Row ``i`` of the grid holds layer ``i``; its box sits in a band in the
middle of the row, starting at the column given by the width of its left
whisker. Wires are polylines that only bend between bands, so they never
cross boxes. Everything is a pure function of the diagram, which makes the
text output byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from qdiagrams.core import Diagram, well_typed

BAND_TOP, BAND_BOTTOM = 0.3, 0.7
SPIDER_COLORS = {"Z": "#99dd99", "X": "#ff8888"}
TIKZ_COLORS = {"Z": "green!40", "X": "red!45"}


@dataclass(frozen=True)
class Placement:
    row: int
    column: int
    width: int
    label: str
    kind: str
    n_in: int
    n_out: int
    color: str = ""


@dataclass(frozen=True)
class Wire:
    points: tuple[tuple[float, float], ...]
    label: str


@dataclass(frozen=True)
class Layout:
    boxes: tuple[Placement, ...]
    wires: tuple[Wire, ...]
    width: int
    height: int


def _ports(start: float, width: int, n: int) -> list[float]:
    pad = (width - n) / 2
    return [start + pad + k + 0.5 for k in range(n)]


def _polyline(*points) -> tuple:
    result = []
    for p in points:
        if not result or result[-1] != p:
            result.append(p)
    # drop interior points on a straight vertical run
    if len(result) > 2 and len({x for x, _ in result}) == 1:
        result = [result[0], result[-1]]
    return tuple(result)


def layout(d: Diagram) -> Layout:
    check = well_typed(d)
    if not check:
        raise ValueError(f"cannot lay out an ill-typed diagram: {check.message}")
    boxes, wires = [], []
    width = len(d.dom)
    if not d.layers:
        wires = [Wire(((j + 0.5, 0.0), (j + 0.5, 1.0)), o.name) for j, o in enumerate(d.dom)]
        return Layout((), tuple(wires), max(width, 1), 1)
    for i, layer in enumerate(d.layers):
        box, left, right = layer.box, len(layer.left), len(layer.right)
        n_in, n_out = len(box.dom), len(box.cod)
        w = max(n_in, n_out, 1)
        top, bottom = float(i), float(i + 1)
        band_top, band_bottom = i + BAND_TOP, i + BAND_BOTTOM
        color = box.color if box.kind == "spider" else ""
        boxes.append(Placement(i, left, w, _label(box), box.kind, n_in, n_out, color))
        for j, o in enumerate(layer.left):
            wires.append(Wire(_polyline((j + 0.5, top), (j + 0.5, bottom)), o.name))
        in_ports, out_ports = _ports(left, w, n_in), _ports(left, w, n_out)
        for k, o in enumerate(box.dom):
            x = left + k + 0.5
            wires.append(Wire(_polyline((x, top), (in_ports[k], band_top)), o.name))
        for k, o in enumerate(box.cod):
            x = left + k + 0.5
            wires.append(Wire(_polyline((out_ports[k], band_bottom), (x, bottom)), o.name))
        for j, o in enumerate(layer.right):
            x_top, x_mid, x_bottom = left + n_in + j + 0.5, left + w + j + 0.5, left + n_out + j + 0.5
            wires.append(Wire(_polyline(
                (x_top, top), (x_mid, band_top), (x_mid, band_bottom), (x_bottom, bottom)), o.name))
        width = max(width, left + w + right)
    return Layout(tuple(boxes), tuple(wires), max(width, 1), len(d.layers))


def _label(box) -> str:
    if box.kind == "spider":
        phase = box.phase
        return "" if phase.is_constant and float(phase) == 0 else str(phase)
    if box.kind == "bubble":
        return box.function
    return str(box)


def _num(v: float) -> str:
    return f"{round(v, 3) + 0.0:g}"


def to_svg(lay: Layout, scale: float = 40.0) -> str:
    """Standalone SVG 1.1 document; ``scale`` is the size of a grid cell in pixels."""
    def xy(x, y):
        return _num(x * scale), _num(y * scale)

    w, h = _num(lay.width * scale), _num(lay.height * scale)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for wire in lay.wires:
        (x0, y0), *rest = wire.points
        d = f"M {' '.join(xy(x0, y0))}" + "".join(f" L {' '.join(xy(x, y))}" for x, y in rest)
        lines.append(f'<path d="{d}" fill="none" stroke="black"/>')
    font = _num(0.3 * scale)
    for b in lay.boxes:
        cx, cy = xy(b.column + b.width / 2, b.row + 0.5)
        if b.kind == "spider":
            lines.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_num(0.2 * scale)}" '
                f'fill="{SPIDER_COLORS[b.color]}" stroke="black"/>')
        else:
            x, y = xy(b.column + 0.1, b.row + BAND_TOP)
            dash = ' stroke-dasharray="4 2"' if b.kind == "bubble" else ""
            lines.append(
                f'<rect x="{x}" y="{y}" width="{_num((b.width - 0.2) * scale)}" '
                f'height="{_num((BAND_BOTTOM - BAND_TOP) * scale)}" '
                f'fill="white" stroke="black"{dash}/>')
        if b.label:
            lines.append(
                f'<text x="{cx}" y="{cy}" font-size="{font}" text-anchor="middle" '
                f'dominant-baseline="central">{escape(b.label)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_TEX_ESCAPES = {"\\": r"\textbackslash{}", "_": r"\_", "#": r"\#", "%": r"\%",
                "&": r"\&", "{": r"\{", "}": r"\}", "$": r"\$", "†": r"$^\dagger$",
                "π": r"$\pi$", "·": r"$\cdot$"}


def _tex(label: str) -> str:
    return "".join(_TEX_ESCAPES.get(c, c) for c in label)


def to_tikz(lay: Layout, scale: float = 1.0) -> str:
    """A ``tikzpicture`` environment; ``scale`` is the size of a grid cell in cm."""
    s = _num(scale)
    lines = [f"\\begin{{tikzpicture}}[x={s}cm, y=-{s}cm]"]
    for wire in lay.wires:
        path = " -- ".join(f"({_num(x)}, {_num(y)})" for x, y in wire.points)
        lines.append(f"\\draw {path};")
    for b in lay.boxes:
        cx, cy = _num(b.column + b.width / 2), _num(b.row + 0.5)
        if b.kind == "spider":
            lines.append(
                f"\\node[circle, draw, fill={TIKZ_COLORS[b.color]}, minimum size={_num(0.4 * scale)}cm] "
                f"at ({cx}, {cy}) {{{_tex(b.label)}}};")
        else:
            style = "draw, fill=white" + (", dashed" if b.kind == "bubble" else "")
            lines.append(
                f"\\node[{style}, minimum width={_num((b.width - 0.2) * scale)}cm, "
                f"minimum height={_num((BAND_BOTTOM - BAND_TOP) * scale)}cm] "
                f"at ({cx}, {cy}) {{{_tex(b.label)}}};")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"
