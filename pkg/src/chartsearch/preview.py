"""Minimal SVG thumbnails rendered straight from stored mark attributes.

Deconstructed charts keep screen-space attribute values, so rendering is
attribute passthrough inside one affine fit: every mark instance becomes
one SVG element, wrapped in a single translate+scale group that fits the
drawing into the requested viewport without distorting aspect. Output is
deterministic for a fixed spec.
"""

import re
from xml.sax.saxutils import escape, quoteattr

from .model import ChartSpec, Mark

_DEFAULT_FILL = "#4682b4"
_PLACEHOLDER_FILL = "#888888"
_MIN_TEXT_PX = 6.0
_BASE_FONT = 12.0

_PATH_TOKEN = re.compile(r"[MmLlHhVvCcSsQqTtAaZz]|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")

# Points consumed per path command; A takes 7 args of which the last two
# are the endpoint.
_PATH_PAIRS = {"M": 1, "L": 1, "T": 1, "C": 3, "S": 2, "Q": 2}


def _fmt(x: float) -> str:
    return f"{float(x):.2f}"


def _path_points(d: str):
    """Endpoint coordinates mentioned by a path string, for bounding."""
    tokens = _PATH_TOKEN.findall(d or "")
    points = []
    i = 0
    command = None
    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            command = tok.upper()
            i += 1
            continue
        if command in _PATH_PAIRS:
            need = _PATH_PAIRS[command] * 2
            chunk = tokens[i : i + need]
            if len(chunk) < need or any(t.isalpha() for t in chunk):
                break
            for j in range(0, need, 2):
                points.append((float(chunk[j]), float(chunk[j + 1])))
            i += need
        elif command == "A":
            chunk = tokens[i : i + 7]
            if len(chunk) < 7 or any(t.isalpha() for t in chunk):
                break
            points.append((float(chunk[5]), float(chunk[6])))
            i += 7
        elif command == "H":
            points.append((float(tok), points[-1][1] if points else 0.0))
            i += 1
        elif command == "V":
            points.append((points[-1][0] if points else 0.0, float(tok)))
            i += 1
        else:
            i += 1
    return points


def _attr_value(mark: Mark, names, index):
    for name in names:
        values = mark.attrs.get(name)
        if values is not None and index < len(values):
            return values[index]
    return None


def _style_value(mark: Mark, names):
    for name in names:
        if name in mark.style_attrs:
            return mark.style_attrs[name]
    return None


def _number(value, fallback=None):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    return fallback


def _paint(mark: Mark, index, default=_DEFAULT_FILL) -> str:
    value = _attr_value(mark, ("color", "fill", "stroke"), index)
    if isinstance(value, str) and value:
        return value
    style = _style_value(mark, ("color", "fill", "stroke"))
    if isinstance(style, str) and style:
        return style
    return default


class _Instance:
    """One mark instance resolved to an SVG element plus its extent."""

    __slots__ = ("element", "points")

    def __init__(self, element: str, points):
        self.element = element
        self.points = points


def _placeholder(x, y) -> _Instance:
    px, py = _number(x, 0.0), _number(y, 0.0)
    element = (
        f'<rect x={quoteattr(_fmt(px - 3))} y={quoteattr(_fmt(py - 3))} '
        f'width="6" height="6" fill={quoteattr(_PLACEHOLDER_FILL)}/>'
    )
    return _Instance(element, [(px - 3, py - 3), (px + 3, py + 3)])


def _common_style(mark: Mark, index) -> str:
    out = ""
    opacity = _number(_attr_value(mark, ("opacity",), index))
    if opacity is None:
        opacity = _number(_style_value(mark, ("opacity",)))
    if opacity is not None:
        out += f" opacity={quoteattr(_fmt(opacity))}"
    return out


def _render_instance(mark: Mark, index, scale: float) -> _Instance:
    mtype = mark.mtype
    x = _number(_attr_value(mark, ("x",), index))
    y = _number(_attr_value(mark, ("y",), index))
    style = _common_style(mark, index)

    if mtype in ("rect", "bar"):
        w = _number(_attr_value(mark, ("width",), index))
        h = _number(_attr_value(mark, ("height",), index))
        if None in (x, y, w, h):
            return _placeholder(x, y)
        element = (
            f"<rect x={quoteattr(_fmt(x))} y={quoteattr(_fmt(y))} "
            f"width={quoteattr(_fmt(max(w, 0.0)))} height={quoteattr(_fmt(max(h, 0.0)))} "
            f"fill={quoteattr(_paint(mark, index))}{style}/>"
        )
        return _Instance(element, [(x, y), (x + w, y + h)])

    if mtype == "circle":
        r = _number(_attr_value(mark, ("size", "r"), index), 4.0)
        if None in (x, y):
            return _placeholder(x, y)
        element = (
            f"<circle cx={quoteattr(_fmt(x))} cy={quoteattr(_fmt(y))} r={quoteattr(_fmt(r))} "
            f"fill={quoteattr(_paint(mark, index))}{style}/>"
        )
        return _Instance(element, [(x - r, y - r), (x + r, y + r)])

    if mtype == "ellipse":
        rx = _number(_attr_value(mark, ("rx", "width"), index), 6.0)
        ry = _number(_attr_value(mark, ("ry", "height"), index), 4.0)
        if None in (x, y):
            return _placeholder(x, y)
        element = (
            f"<ellipse cx={quoteattr(_fmt(x))} cy={quoteattr(_fmt(y))} "
            f"rx={quoteattr(_fmt(rx))} ry={quoteattr(_fmt(ry))} "
            f"fill={quoteattr(_paint(mark, index))}{style}/>"
        )
        return _Instance(element, [(x - rx, y - ry), (x + rx, y + ry)])

    if mtype == "line":
        x2 = _number(_attr_value(mark, ("x2",), index))
        y2 = _number(_attr_value(mark, ("y2",), index))
        if None in (x, y, x2, y2):
            return _placeholder(x, y)
        element = (
            f"<line x1={quoteattr(_fmt(x))} y1={quoteattr(_fmt(y))} "
            f"x2={quoteattr(_fmt(x2))} y2={quoteattr(_fmt(y2))} "
            f"stroke={quoteattr(_paint(mark, index))} stroke-width=\"1.5\"{style}/>"
        )
        return _Instance(element, [(x, y), (x2, y2)])

    if mtype in ("path", "arc"):
        d = _attr_value(mark, ("d", "path"), index)
        if not isinstance(d, str) or not d.strip():
            return _placeholder(x, y)
        points = _path_points(d)
        if not points:
            return _placeholder(x, y)
        paint = _paint(mark, index)
        if mtype == "path":
            width = _number(_style_value(mark, ("stroke-width",)), 1.5)
            element = (
                f"<path d={quoteattr(d)} fill=\"none\" stroke={quoteattr(paint)} "
                f"stroke-width={quoteattr(_fmt(width))}{style}/>"
            )
        else:
            element = f"<path d={quoteattr(d)} fill={quoteattr(paint)}{style}/>"
        return _Instance(element, points)

    if mtype == "polygon":
        raw = _attr_value(mark, ("points",), index)
        if not isinstance(raw, str) or not raw.strip():
            return _placeholder(x, y)
        numbers = [float(t) for t in re.findall(r"-?\d+(?:\.\d+)?", raw)]
        points = [(numbers[i], numbers[i + 1]) for i in range(0, len(numbers) - 1, 2)]
        if not points:
            return _placeholder(x, y)
        element = f"<polygon points={quoteattr(raw)} fill={quoteattr(_paint(mark, index))}{style}/>"
        return _Instance(element, points)

    if mtype == "text":
        content = _attr_value(mark, ("text",), index)
        if content is None or None in (x, y):
            return _placeholder(x, y)
        # Keep labels legible after shrinking to thumbnail scale.
        base = _number(_style_value(mark, ("font-size",)), _BASE_FONT)
        size = max(base, _MIN_TEXT_PX / scale if scale > 0 else base)
        typeface = _style_value(mark, ("typeface", "font-family"))
        font = f" font-family={quoteattr(str(typeface))}" if typeface else ""
        element = (
            f"<text x={quoteattr(_fmt(x))} y={quoteattr(_fmt(y))} "
            f"font-size={quoteattr(_fmt(size))}{font} "
            f"fill={quoteattr(_paint(mark, index, '#222222'))}{style}>{escape(str(content))}</text>"
        )
        return _Instance(element, [(x, y - base), (x + base * 0.6 * len(str(content)), y)])

    return _placeholder(x, y)


def _fit(points, width, height):
    """Translate+scale fitting the point cloud into the viewport."""
    if not points:
        return 0.0, 0.0, 1.0
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    bw = max(max_x - min_x, 1e-9)
    bh = max(max_y - min_y, 1e-9)
    pad = 0.04
    scale = min(width * (1 - 2 * pad) / bw, height * (1 - 2 * pad) / bh)
    tx = (width - bw * scale) / 2.0 - min_x * scale
    ty = (height - bh * scale) / 2.0 - min_y * scale
    return tx, ty, scale


def render_preview(chart: ChartSpec, width: int = 320, height: int = 210) -> str:
    """Render a chart to a standalone SVG document string."""
    probe_points = []
    for mark in chart.marks:
        for i in range(mark.instance_count()):
            probe_points.extend(_render_instance(mark, i, 1.0).points)
    tx, ty, scale = _fit(probe_points, float(width), float(height))

    elements = []
    for mark in chart.marks:
        for i in range(mark.instance_count()):
            elements.append(_render_instance(mark, i, scale).element)

    background = chart.background or "#ffffff"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width={quoteattr(str(width))} '
        f'height={quoteattr(str(height))} viewBox={quoteattr(f"0 0 {width} {height}")}>',
        f'<rect x="0" y="0" width={quoteattr(str(width))} height={quoteattr(str(height))} '
        f"fill={quoteattr(background)}/>",
        f'<g transform={quoteattr(f"translate({_fmt(tx)},{_fmt(ty)}) scale({_fmt(scale)})")}>',
    ]
    parts.extend(elements)
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)
