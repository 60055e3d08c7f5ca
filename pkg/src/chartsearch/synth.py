"""Deterministic corpus synthesizer with recorded ground truth.

Nine template families cover the common chart shapes: bars in four
orientations and groupings, scatters and bubbles, multi-series lines,
donuts, heatmaps, and text tables. Every generated chart comes with a
ground-truth record stating its family, its encodings, and the planted
properties tests assert against (dense point clouds, diverging values,
redundant channels, perfect correlations). The same seed always yields
byte-identical charts.

Charts are emitted the way a deconstruction pipeline would see them:
vertical and horizontal bars arrive as fixed-extent rect marks and are
retyped to bar at ingest.
"""

import json
import math
import random
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

from .model import (
    Axis,
    ChartMetadata,
    ChartSpec,
    DataField,
    Encoding,
    Mark,
    content_id,
    normalize_rect_to_bar,
)

FAMILIES = (
    "vertical-bar",
    "horizontal-bar",
    "grouped-bar",
    "scatter",
    "bubble",
    "line",
    "donut",
    "heatmap",
    "text-table",
)

DEFAULT_MIX = {
    "vertical-bar": 0.14,
    "horizontal-bar": 0.10,
    "grouped-bar": 0.08,
    "scatter": 0.20,
    "bubble": 0.10,
    "line": 0.12,
    "donut": 0.08,
    "heatmap": 0.08,
    "text-table": 0.10,
}

_SCATTER_VARIANTS = {
    "plain": 0.25,
    "colored": 0.30,
    "dense": 0.15,
    "redundant": 0.10,
    "corr-identical": 0.10,
    "corr-negated": 0.10,
}

_DOMAINS = (
    "chartblog.io",
    "dataviz.dev",
    "example.com",
    "newsgraphics.net",
    "nytimes.com",
    "stats.gov",
)

_TOPICS = {
    "election": {
        "quant": ("percent", "votes", "margin"),
        "nominal": ("party", "state", "county"),
        "text": "Live results and maps from the US election with votes tallied by state and county.",
    },
    "economy": {
        "quant": ("gdp", "income", "revenue"),
        "nominal": ("country", "sector", "region"),
        "text": "Quarterly gdp revisions and household income trends across every major region.",
    },
    "population": {
        "quant": ("population", "people", "births"),
        "nominal": ("city", "nation", "age group"),
        "text": "How population growth and migration reshaped cities over the last decade.",
    },
    "climate": {
        "quant": ("temperature", "rainfall", "index"),
        "nominal": ("month", "station", "season"),
        "text": "Temperature anomalies and rainfall totals recorded at weather stations worldwide.",
    },
    "health": {
        "quant": ("cases", "rate", "score"),
        "nominal": ("disease", "group", "district"),
        "text": "Tracking cases and vaccination rates by district as health agencies publish data.",
    },
}

_TOPIC_NAMES = tuple(sorted(_TOPICS))

_CATEGORY_WORDS = (
    "North", "South", "East", "West", "Central", "Upper", "Lower",
    "Inner", "Outer", "Coastal", "Mountain", "Valley", "Harbor", "Plains",
)

_PALETTES = {
    "tab10": (
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    ),
    "warm": ("#fee5d9", "#fcae91", "#fb6a4a", "#de2d26", "#a50f15"),
    "cool": ("#eff3ff", "#bdd7e7", "#6baed6", "#3182bd", "#08519c"),
    "big": (
        "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
        "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
        "#8dd3c7", "#bebada",
    ),
}

_LIGHT_BACKGROUNDS = ("#ffffff", "#fafafa", "#f5f5f0")
_DARK_BACKGROUNDS = ("#708090", "#2f4f4f", "#36454f", "#333333")

_TYPEFACES = ("Helvetica", "Verdana", "Georgia", "Inter", "Roboto")

_WIDTH, _HEIGHT, _PAD = 640.0, 420.0, 40.0


@dataclass(frozen=True)
class SynthRecipe:
    seed: int = 0
    count: int = 100
    mix: dict = dc_field(default_factory=lambda: dict(DEFAULT_MIX))

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        unknown = set(self.mix) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families in mix: {sorted(unknown)}")
        total = math.fsum(self.mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mix proportions sum to {total}, expected 1")


def apportion(total: int, proportions: dict) -> dict:
    """Largest-remainder apportionment; deterministic ties by name."""
    exact = {k: total * p for k, p in proportions.items() if p > 0}
    base = {k: int(math.floor(v)) for k, v in exact.items()}
    leftover = total - sum(base.values())
    order = sorted(exact, key=lambda k: (-(exact[k] - base[k]), k))
    for k in order[:leftover]:
        base[k] += 1
    return {k: v for k, v in base.items() if v > 0}


def _round2(x: float) -> float:
    return round(x, 2)


class _Builder:
    """Stateful helper owning the RNG and shared naming pools."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.serial = 0

    def topic(self) -> str:
        return self.rng.choice(_TOPIC_NAMES)

    def categories(self, n: int) -> list[str]:
        words = list(_CATEGORY_WORDS)
        self.rng.shuffle(words)
        out = []
        for i in range(n):
            if i < len(words):
                out.append(words[i])
            else:
                out.append(f"{words[i % len(words)]} {i // len(words) + 1}")
        return out

    def quant_values(self, n: int, lo: float, hi: float) -> list[float]:
        return [_round2(self.rng.uniform(lo, hi)) for _ in range(n)]

    def palette(self, k: int, name: str | None = None) -> list[str]:
        colors = _PALETTES[name or self.rng.choice(sorted(_PALETTES))]
        return [colors[i % len(colors)] for i in range(k)]

    def background(self) -> tuple[str, str]:
        if self.rng.random() < 0.3:
            return self.rng.choice(_DARK_BACKGROUNDS), "dark"
        return self.rng.choice(_LIGHT_BACKGROUNDS), "light"

    def metadata(self, topic: str, title: str) -> ChartMetadata:
        domain = self.rng.choice(_DOMAINS)
        slug = title.lower().replace(" ", "-")
        self.serial += 1
        url = f"https://{domain}/charts/{slug}-{self.serial}"
        timestamp = None
        if self.rng.random() < 0.5:
            year = 2018 + self.rng.randrange(7)
            month = 1 + self.rng.randrange(12)
            day = 1 + self.rng.randrange(28)
            timestamp = f"{year:04d}-{month:02d}-{day:02d}T00:00:00Z"
        return ChartMetadata(
            url=url,
            domain=domain,
            title=title,
            page_text=f"{title}. {_TOPICS[topic]['text']}",
            timestamp=timestamp,
        )

    def style(self, background: str, extra: dict | None = None) -> dict:
        style = {
            "background": background,
            "typeface": self.rng.choice(_TYPEFACES),
        }
        if extra:
            style.update(extra)
        return style


def _axes(x_title: str | None, y_title: str | None, x_field: str | None = None, y_field: str | None = None) -> list[Axis]:
    axes = []
    if x_title is not None:
        axes.append(Axis(atype="x-axis", orient="bottom", field_name=x_field, title=x_title, tick_color="#333333", tick_width=1.0))
    if y_title is not None:
        axes.append(Axis(atype="y-axis", orient="left", field_name=y_field, title=y_title, tick_color="#333333", tick_width=1.0))
    return axes


def _scale(values, lo_px: float, hi_px: float) -> list[float]:
    lo, hi = min(values), max(values)
    span = (hi - lo) or 1.0
    return [_round2(lo_px + (v - lo) / span * (hi_px - lo_px)) for v in values]


def _build_vertical_bar(b: _Builder):
    topic = b.topic()
    n = 4 + b.rng.randrange(9)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(n)
    vals = b.quant_values(n, 5.0, 100.0)
    colored = b.rng.random() < 0.5

    stride = (_WIDTH - 2 * _PAD) / n
    bar_w = _round2(stride * 0.7)
    heights = [_round2(v / 100.0 * (_HEIGHT - 2 * _PAD)) for v in vals]
    xs = [_round2(_PAD + i * stride) for i in range(n)]
    ys = [_round2(_HEIGHT - _PAD - h) for h in heights]
    background, theme = b.background()
    if colored:
        fills = b.palette(n)
    else:
        fills = [b.rng.choice(_PALETTES["tab10"])] * n

    attrs = {"x": xs, "y": ys, "width": [bar_w] * n, "height": heights, "color": fills}
    mark = Mark(id="m0", mtype="rect", attrs=attrs, style_attrs=b.style(background))
    encodings = [
        Encoding(cat_name, "nominal", "rect", "x"),
        Encoding(val_name, "quantitative", "rect", "y"),
        Encoding(val_name, "quantitative", "rect", "height"),
    ]
    if colored:
        encodings.append(Encoding(cat_name, "nominal", "rect", "color"))
    spec = ChartSpec(
        id="",
        fields=[DataField(cat_name, "nominal", tuple(cats)), DataField(val_name, "quantitative", tuple(vals))],
        marks=[mark],
        encodings=encodings,
        axes=_axes(cat_name, val_name, cat_name, val_name),
        metadata=b.metadata(topic, f"{val_name.title()} by {cat_name.title()}"),
        background=background,
    )
    return spec, {"variant": "colored" if colored else "plain", "theme": theme}


def _build_horizontal_bar(b: _Builder):
    topic = b.topic()
    n = 4 + b.rng.randrange(9)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(n)
    vals = b.quant_values(n, 5.0, 100.0)
    colored = b.rng.random() < 0.4

    stride = (_HEIGHT - 2 * _PAD) / n
    bar_h = _round2(stride * 0.7)
    widths = [_round2(v / 100.0 * (_WIDTH - 2 * _PAD)) for v in vals]
    ys = [_round2(_PAD + i * stride) for i in range(n)]
    background, theme = b.background()
    fills = b.palette(n) if colored else [b.rng.choice(_PALETTES["cool"])] * n

    attrs = {"x": [_PAD] * n, "y": ys, "width": widths, "height": [bar_h] * n, "color": fills}
    mark = Mark(id="m0", mtype="rect", attrs=attrs, style_attrs=b.style(background))
    encodings = [
        Encoding(cat_name, "nominal", "rect", "y"),
        Encoding(val_name, "quantitative", "rect", "width"),
    ]
    if colored:
        encodings.append(Encoding(cat_name, "nominal", "rect", "color"))
    spec = ChartSpec(
        id="",
        fields=[DataField(cat_name, "nominal", tuple(cats)), DataField(val_name, "quantitative", tuple(vals))],
        marks=[mark],
        encodings=encodings,
        axes=_axes(val_name, cat_name, val_name, cat_name),
        metadata=b.metadata(topic, f"{val_name.title()} across {cat_name.title()}"),
        background=background,
    )
    return spec, {"variant": "colored" if colored else "plain", "theme": theme}


def _build_grouped_bar(b: _Builder):
    topic = b.topic()
    groups = 3 + b.rng.randrange(4)
    series = 2 + b.rng.randrange(4)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(groups)
    series_names = [f"Series {chr(65 + i)}" for i in range(series)]
    n = groups * series
    cat_col = [c for c in cats for _ in range(series)]
    series_col = series_names * groups
    vals = b.quant_values(n, 5.0, 100.0)

    stride = (_HEIGHT - 2 * _PAD) / n
    bar_h = _round2(stride * 0.8)
    widths = [_round2(v / 100.0 * (_WIDTH - 2 * _PAD)) for v in vals]
    ys = [_round2(_PAD + i * stride) for i in range(n)]
    background, theme = b.background()
    palette = b.palette(series)
    fills = [palette[i % series] for i in range(n)]

    attrs = {"x": [_PAD] * n, "y": ys, "width": widths, "height": [bar_h] * n, "color": fills}
    mark = Mark(id="m0", mtype="rect", attrs=attrs, style_attrs=b.style(background))
    spec = ChartSpec(
        id="",
        fields=[
            DataField(cat_name, "nominal", tuple(cat_col)),
            DataField("series", "nominal", tuple(series_col)),
            DataField(val_name, "quantitative", tuple(vals)),
        ],
        marks=[mark],
        encodings=[
            Encoding(cat_name, "nominal", "rect", "y"),
            Encoding("series", "nominal", "rect", "color"),
            Encoding(val_name, "quantitative", "rect", "width"),
        ],
        axes=_axes(val_name, cat_name, val_name, cat_name),
        metadata=b.metadata(topic, f"{val_name.title()} by {cat_name.title()} and series"),
        background=background,
    )
    return spec, {"variant": "plain", "theme": theme}


def _build_diverging_bar(b: _Builder):
    topic = b.topic()
    n = 5 + b.rng.randrange(8)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(n)
    vals = b.quant_values(n, -50.0, 50.0)
    vals[0] = _round2(-abs(vals[0]) - 1.0)
    vals[1] = _round2(abs(vals[1]) + 1.0)

    mid = _WIDTH / 2.0
    unit = (_WIDTH / 2.0 - _PAD) / 50.0
    widths = [_round2(abs(v) * unit) for v in vals]
    xs = [_round2(mid + min(0.0, v * unit)) for v in vals]
    stride = (_HEIGHT - 2 * _PAD) / n
    bar_h = _round2(stride * 0.7)
    ys = [_round2(_PAD + i * stride) for i in range(n)]
    background, theme = b.background()
    pos_color, neg_color = "#2166ac", "#b2182b"
    fills = [pos_color if v >= 0 else neg_color for v in vals]

    attrs = {"x": xs, "y": ys, "width": widths, "height": [bar_h] * n, "color": fills}
    mark = Mark(id="m0", mtype="rect", attrs=attrs, style_attrs=b.style(background))
    spec = ChartSpec(
        id="",
        fields=[DataField(cat_name, "nominal", tuple(cats)), DataField(val_name, "quantitative", tuple(vals))],
        marks=[mark],
        encodings=[
            Encoding(cat_name, "nominal", "rect", "y"),
            Encoding(val_name, "quantitative", "rect", "x"),
            Encoding(val_name, "quantitative", "rect", "width"),
        ],
        axes=_axes(val_name, cat_name, val_name, cat_name),
        metadata=b.metadata(topic, f"{val_name.title()} change by {cat_name.title()}"),
        background=background,
    )
    return spec, {"variant": "diverging", "theme": theme}


def _scatter_points(b: _Builder, variant: str):
    if variant == "dense":
        n = 1500 + b.rng.randrange(1001)
    else:
        n = 20 + b.rng.randrange(61)
    xs = b.quant_values(n, 0.0, 100.0)
    if variant == "corr-identical":
        ys = list(xs)
    elif variant == "corr-negated":
        ys = [_round2(-v) for v in xs]
    else:
        ys = b.quant_values(n, 0.0, 100.0)
    return n, xs, ys


def _build_scatter(b: _Builder, variant: str):
    topic = b.topic()
    x_name, y_name = b.rng.sample(_TOPICS[topic]["quant"], 2)
    n, xs, ys = _scatter_points(b, variant)

    px = _scale(xs, _PAD, _WIDTH - _PAD)
    py = _scale(ys, _HEIGHT - _PAD, _PAD)
    background, theme = b.background()
    fields = [DataField(x_name, "quantitative", tuple(xs)), DataField(y_name, "quantitative", tuple(ys))]
    encodings = [
        Encoding(x_name, "quantitative", "circle", "x"),
        Encoding(y_name, "quantitative", "circle", "y"),
    ]
    attrs: dict = {"x": px, "y": py}

    if variant == "colored":
        k = 3 + b.rng.randrange(12)
        cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
        cats = b.categories(k)
        cat_col = [cats[b.rng.randrange(k)] for _ in range(n)]
        palette = b.palette(k, "big")
        color_of = dict(zip(cats, palette))
        fields.append(DataField(cat_name, "nominal", tuple(cat_col)))
        encodings.append(Encoding(cat_name, "nominal", "circle", "color"))
        attrs["color"] = [color_of[c] for c in cat_col]
    elif variant == "redundant":
        ramp = _PALETTES["cool"]
        lo, hi = min(xs), max(xs)
        span = (hi - lo) or 1.0
        attrs["color"] = [ramp[min(int((v - lo) / span * len(ramp)), len(ramp) - 1)] for v in xs]
        encodings.append(Encoding(x_name, "quantitative", "circle", "color"))

    mark = Mark(id="m0", mtype="circle", attrs=attrs, style_attrs=b.style(background, {"stroke-width": 0.5}))
    spec = ChartSpec(
        id="",
        fields=fields,
        marks=[mark],
        encodings=encodings,
        axes=_axes(x_name, y_name, x_name, y_name),
        metadata=b.metadata(topic, f"{y_name.title()} vs {x_name.title()}"),
        background=background,
    )
    return spec, {"variant": variant, "theme": theme}


def _build_bubble(b: _Builder):
    topic = b.topic()
    x_name, y_name, size_name = _TOPICS[topic]["quant"]
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    n = 30 + b.rng.randrange(91)
    xs = b.quant_values(n, 0.0, 100.0)
    ys = b.quant_values(n, 0.0, 100.0)
    sizes = b.quant_values(n, 1.0, 500.0)
    k = 3 + b.rng.randrange(8)
    cats = b.categories(k)
    cat_col = [cats[b.rng.randrange(k)] for _ in range(n)]
    palette = b.palette(k)
    color_of = dict(zip(cats, palette))
    background, theme = b.background()

    attrs = {
        "x": _scale(xs, _PAD, _WIDTH - _PAD),
        "y": _scale(ys, _HEIGHT - _PAD, _PAD),
        "size": [_round2(4.0 + s / 500.0 * 26.0) for s in sizes],
        "color": [color_of[c] for c in cat_col],
    }
    mark = Mark(id="m0", mtype="circle", attrs=attrs, style_attrs=b.style(background, {"opacity": 0.8}))
    spec = ChartSpec(
        id="",
        fields=[
            DataField(x_name, "quantitative", tuple(xs)),
            DataField(y_name, "quantitative", tuple(ys)),
            DataField(size_name, "quantitative", tuple(sizes)),
            DataField(cat_name, "nominal", tuple(cat_col)),
        ],
        marks=[mark],
        encodings=[
            Encoding(x_name, "quantitative", "circle", "x"),
            Encoding(y_name, "quantitative", "circle", "y"),
            Encoding(size_name, "quantitative", "circle", "size"),
            Encoding(cat_name, "nominal", "circle", "color"),
        ],
        axes=_axes(x_name, y_name, x_name, y_name),
        metadata=b.metadata(topic, f"{y_name.title()} vs {x_name.title()} sized by {size_name}"),
        background=background,
    )
    return spec, {"variant": "plain", "theme": theme}


def _line_path(b: _Builder, points: int) -> str:
    xs = [_round2(_PAD + i * (_WIDTH - 2 * _PAD) / (points - 1)) for i in range(points)]
    ys = [_round2(b.rng.uniform(_PAD, _HEIGHT - _PAD)) for _ in range(points)]
    pieces = [f"M{xs[0]},{ys[0]}"] + [f"L{x},{y}" for x, y in zip(xs[1:], ys[1:])]
    return "".join(pieces)


def _build_line(b: _Builder):
    topic = b.topic()
    series = 1 + b.rng.randrange(5)
    points = 10 + b.rng.randrange(31)
    x_name = "year"
    y_name = b.rng.choice(_TOPICS[topic]["quant"])
    xs = [float(1990 + i) for i in range(points)]
    ys = b.quant_values(points, 10.0, 100.0)
    background, theme = b.background()

    palette = b.palette(series)
    attrs = {
        "d": [_line_path(b, points) for _ in range(series)],
        "color": list(palette),
    }
    mark = Mark(id="m0", mtype="path", attrs=attrs, style_attrs=b.style(background, {"stroke-width": 2.0}))
    fields = [DataField(x_name, "quantitative", tuple(xs)), DataField(y_name, "quantitative", tuple(ys))]
    encodings = []
    if series > 1:
        names = [f"Series {chr(65 + i)}" for i in range(series)]
        fields.append(DataField("series", "nominal", tuple(names)))
        encodings.append(Encoding("series", "nominal", "path", "color"))
    spec = ChartSpec(
        id="",
        fields=fields,
        marks=[mark],
        encodings=encodings,
        axes=_axes(x_name, y_name, x_name, y_name),
        metadata=b.metadata(topic, f"{y_name.title()} over time"),
        background=background,
    )
    return spec, {"variant": "multi" if series > 1 else "single", "theme": theme}


def _arc_path(cx: float, cy: float, r: float, start: float, end: float) -> str:
    x0 = _round2(cx + r * math.cos(start))
    y0 = _round2(cy + r * math.sin(start))
    x1 = _round2(cx + r * math.cos(end))
    y1 = _round2(cy + r * math.sin(end))
    large = 1 if (end - start) > math.pi else 0
    return f"M{x0},{y0}A{r},{r} 0 {large} 1 {x1},{y1}L{_round2(cx)},{_round2(cy)}Z"


def _build_donut(b: _Builder):
    topic = b.topic()
    slices = 3 + b.rng.randrange(6)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(slices)
    vals = b.quant_values(slices, 5.0, 60.0)
    total = math.fsum(vals)
    background, theme = b.background()
    palette = b.palette(slices)

    cx, cy, r = _WIDTH / 2.0, _HEIGHT / 2.0, 150.0
    angles = [_round2(v / total * 360.0) for v in vals]
    paths = []
    cursor = 0.0
    for v in vals:
        sweep = v / total * 2.0 * math.pi
        paths.append(_arc_path(cx, cy, r, cursor, cursor + sweep))
        cursor += sweep

    attrs = {"d": paths, "angle": angles, "color": list(palette)}
    mark = Mark(id="m0", mtype="arc", attrs=attrs, style_attrs=b.style(background))
    spec = ChartSpec(
        id="",
        fields=[DataField(cat_name, "nominal", tuple(cats)), DataField(val_name, "quantitative", tuple(vals))],
        marks=[mark],
        encodings=[
            Encoding(val_name, "quantitative", "arc", "angle"),
            Encoding(cat_name, "nominal", "arc", "color"),
        ],
        axes=[],
        metadata=b.metadata(topic, f"Share of {val_name} by {cat_name.title()}"),
        background=background,
    )
    return spec, {"variant": "plain", "theme": theme}


def _build_heatmap(b: _Builder):
    topic = b.topic()
    rows = 5 + b.rng.randrange(8)
    cols = 5 + b.rng.randrange(8)
    x_name, y_name = b.rng.sample(_TOPICS[topic]["nominal"], 2)
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    col_names = b.categories(cols)
    row_names = b.categories(rows)
    n = rows * cols
    x_col = col_names * rows
    y_col = [r for r in row_names for _ in range(cols)]
    vals = b.quant_values(n, 0.0, 1.0)
    background, theme = b.background()

    cell_w = _round2((_WIDTH - 2 * _PAD) / cols)
    cell_h = _round2((_HEIGHT - 2 * _PAD) / rows)
    xs = [_round2(_PAD + (i % cols) * cell_w) for i in range(n)]
    ys = [_round2(_PAD + (i // cols) * cell_h) for i in range(n)]
    ramp = _PALETTES["warm"]
    fills = [ramp[min(int(v * len(ramp)), len(ramp) - 1)] for v in vals]

    attrs = {"x": xs, "y": ys, "width": [cell_w] * n, "height": [cell_h] * n, "color": fills}
    mark = Mark(id="m0", mtype="rect", attrs=attrs, style_attrs=b.style(background))
    spec = ChartSpec(
        id="",
        fields=[
            DataField(x_name, "nominal", tuple(x_col)),
            DataField(y_name, "nominal", tuple(y_col)),
            DataField(val_name, "quantitative", tuple(vals)),
        ],
        marks=[mark],
        encodings=[
            Encoding(x_name, "nominal", "rect", "x"),
            Encoding(y_name, "nominal", "rect", "y"),
            Encoding(val_name, "quantitative", "rect", "color"),
        ],
        axes=_axes(x_name, y_name, x_name, y_name),
        metadata=b.metadata(topic, f"{val_name.title()} by {x_name} and {y_name}"),
        background=background,
    )
    return spec, {"variant": "plain", "theme": theme}


def _build_text_table(b: _Builder):
    topic = b.topic()
    rows = 4 + b.rng.randrange(7)
    cat_name = b.rng.choice(_TOPICS[topic]["nominal"])
    val_name = b.rng.choice(_TOPICS[topic]["quant"])
    cats = b.categories(rows)
    vals = b.quant_values(rows, 1.0, 100.0)
    background, theme = b.background()

    ys = [_round2(_PAD + i * 24.0) for i in range(rows)]
    lo, hi = min(vals), max(vals)
    span = (hi - lo) or 1.0
    opacity = [round(0.3 + (v - lo) / span * 0.7, 3) for v in vals]
    attrs = {"x": [_PAD] * rows, "y": ys, "text": list(cats), "opacity": opacity}
    mark = Mark(
        id="m0",
        mtype="text",
        attrs=attrs,
        style_attrs=b.style(background, {"typeface": "Verdana" if b.rng.random() < 0.5 else "Georgia"}),
    )
    spec = ChartSpec(
        id="",
        fields=[DataField(cat_name, "nominal", tuple(cats)), DataField(val_name, "quantitative", tuple(vals))],
        marks=[mark],
        encodings=[
            Encoding(cat_name, "nominal", "text", "text"),
            Encoding(val_name, "quantitative", "text", "opacity"),
        ],
        axes=[],
        metadata=b.metadata(topic, f"Leading {cat_name} by {val_name}"),
        background=background,
    )
    return spec, {"variant": "plain", "theme": theme}


def _ground_truth_entry(raw: ChartSpec, family: str, extra: dict) -> dict:
    """Describe the chart as searches will see it (after normalization)."""
    chart = normalize_rect_to_bar(raw)
    variant = extra["variant"]
    encodings = [
        {
            "channel": e.channel,
            "dtype": e.dtype,
            "mtype": e.mtype,
            "field": e.field_name,
            "valueCount": len(chart.field_by_name(e.field_name).values),
        }
        for e in chart.encodings
    ]
    fill_colors = None
    for e in chart.encodings:
        if e.channel == "color" and e.dtype == "nominal":
            values = []
            for m in chart.marks:
                if m.mtype == e.mtype and "color" in m.attrs:
                    values.extend(m.attrs["color"])
            fill_colors = len(set(values))
            break
    per_mark = {}
    for m in chart.marks:
        fields_on_mark = {e.field_name for e in chart.encodings if e.mtype == m.mtype}
        if fields_on_mark:
            per_mark[m.id] = {"mtype": m.mtype, "fieldCount": len(fields_on_mark)}
    planted = 0
    if variant == "corr-identical":
        planted = 1
    elif variant == "corr-negated":
        planted = -1
    return {
        "family": family,
        "variant": variant,
        "theme": extra["theme"],
        "domain": chart.metadata.domain,
        "background": chart.background,
        "markTypes": sorted({m.mtype for m in chart.marks}),
        "encodings": encodings,
        "encodingMarkTypes": sorted({e.mtype for e in chart.encodings}),
        "fieldDtypes": {f.name: f.dtype for f in chart.fields},
        "distinctFillColors": fill_colors,
        "encodingsPerMark": per_mark,
        "plantedCorrelation": planted,
        "isVerticalBar": family == "vertical-bar",
        "isDivergingBar": variant == "diverging",
        "isDense": variant == "dense",
        "isRedundant": variant == "redundant",
        "isColoredCircleScatter": family == "bubble" or (family == "scatter" and variant == "colored"),
    }


_BUILDERS = {
    "vertical-bar": _build_vertical_bar,
    "horizontal-bar": _build_horizontal_bar,
    "grouped-bar": _build_grouped_bar,
    "bubble": _build_bubble,
    "line": _build_line,
    "donut": _build_donut,
    "heatmap": _build_heatmap,
    "text-table": _build_text_table,
}


def synthesize(recipe: SynthRecipe):
    """Generate charts and their ground truth. Charts come back in their
    raw (pre-normalization) form with content-hash ids already assigned.
    """
    b = _Builder(recipe.seed)
    plan = apportion(recipe.count, recipe.mix)
    charts: list[ChartSpec] = []
    truth: dict = {}

    for family in FAMILIES:
        n = plan.get(family, 0)
        if n == 0:
            continue
        if family == "scatter":
            variants = apportion(n, _SCATTER_VARIANTS)
            jobs = []
            for name in sorted(_SCATTER_VARIANTS):
                jobs.extend([name] * variants.get(name, 0))
            for variant in jobs:
                raw, extra = _build_scatter(b, variant)
                charts.append(raw)
                truth[id(raw)] = _ground_truth_entry(raw, family, extra)
        elif family == "horizontal-bar":
            # One in five horizontal-bar slots carries the diverging
            # variant, the planted target for mixed-sign value queries.
            diverging = max(1, n // 5) if n >= 3 else 0
            for i in range(n):
                if i < diverging:
                    raw, extra = _build_diverging_bar(b)
                else:
                    raw, extra = _build_horizontal_bar(b)
                charts.append(raw)
                truth[id(raw)] = _ground_truth_entry(raw, family, extra)
        else:
            for _ in range(n):
                raw, extra = _BUILDERS[family](b)
                charts.append(raw)
                truth[id(raw)] = _ground_truth_entry(raw, family, extra)

    final_charts = []
    ground_truth = {"seed": recipe.seed, "count": recipe.count, "mix": dict(recipe.mix), "charts": {}}
    for raw in charts:
        with_id = replace(raw, id=content_id(raw))
        final_charts.append(with_id)
        ground_truth["charts"][with_id.id] = truth[id(raw)]
    final_charts.sort(key=lambda c: c.id)
    return final_charts, ground_truth


def write_corpus(charts: list[ChartSpec], ground_truth: dict, out_dir: str | Path):
    """Write one .chart.json per chart plus the ground-truth file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for chart in charts:
        path = out / f"{chart.id}.chart.json"
        path.write_text(
            json.dumps(chart.to_dict(), sort_keys=True, separators=(",", ":")) + "\n",
            encoding="utf-8",
        )
    gt_path = out / "ground_truth.json"
    gt_path.write_text(
        json.dumps(ground_truth, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )
