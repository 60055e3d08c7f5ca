"""Corpus-level design statistics.

Five reports describe how a corpus uses marks, channels, and color:
mark usage, attribute usage, encodings per mark, pairwise correlations
of co-encoded quantitative fields, and fill-color cardinality. Each
report is a plain dict (stable row order) renderable as JSON or an
aligned text table.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass

from . import kernels
from .model import ChartSpec

REPORT_NAMES = (
    "mark-usage",
    "attr-usage",
    "multi-encoding",
    "pair-correlation",
    "fill-color",
)

TABLE_WIDTH = 100

# Channel "color" is stored under the "color" attr by convention; some
# producers use "fill". Both are accepted, "color" preferred.
_FILL_ATTRS = ("color", "fill")


def _sorted_charts(charts) -> list[ChartSpec]:
    return sorted(charts, key=lambda c: c.id)


def mark_usage(charts) -> dict:
    """Charts counted once per mark type they use for encoding."""
    charts = _sorted_charts(charts)
    total = len(charts)
    counts: Counter = Counter()
    for chart in charts:
        for mtype in {e.mtype for e in chart.encodings}:
            counts[mtype] += 1
    rows = [
        {
            "mtype": mtype,
            "chartCount": counts[mtype],
            "percentOfCharts": (counts[mtype] / total * 100.0) if total else 0.0,
        }
        for mtype in sorted(counts)
    ]
    return {
        "name": "mark-usage",
        "totalCharts": total,
        "rows": rows,
        "notes": ["a chart counts once per mark type among its encodings; percents can sum past 100"],
    }


def attr_usage(charts) -> dict:
    """Encoding records grouped by (channel, dtype)."""
    charts = _sorted_charts(charts)
    counts: Counter = Counter()
    for chart in charts:
        for e in chart.encodings:
            counts[(e.channel, e.dtype)] += 1
    rows = [
        {"channel": channel, "dtype": dtype, "count": counts[(channel, dtype)]}
        for channel, dtype in sorted(counts)
    ]
    return {
        "name": "attr-usage",
        "totalCharts": len(charts),
        "rows": rows,
        "notes": ["unit: encoding record"],
    }


def _fields_per_mark(chart: ChartSpec) -> dict:
    """Distinct encoded fields per mark. Encodings name a mark type, not
    a mark id, so every mark of that type carries the encoding."""
    by_mtype: dict = defaultdict(set)
    for e in chart.encodings:
        by_mtype[e.mtype].add(e.field_name)
    out = {}
    for mark in chart.marks:
        fields = by_mtype.get(mark.mtype)
        if fields:
            out[mark.id] = (mark.mtype, len(fields))
    return out


def multi_encoding(charts) -> dict:
    """Histogram of distinct encoded fields per data-encoding mark."""
    charts = _sorted_charts(charts)
    overall: Counter = Counter()
    per_mtype: dict = defaultdict(Counter)
    total_marks = 0
    for chart in charts:
        for _mark_id, (mtype, n) in _fields_per_mark(chart).items():
            overall[n] += 1
            per_mtype[mtype][n] += 1
            total_marks += 1
    multi = sum(c for n, c in overall.items() if n >= 2)
    rows = [{"fieldCount": n, "markCount": overall[n]} for n in sorted(overall)]
    by_mtype = {
        mtype: [{"fieldCount": n, "markCount": cnt[n]} for n in sorted(cnt)]
        for mtype, cnt in sorted(per_mtype.items())
    }
    return {
        "name": "multi-encoding",
        "totalCharts": len(charts),
        "totalMarks": total_marks,
        "multiFieldFraction": (multi / total_marks) if total_marks else 0.0,
        "rows": rows,
        "byMarkType": by_mtype,
        "notes": ["unit: mark record (template), not mark instance"],
    }


def pair_correlations(charts) -> dict:
    """Pearson r between co-encoded quantitative fields, grouped by
    unordered channel pair. Unequal lengths and zero variance skip the
    pair into a tally."""
    charts = _sorted_charts(charts)
    groups: dict = defaultdict(list)
    skipped = {"zeroVariance": 0, "unequalLength": 0}
    for chart in charts:
        by_mtype: dict = defaultdict(list)
        for e in chart.encodings:
            if e.dtype == "quantitative":
                by_mtype[e.mtype].append(e)
        for encs in by_mtype.values():
            if len(encs) < 2:
                continue
            for i in range(len(encs)):
                for j in range(i + 1, len(encs)):
                    a, b = encs[i], encs[j]
                    key = tuple(sorted((a.channel, b.channel)))
                    va = chart.field_by_name(a.field_name).values
                    vb = chart.field_by_name(b.field_name).values
                    if len(va) != len(vb):
                        skipped["unequalLength"] += 1
                        continue
                    r = kernels.pearson(list(va), list(vb))
                    if r != r:  # nan flags zero variance
                        skipped["zeroVariance"] += 1
                        continue
                    groups[key].append(float(r))
    rows = []
    for (c1, c2), values in sorted(groups.items()):
        rows.append(
            {
                "channels": [c1, c2],
                "count": len(values),
                "min": min(values),
                "max": max(values),
                "mean": sum(values) / len(values),
                "values": values,
            }
        )
    return {
        "name": "pair-correlation",
        "totalCharts": len(charts),
        "rows": rows,
        "skipped": skipped,
        "notes": ["pairs grouped by unordered channel pair across marks with 2+ quantitative encodings"],
    }


def fill_colors_of(chart: ChartSpec) -> set | None:
    """Distinct fill colors of nominal color encodings; None when the
    chart has no color-to-nominal encoding."""
    mtypes = {e.mtype for e in chart.encodings if e.channel == "color" and e.dtype == "nominal"}
    if not mtypes:
        return None
    colors: set = set()
    for mark in chart.marks:
        if mark.mtype not in mtypes:
            continue
        for attr in _FILL_ATTRS:
            if attr in mark.attrs:
                colors.update(str(v) for v in mark.attrs[attr])
                break
    return colors


def fill_color_cardinality(charts) -> dict:
    """Distinct fill-color counts over charts with color encoding nominal
    data. Fractions are relative to that population."""
    charts = _sorted_charts(charts)
    histogram: Counter = Counter()
    for chart in charts:
        colors = fill_colors_of(chart)
        if colors is None:
            continue
        histogram[len(colors)] += 1
    population = sum(histogram.values())
    at_least_6 = sum(c for n, c in histogram.items() if n >= 6)
    at_least_12 = sum(c for n, c in histogram.items() if n >= 12)
    rows = [{"distinctColors": n, "chartCount": histogram[n]} for n in sorted(histogram)]
    return {
        "name": "fill-color",
        "totalCharts": len(charts),
        "chartsWithNominalColor": population,
        "rows": rows,
        "fractionAtLeast6": (at_least_6 / population) if population else 0.0,
        "fractionAtLeast12": (at_least_12 / population) if population else 0.0,
        "notes": ["fractions are over charts that encode nominal data on color"],
    }


_REPORTS = {
    "mark-usage": mark_usage,
    "attr-usage": attr_usage,
    "multi-encoding": multi_encoding,
    "pair-correlation": pair_correlations,
    "fill-color": fill_color_cardinality,
}


def analyze(charts, report: str) -> dict:
    try:
        builder = _REPORTS[report]
    except KeyError:
        raise ValueError(f"unknown report {report!r}; expected one of {', '.join(REPORT_NAMES)}") from None
    return builder(charts)


@dataclass(frozen=True)
class _Column:
    header: str
    key: str
    align: str = "left"
    fmt: str = "{}"

    def render(self, row) -> str:
        value = row.get(self.key, "")
        if value is None:
            return ""
        if isinstance(value, float):
            return self.fmt.format(value)
        return str(value)


def _table(columns, rows, width=TABLE_WIDTH) -> list[str]:
    cells = [[col.render(row) for col in columns] for row in rows]
    widths = [len(col.header) for col in columns]
    for line in cells:
        for i, cell in enumerate(line):
            widths[i] = max(widths[i], len(cell))
    # Shrink the widest column until the table fits.
    sep = 2
    while sum(widths) + sep * (len(widths) - 1) > width:
        widest = widths.index(max(widths))
        if widths[widest] <= 8:
            break
        widths[widest] -= 1

    def fit(text, w, align):
        if len(text) > w:
            text = text[: max(w - 1, 1)] + "…"
        return text.rjust(w) if align == "right" else text.ljust(w)

    lines = [(" " * sep).join(fit(c.header, w, "left") for c, w in zip(columns, widths)).rstrip()]
    lines.append((" " * sep).join("-" * w for w in widths))
    for line in cells:
        rendered = (" " * sep).join(
            fit(cell, w, col.align) for cell, col, w in zip(line, columns, widths)
        )
        lines.append(rendered.rstrip())
    return lines


_TABLE_COLUMNS = {
    "mark-usage": [
        _Column("mark", "mtype"),
        _Column("charts", "chartCount", "right"),
        _Column("percent", "percentOfCharts", "right", "{:.1f}"),
    ],
    "attr-usage": [
        _Column("channel", "channel"),
        _Column("dtype", "dtype"),
        _Column("encodings", "count", "right"),
    ],
    "multi-encoding": [
        _Column("fields", "fieldCount", "right"),
        _Column("marks", "markCount", "right"),
    ],
    "pair-correlation": [
        _Column("channels", "channelsText"),
        _Column("pairs", "count", "right"),
        _Column("min r", "min", "right", "{:+.4f}"),
        _Column("mean r", "mean", "right", "{:+.4f}"),
        _Column("max r", "max", "right", "{:+.4f}"),
    ],
    "fill-color": [
        _Column("distinct colors", "distinctColors", "right"),
        _Column("charts", "chartCount", "right"),
    ],
}


def report_to_text(report: dict) -> str:
    name = report["name"]
    columns = _TABLE_COLUMNS[name]
    rows = report["rows"]
    if name == "pair-correlation":
        rows = [{**row, "channelsText": " + ".join(row["channels"])} for row in rows]
    lines = [f"{name} (charts: {report['totalCharts']})"]
    lines.extend(_table(columns, rows))
    if name == "multi-encoding":
        lines.append(f"multi-field fraction: {report['multiFieldFraction']:.3f} of {report['totalMarks']} marks")
    if name == "pair-correlation":
        skipped = report["skipped"]
        lines.append(
            f"skipped: {skipped['zeroVariance']} zero-variance, {skipped['unequalLength']} unequal-length"
        )
    if name == "fill-color":
        lines.append(
            f">=6 colors: {report['fractionAtLeast6']:.3f}  >=12 colors: {report['fractionAtLeast12']:.3f}"
            f"  (of {report['chartsWithNominalColor']} charts with nominal color)"
        )
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)
