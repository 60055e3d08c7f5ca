"""Random chart and query generation for oracle-equivalence fuzzing.

Charts are deliberately adversarial: duplicate channels, shared fields
across channels, marks with equal mark types, axes that point at the
wrong field. Queries mix literals drawn from the chart (so a good
fraction match) with random noise, pattern variables shared across
clauses, alternation regexes, value predicates, and clause counts.
"""

import random

from chartsearch.model import Axis, ChartMetadata, ChartSpec, DataField, Encoding, Mark
from chartsearch.query import (
    Aggregate,
    AxisConstraint,
    Compare,
    Contains,
    DataClause,
    EncodingClause,
    Logical,
    MarkClause,
    MetadataClause,
    Query,
    StringPattern,
    WILDCARD_PATTERN,
)
from chartsearch.vocab import CHANNELS, MARK_TYPES

_WORDS = (
    "alpha", "bravo", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliet", "kilo", "lima", "mike",
)
_FIELD_NAMES = ("f_one", "f_two", "f_three", "f_four", "f_five")
_DOMAINS = ("site-a.test", "site-b.test", "site-c.test")
_VARS = ("$a", "$b", "$c")


def random_chart(rng: random.Random, max_encodings: int = 8) -> ChartSpec:
    n_fields = rng.randint(2, 5)
    fields = []
    for i in range(n_fields):
        name = _FIELD_NAMES[i]
        if rng.random() < 0.5:
            dtype = "quantitative"
            values = tuple(round(rng.uniform(-50, 50), 1) for _ in range(rng.randint(2, 6)))
        else:
            dtype = "nominal"
            values = tuple(rng.choice(_WORDS) for _ in range(rng.randint(2, 6)))
        fields.append(DataField(name, dtype, values))

    n_marks = rng.randint(1, 3)
    mtypes = [rng.choice(MARK_TYPES) for _ in range(n_marks)]

    n_enc = rng.randint(1, max_encodings)
    encodings = []
    for _ in range(n_enc):
        field = rng.choice(fields)
        encodings.append(
            Encoding(field.name, field.dtype, rng.choice(mtypes), rng.choice(CHANNELS))
        )

    marks = []
    for i, mtype in enumerate(mtypes):
        instances = rng.randint(1, 4)
        attrs = {}
        for enc in encodings:
            if enc.mtype != mtype or enc.channel in attrs:
                continue
            if rng.random() < 0.7:
                attrs[enc.channel] = [round(rng.uniform(-20, 120), 1) for _ in range(instances)]
            else:
                attrs[enc.channel] = [rng.choice(_WORDS) for _ in range(instances)]
        style = {"typeface": rng.choice(("Arial", "Georgia", "Courier"))}
        if rng.random() < 0.5:
            style["stroke-width"] = rng.randint(1, 4)
        marks.append(Mark(id=f"m{i}", mtype=mtype, attrs=attrs, style_attrs=style))

    axes = []
    for atype, orients in (("x-axis", ("bottom", "top")), ("y-axis", ("left", "right"))):
        if rng.random() < 0.6:
            axes.append(
                Axis(
                    atype=atype,
                    orient=rng.choice(orients),
                    field_name=rng.choice([None, rng.choice(fields).name]),
                    title=rng.choice([None, rng.choice(_WORDS)]),
                )
            )

    domain = rng.choice(_DOMAINS)
    timestamp = rng.choice([None, f"20{rng.randint(18, 24)}-0{rng.randint(1, 9)}-15T00:00:00Z"])
    metadata = ChartMetadata(
        url=f"https://{domain}/p/{rng.randint(1, 99)}",
        domain=domain,
        title=" ".join(rng.sample(_WORDS, 2)),
        page_text=" ".join(rng.choices(_WORDS, k=6)),
        timestamp=timestamp,
    )
    return ChartSpec(
        id=f"fz{rng.randint(0, 10**9):09d}",
        fields=fields,
        marks=marks,
        encodings=encodings,
        axes=axes,
        metadata=metadata,
    )


def _literal(value: str) -> StringPattern:
    return StringPattern("regex", value)


class _QueryBuilder:
    def __init__(self, rng: random.Random, chart: ChartSpec, max_vars: int):
        self.rng = rng
        self.chart = chart
        self.var_budget = max_vars
        self.vars_used: list = []

    def _variable(self) -> StringPattern | None:
        rng = self.rng
        if self.vars_used and rng.random() < 0.5:
            return StringPattern("variable", rng.choice(self.vars_used))
        if len(self.vars_used) < self.var_budget:
            name = _VARS[len(self.vars_used)]
            self.vars_used.append(name)
            return StringPattern("variable", name)
        return None

    def pattern(self, truth: str, pool) -> StringPattern:
        """A pattern biased toward (but not guaranteeing) matching truth."""
        rng = self.rng
        roll = rng.random()
        if roll < 0.30:
            return _literal(truth if rng.random() < 0.7 else rng.choice(pool))
        if roll < 0.45:
            other = rng.choice(pool)
            return _literal("|".join(sorted({truth, other})))
        if roll < 0.60:
            var = self._variable()
            if var is not None:
                return var
        return WILDCARD_PATTERN

    def value_predicate(self, subject):
        rng = self.rng
        roll = rng.random()
        if roll < 0.35:
            return Aggregate("count", Compare(rng.choice(("gte", "eq", "lt")), rng.randint(0, 6)))
        if roll < 0.6:
            op = rng.choice(("min", "max", "sum", "average"))
            return Aggregate(op, Compare(rng.choice(("gt", "lt", "gte", "lte")), round(rng.uniform(-60, 200), 1)))
        if roll < 0.8:
            numbers = [v for v in subject if isinstance(v, (int, float))]
            if numbers and rng.random() < 0.7:
                return Contains(rng.choice(numbers))
            return Contains(_literal(rng.choice(_WORDS)))
        children = (
            Aggregate("count", Compare("gte", rng.randint(0, 3))),
            Aggregate("count", Compare("lt", rng.randint(2, 8))),
        )
        return Logical(rng.choice(("and", "or")), children)


def random_query(rng: random.Random, chart: ChartSpec, max_clauses: int = 5) -> Query:
    max_vars = 2 if rng.random() < 0.2 else 1
    qb = _QueryBuilder(rng, chart, max_vars)
    n_enc_clauses = rng.randint(0, min(max_clauses, 4))
    if max_vars == 2:
        n_enc_clauses = min(n_enc_clauses, 3)
    if not chart.encodings:
        n_enc_clauses = 0

    encoding_clauses = []
    for _ in range(n_enc_clauses):
        enc = rng.choice(chart.encodings)
        clause = {}
        if rng.random() < 0.8:
            clause["channel"] = qb.pattern(enc.channel, CHANNELS)
        if rng.random() < 0.5:
            clause["dtype"] = qb.pattern(enc.dtype, ("quantitative", "nominal"))
        if rng.random() < 0.4:
            clause["mark"] = qb.pattern(enc.mtype, MARK_TYPES)
        if rng.random() < 0.5:
            clause["field"] = qb.pattern(enc.field_name, _FIELD_NAMES)
        values = None
        if rng.random() < 0.3:
            subject = []
            for m in chart.marks:
                if m.mtype == enc.mtype and enc.channel in m.attrs:
                    subject.extend(m.attrs[enc.channel])
            values = qb.value_predicate(subject)
        count = None
        if rng.random() < 0.25:
            count = Compare(rng.choice(("gte", "eq", "lt")), rng.randint(0, 3))
        axis = None
        if rng.random() < 0.15:
            axis = AxisConstraint() if rng.random() < 0.6 else AxisConstraint(
                orient=rng.choice(("bottom", "top", "left", "right"))
            )
        encoding_clauses.append(
            EncodingClause(
                channel=clause.get("channel", WILDCARD_PATTERN),
                dtype=clause.get("dtype", WILDCARD_PATTERN),
                field=clause.get("field", WILDCARD_PATTERN),
                mark=clause.get("mark", WILDCARD_PATTERN),
                values=values,
                axis=axis,
                count=count,
            )
        )

    data_clauses = []
    if rng.random() < 0.35 and chart.fields:
        field = rng.choice(chart.fields)
        values = qb.value_predicate(list(field.values)) if rng.random() < 0.7 else None
        data_clauses.append(DataClause(field=qb.pattern(field.name, _FIELD_NAMES), values=values))

    mark_clauses = []
    if rng.random() < 0.35 and chart.marks:
        mark = rng.choice(chart.marks)
        style = {}
        if rng.random() < 0.4 and "typeface" in mark.style_attrs:
            style["typeface"] = qb.pattern(str(mark.style_attrs["typeface"]), ("Arial", "Georgia", "Courier"))
        mark_clauses.append(MarkClause(mtype=qb.pattern(mark.mtype, MARK_TYPES), style_attrs=style))

    metadata_clauses = []
    if rng.random() < 0.3:
        meta = chart.metadata
        key = rng.choice(("domain", "title", "keyword", "timestamp"))
        if key == "domain":
            pattern = qb.pattern(meta.domain, _DOMAINS)
        elif key == "title":
            pattern = qb.pattern(meta.title, _WORDS)
        elif key == "keyword":
            word = rng.choice(meta.page_text.split() + list(_WORDS))
            pattern = _literal(word)
        else:
            pattern = (
                _literal(meta.timestamp) if meta.timestamp and rng.random() < 0.5 else WILDCARD_PATTERN
            )
        metadata_clauses.append(MetadataClause(key=key, pattern=pattern))

    if not (encoding_clauses or data_clauses or mark_clauses or metadata_clauses):
        # The parser rejects empty queries, so stay inside the valid space.
        encoding_clauses.append(EncodingClause())
    return Query(
        data_clauses=tuple(data_clauses),
        mark_clauses=tuple(mark_clauses),
        encoding_clauses=tuple(encoding_clauses),
        metadata_clauses=tuple(metadata_clauses),
    )
