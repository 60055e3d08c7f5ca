"""Query-by-example: turn a chart into the query it exemplifies.

The generated query keeps what the chart encodes and the mark types doing
the encoding, and drops everything stylistic: field names become
wildcards, axes, style attributes, and metadata are omitted, so the
search surfaces design variations rather than the same dataset.
"""

from collections import Counter

from .model import ChartSpec
from .query import (
    Compare,
    EncodingClause,
    MarkClause,
    Query,
    StringPattern,
    WILDCARD_PATTERN,
)


def _literal(value: str) -> StringPattern:
    return StringPattern("regex", value)


def spec_to_query(chart: ChartSpec) -> Query:
    """Build the example query for a chart.

    One encoding clause per distinct (channel, dtype, mark type) with the
    field left as a wildcard; duplicates collapse into a single clause
    claiming at least their multiplicity. Mark clauses name the mark
    types that carry encodings, or every mark type when nothing is
    encoded, so an undecorated chart still retrieves its own family.
    """
    groups = Counter((e.channel, e.dtype, e.mtype) for e in chart.encodings)

    encoding_clauses = []
    for (channel, dtype, mtype), multiplicity in sorted(groups.items()):
        encoding_clauses.append(
            EncodingClause(
                channel=_literal(channel),
                dtype=_literal(dtype),
                field=WILDCARD_PATTERN,
                mark=_literal(mtype),
                count=Compare("gte", multiplicity) if multiplicity > 1 else None,
            )
        )

    if chart.encodings:
        mark_types = sorted({e.mtype for e in chart.encodings})
    else:
        mark_types = sorted({m.mtype for m in chart.marks})
    mark_clauses = tuple(MarkClause(mtype=_literal(t)) for t in mark_types)
    if not mark_clauses:
        mark_clauses = (MarkClause(mtype=WILDCARD_PATTERN),)

    return Query(
        mark_clauses=mark_clauses,
        encoding_clauses=tuple(encoding_clauses),
    )
