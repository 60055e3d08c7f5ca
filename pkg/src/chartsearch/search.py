"""Search execution shared by the CLI and the HTTP service.

Both front ends funnel through run_search so their JSON answers are the
same object: parse and validate the query, prune candidates through the
snapshot indices, match, order, paginate.
"""

from dataclasses import dataclass

from .matching import MatchContext, default_context, match_corpus
from .query import Query, query_from_document, parse_query, validate_query
from .ranking import DEFAULT_SEED, RANDOMIZED, OrderingStrategy, order_results
from .store import CorpusSnapshot

THUMBNAIL_URL = "/api/charts/{chart_id}/preview.svg"


@dataclass(frozen=True)
class SearchOutcome:
    query: Query
    strategy: OrderingStrategy
    results: list
    diagnostics: list
    warnings: list
    evaluated: int
    limit: int | None = None
    offset: int = 0

    @property
    def total(self) -> int:
        return len(self.results)

    def page(self) -> list:
        if self.limit is None:
            return self.results[self.offset :]
        return self.results[self.offset : self.offset + self.limit]

    def all_errors(self) -> bool:
        """True when every evaluated chart failed with an evaluation
        error and nothing matched; the query likely misuses types."""
        return (
            not self.results
            and self.evaluated > 0
            and len({d.get("chartId") for d in self.diagnostics}) == self.evaluated
        )


def coerce_query(raw) -> tuple[Query, list]:
    """Query text or a pre-parsed JSON document to a validated Query."""
    if isinstance(raw, str):
        query = parse_query(raw)
    else:
        query = query_from_document(raw)
    return query, validate_query(query)


def run_search(
    snapshot: CorpusSnapshot,
    query: Query,
    *,
    strategy: OrderingStrategy | None = None,
    limit: int | None = None,
    offset: int = 0,
    partial: bool = False,
    context: MatchContext | None = None,
    warnings: list | None = None,
) -> SearchOutcome:
    strategy = strategy or OrderingStrategy(RANDOMIZED, DEFAULT_SEED)
    if limit is not None and limit < 0:
        raise ValueError("limit must be non-negative")
    if offset < 0:
        raise ValueError("offset must be non-negative")
    candidate_ids = snapshot.candidate_ids(query)
    if candidate_ids is None:
        charts = snapshot.charts_sorted()
    else:
        charts = [snapshot.get(cid) for cid in sorted(candidate_ids)]
    results, diagnostics = match_corpus(query, charts, context or default_context(), partial=partial)
    ordered = order_results(results, strategy)
    return SearchOutcome(
        query=query,
        strategy=strategy,
        results=ordered,
        diagnostics=diagnostics,
        warnings=list(warnings or []),
        evaluated=len(charts),
        limit=limit,
        offset=offset,
    )


def result_row(result, snapshot: CorpusSnapshot) -> dict:
    chart = snapshot.get(result.chart_id)
    row = result.to_dict()
    row["metadata"] = chart.metadata.to_dict() if chart else None
    row["thumbnailUrl"] = THUMBNAIL_URL.format(chart_id=result.chart_id)
    return row


def outcome_to_json(outcome: SearchOutcome, snapshot: CorpusSnapshot) -> dict:
    return {
        "total": outcome.total,
        "strategy": outcome.strategy.name,
        "seed": outcome.strategy.seed,
        "limit": outcome.limit,
        "offset": outcome.offset,
        "results": [result_row(r, snapshot) for r in outcome.page()],
        "diagnostics": outcome.diagnostics,
        "warnings": [w.to_dict() for w in outcome.warnings],
    }
