"""HTTP API over a chart corpus.

Endpoints are thin adapters: search calls the same run_search the CLI
uses, so both emit identical JSON for identical inputs. The request body
for search is parsed by hand rather than through the framework so that
malformed JSON comes back as a 400 carrying the parser's position.
"""

import json
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .demographics import REPORT_NAMES, analyze
from .example_query import spec_to_query
from .preview import render_preview
from .query import QueryError, QuerySchemaError, QuerySyntaxError, query_to_document, validate_query
from .ranking import RANDOMIZED, RANKED, OrderingStrategy
from .search import outcome_to_json, coerce_query, run_search
from .store import CorpusStore


def _schema_bytes() -> bytes:
    return (resources.files("chartsearch") / "schema" / "query-schema.json").read_bytes()


def _error(status: int, payload: dict) -> JSONResponse:
    return JSONResponse(status_code=status, content=payload)


def _bad_request(exc: QueryError) -> JSONResponse:
    if isinstance(exc, (QuerySyntaxError, QuerySchemaError)):
        return _error(400, exc.to_dict())
    return _error(400, {"error": "query", "message": str(exc)})


def _positive_int(body: dict, key: str, default, maximum=None):
    value = body.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{key} must be a non-negative integer")
    if maximum is not None:
        value = min(value, maximum)
    return value


def create_app(store: CorpusStore | None = None, corpus_dir: str | Path | None = None) -> FastAPI:
    if store is None:
        if corpus_dir is None:
            raise ValueError("either store or corpus_dir is required")
        store = CorpusStore(corpus_dir)

    app = FastAPI(title="chartsearch", docs_url=None, redoc_url=None)
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health():
        return {"status": "ok", "corpusSize": len(store.snapshot())}

    @app.get("/api/schema")
    def schema():
        return Response(content=_schema_bytes(), media_type="application/json")

    @app.post("/api/search")
    async def search(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw.decode("utf-8") if raw else "")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            payload = {"error": "syntax", "message": str(exc)}
            if isinstance(exc, json.JSONDecodeError):
                payload.update(position=exc.pos, line=exc.lineno, column=exc.colno)
            return _error(400, payload)
        if not isinstance(body, dict) or "query" not in body:
            return _error(400, {"error": "request", "message": "body must be an object with a query"})

        try:
            query, warnings = coerce_query(body["query"])
        except QueryError as exc:
            return _bad_request(exc)

        strategy_name = body.get("strategy", RANDOMIZED)
        if strategy_name not in (RANKED, RANDOMIZED):
            return _error(400, {"error": "request", "message": f"unknown strategy {strategy_name!r}"})
        try:
            seed = body.get("seed", 0)
            if isinstance(seed, bool) or not isinstance(seed, int):
                raise ValueError("seed must be an integer")
            limit = _positive_int(body, "limit", None)
            offset = _positive_int(body, "offset", 0)
        except ValueError as exc:
            return _error(400, {"error": "request", "message": str(exc)})

        snapshot = store.snapshot()
        outcome = run_search(
            snapshot,
            query,
            strategy=OrderingStrategy(strategy_name, seed),
            limit=limit,
            offset=offset or 0,
            warnings=warnings,
        )
        if outcome.all_errors():
            return _error(422, {"error": "evaluation", "diagnostics": outcome.diagnostics})
        return outcome_to_json(outcome, snapshot)

    @app.post("/api/search/by-example")
    async def search_by_example(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw.decode("utf-8") if raw else "")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return _error(400, {"error": "syntax", "message": str(exc)})
        if not isinstance(body, dict) or not isinstance(body.get("chartId"), str):
            return _error(400, {"error": "request", "message": "body must be an object with a chartId"})

        snapshot = store.snapshot()
        chart = snapshot.get(body["chartId"])
        if chart is None:
            return _error(404, {"error": "not-found", "chartId": body["chartId"]})
        try:
            limit = _positive_int(body, "limit", None)
            offset = _positive_int(body, "offset", 0)
        except ValueError as exc:
            return _error(400, {"error": "request", "message": str(exc)})

        query = spec_to_query(chart)
        outcome = run_search(
            snapshot,
            query,
            strategy=OrderingStrategy(RANKED, 0),
            limit=limit,
            offset=offset or 0,
            partial=True,
            warnings=validate_query(query),
        )
        payload = outcome_to_json(outcome, snapshot)
        payload["query"] = query_to_document(query)
        payload["sourceChartId"] = chart.id
        return payload

    @app.get("/api/charts/{chart_id}")
    def get_chart(chart_id: str):
        chart = store.snapshot().get(chart_id)
        if chart is None:
            return _error(404, {"error": "not-found", "chartId": chart_id})
        return chart.to_dict()

    @app.get("/api/charts/{chart_id}/preview.svg")
    def get_preview(chart_id: str, width: int = 320, height: int = 210):
        chart = store.snapshot().get(chart_id)
        if chart is None:
            return _error(404, {"error": "not-found", "chartId": chart_id})
        width = max(16, min(width, 2000))
        height = max(16, min(height, 2000))
        return Response(content=render_preview(chart, width, height), media_type="image/svg+xml")

    @app.get("/api/demographics")
    def demographics_report(report: str = ""):
        if report not in REPORT_NAMES:
            return _error(404, {"error": "not-found", "report": report, "known": list(REPORT_NAMES)})
        return analyze(store.snapshot().charts_sorted(), report)

    @app.post("/api/ingest")
    async def ingest(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw.decode("utf-8") if raw else "")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return _error(400, {"error": "syntax", "message": str(exc)})
        if not isinstance(body, dict) or not isinstance(body.get("dir"), str):
            return _error(400, {"error": "request", "message": "body must be an object with a dir"})
        directory = Path(body["dir"])
        if not directory.is_dir():
            return _error(400, {"error": "request", "message": f"not a directory: {directory}"})
        if not store.try_begin_write():
            return _error(409, {"error": "busy", "message": "a write is already in progress"})
        try:
            report = store.ingest_dir(directory)
        finally:
            store.end_write()
        return report.to_dict()

    return app
