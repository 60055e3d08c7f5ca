"""Command-line driver.

Search and analyze emit the same JSON bodies the HTTP service returns
for the same corpus and parameters; table output is fixed at 100
columns. Exit codes: 0 success, 1 operational error, 2 usage or parse
error.
"""

import json
import sys
from pathlib import Path

import click

from .demographics import REPORT_NAMES, analyze, report_to_text
from .model import parse_spec, validate_spec
from .query import QueryError, QuerySchemaError, QuerySyntaxError
from .ranking import RANDOMIZED, RANKED, OrderingStrategy
from .search import coerce_query, outcome_to_json, run_search
from .store import CorpusStore
from .synth import DEFAULT_MIX, FAMILIES, SynthRecipe, synthesize, write_corpus

_CORPUS_ENV = "CHARTSEARCH_CORPUS"
_TABLE_WIDTH = 100


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _open_store(corpus: str | None) -> CorpusStore:
    if not corpus:
        _fail(f"no corpus directory; pass --corpus or set {_CORPUS_ENV}", 2)
    path = Path(corpus)
    try:
        return CorpusStore(path)
    except OSError as exc:
        _fail(f"cannot open corpus at {path}: {exc}", 1)


def _corpus_option(func):
    return click.option(
        "--corpus",
        envvar=_CORPUS_ENV,
        metavar="DIR",
        help=f"Corpus directory (or ${_CORPUS_ENV}).",
    )(func)


@click.group()
@click.version_option(package_name="chartsearch", prog_name="chartsearch")
def main():
    """Search and analyze corpora of deconstructed chart specs."""


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@_corpus_option
def ingest(directory, corpus):
    """Load every *.chart.json under DIRECTORY into the corpus."""
    store = _open_store(corpus)
    report = store.ingest_dir(directory)
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    if report.rejected:
        sys.exit(1)


def _parse_mix(text: str | None) -> dict:
    if not text:
        return dict(DEFAULT_MIX)
    mix = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        name, _, prop = piece.partition("=")
        name = name.strip()
        if name not in FAMILIES:
            raise click.BadParameter(f"unknown family {name!r}; known: {', '.join(FAMILIES)}", param_hint="--mix")
        try:
            mix[name] = float(prop)
        except ValueError:
            raise click.BadParameter(f"bad proportion for {name!r}: {prop!r}", param_hint="--mix") from None
    if not mix:
        raise click.BadParameter("empty mix", param_hint="--mix")
    return mix


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--mix", "mix_text", metavar="FAM=PROP,...", help="Family proportions; must sum to 1.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), metavar="DIR")
def synth(seed, count, mix_text, out_dir):
    """Generate a synthetic corpus with ground truth."""
    mix = _parse_mix(mix_text)
    try:
        recipe = SynthRecipe(seed=seed, count=count, mix=mix)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    charts, ground_truth = synthesize(recipe)
    write_corpus(charts, ground_truth, out_dir)
    click.echo(json.dumps({"charts": len(charts), "out": str(out_dir)}, sort_keys=True))


def _read_query_text(raw: str) -> str:
    if raw == "-":
        return sys.stdin.read()
    return raw


def _search_table(payload: dict) -> str:
    rows = payload["results"]
    lines = [
        f"total: {payload['total']}  strategy: {payload['strategy']}  seed: {payload['seed']}",
        f"{'chart id':<20}{'matched':>8}{'unmatched':>10}  {'domain':<18}title",
        "-" * _TABLE_WIDTH,
    ]
    for row in rows:
        meta = row.get("metadata") or {}
        title = meta.get("title", "")
        if len(title) > 40:
            title = title[:39] + "…"
        lines.append(
            f"{row['chartId']:<20}{row['matchedEncodingCount']:>8}{row['unmatchedChartEncodingCount']:>10}"
            f"  {meta.get('domain', ''):<18}{title}"
        )
    if payload["diagnostics"]:
        lines.append(f"diagnostics: {len(payload['diagnostics'])} chart(s) reported evaluation errors")
    for warning in payload.get("warnings", []):
        lines.append(f"warning: {warning['path']}: {warning['message']}")
    return "\n".join(lines)


@main.command()
@click.option("-q", "--query", "query_text", required=True, metavar="QUERY", help="Query JSON, or - for stdin.")
@click.option("--strategy", type=click.Choice([RANKED, RANDOMIZED]), default=RANDOMIZED, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--limit", type=int, default=None)
@click.option("--offset", type=int, default=0)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@_corpus_option
def search(query_text, strategy, seed, limit, offset, fmt, corpus):
    """Run a query against the corpus."""
    store = _open_store(corpus)
    try:
        query, warnings = coerce_query(_read_query_text(query_text))
    except QuerySyntaxError as exc:
        _fail(f"query parse failed at line {exc.line} column {exc.column} (char {exc.position}): {exc}", 2)
    except (QuerySchemaError, QueryError) as exc:
        _fail(f"invalid query: {exc}", 2)
    if limit is not None and limit < 0:
        _fail("limit must be non-negative", 2)
    if offset < 0:
        _fail("offset must be non-negative", 2)

    snapshot = store.snapshot()
    outcome = run_search(
        snapshot,
        query,
        strategy=OrderingStrategy(strategy, seed),
        limit=limit,
        offset=offset,
        warnings=warnings,
    )
    payload = outcome_to_json(outcome, snapshot)
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(_search_table(payload))
    if outcome.all_errors():
        click.echo("error: every evaluated chart raised a query-evaluation error", err=True)
        sys.exit(1)


# Named explicitly: the function name would clash with the imported
# library function.
@main.command("analyze")
@click.option("--report", required=True, type=click.Choice(list(REPORT_NAMES)))
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@_corpus_option
def analyze_cmd(report, fmt, corpus):
    """Corpus demographics reports."""
    store = _open_store(corpus)
    payload = analyze(store.snapshot().charts_sorted(), report)
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(report_to_text(payload))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_corpus_option
def serve(port, host, corpus):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    store = _open_store(corpus)
    uvicorn.run(create_app(store=store), host=host, port=port, log_level="warning")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def validate(file):
    """Validate a chart spec file; exit 0 when clean."""
    text = Path(file).read_text(encoding="utf-8")
    try:
        json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"{file}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", 2)
    try:
        spec = parse_spec(text)
    except (KeyError, TypeError, ValueError) as exc:
        _fail(f"{file}: not a chart spec: {exc}", 1)
    violations = validate_spec(spec)
    for violation in violations:
        click.echo(f"{violation.vtype} at {violation.path}: {violation.message}")
    if violations:
        sys.exit(1)
    click.echo("ok")


if __name__ == "__main__":
    main()
