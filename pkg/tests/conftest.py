import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chartsearch.model import (
    Axis,
    ChartMetadata,
    ChartSpec,
    DataField,
    Encoding,
    Mark,
    normalize_rect_to_bar,
    with_content_id,
)
from chartsearch.store import CorpusStore
from chartsearch.synth import SynthRecipe, synthesize, write_corpus


@pytest.fixture
def four_bar_chart() -> ChartSpec:
    """A four-bar chart in raw form: one rect mark with four instances,
    constant width, so normalization retypes it to bar."""
    return with_content_id(
        ChartSpec(
            id="",
            fields=(
                DataField("race", "nominal", ("white", "black", "hispanic", "asian")),
                DataField("percent", "quantitative", (60.1, 13.4, 18.5, 5.9)),
            ),
            marks=(
                Mark(
                    id="m0",
                    mtype="rect",
                    attrs={
                        "x": (80.0, 180.0, 280.0, 380.0),
                        "y": (100.0, 240.1, 224.8, 262.6),
                        "width": (40.0, 40.0, 40.0, 40.0),
                        "height": (180.3, 40.2, 55.5, 17.7),
                        "fill": ("#4c78a8", "#f58518", "#e45756", "#72b7b2"),
                    },
                    style_attrs={"typeface": "Helvetica", "background": "#ffffff"},
                ),
            ),
            encodings=(
                Encoding("race", "nominal", "rect", "x"),
                Encoding("race", "nominal", "rect", "color"),
                Encoding("percent", "quantitative", "rect", "y"),
                Encoding("percent", "quantitative", "rect", "height"),
            ),
            axes=(
                Axis("x-axis", "bottom", field_name="race"),
                Axis("y-axis", "left", field_name="percent", title="Percent", tick_color="#333333", tick_width=1.0),
            ),
            metadata=ChartMetadata(
                url="https://stats.example.org/articles/census",
                domain="stats.example.org",
                title="Population share by race",
                page_text="Census figures break the population share down by race.",
                timestamp="2024-03-01T00:00:00Z",
            ),
            background="#ffffff",
        )
    )


@pytest.fixture(scope="session")
def small_synth():
    return synthesize(SynthRecipe(seed=7, count=40))


@pytest.fixture(scope="session")
def small_corpus_dir(tmp_path_factory, small_synth):
    charts, truth = small_synth
    out = tmp_path_factory.mktemp("corpus-small")
    write_corpus(charts, truth, out)
    return out


@pytest.fixture
def small_store(tmp_path, small_corpus_dir) -> CorpusStore:
    store = CorpusStore(tmp_path / "store")
    store.ingest_dir(small_corpus_dir)
    return store


@pytest.fixture(scope="session")
def corpus1000():
    return synthesize(SynthRecipe(seed=42, count=1000))


@pytest.fixture(scope="session")
def normalized1000(corpus1000):
    charts, truth = corpus1000
    return [normalize_rect_to_bar(c) for c in charts], truth


@pytest.fixture(scope="session")
def corpus1000_dir(tmp_path_factory, corpus1000):
    charts, truth = corpus1000
    out = tmp_path_factory.mktemp("corpus-1000")
    write_corpus(charts, truth, out)
    return out


@pytest.fixture(scope="session")
def store1000(tmp_path_factory, corpus1000_dir) -> CorpusStore:
    """Shared read-only store over the 1,000-chart corpus. Tests that
    write must build their own store."""
    store = CorpusStore(tmp_path_factory.mktemp("store-1000") / "store")
    store.ingest_dir(corpus1000_dir)
    return store


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of a run."""
    outcomes: dict = {}
    for reports in terminalreporter.stats.values():
        for report in reports:
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            line = getattr(report, "location", (None, 0, None))[1] or 0
            if getattr(report, "failed", False):
                outcomes[name] = (line, "FAIL")
            elif getattr(report, "passed", False) and getattr(report, "when", "") == "call":
                outcomes.setdefault(name, (line, "PASS"))
            elif getattr(report, "skipped", False):
                outcomes.setdefault(name, (line, "SKIP"))
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, (_, verdict) in sorted(outcomes.items(), key=lambda kv: kv[1][0]):
        terminalreporter.write_line(f"{verdict}  {name}")
