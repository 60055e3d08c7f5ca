import json
import statistics

import pytest

from chartsearch.model import content_id, normalize_rect_to_bar, parse_spec
from chartsearch.synth import (
    DEFAULT_MIX,
    FAMILIES,
    SynthRecipe,
    apportion,
    synthesize,
    write_corpus,
)


class TestApportion:
    def test_exact_split(self):
        assert apportion(10, {"a": 0.5, "b": 0.5}) == {"a": 5, "b": 5}

    def test_largest_remainder_with_name_ties(self):
        # Equal remainders resolve alphabetically, so a gets the leftover.
        assert apportion(3, {"a": 0.5, "b": 0.5}) == {"a": 2, "b": 1}

    def test_total_is_preserved(self):
        for total in (1, 7, 99, 1000):
            plan = apportion(total, DEFAULT_MIX)
            assert sum(plan.values()) == total
            assert all(n > 0 for n in plan.values())

    def test_zero_proportions_get_nothing(self):
        assert apportion(10, {"a": 1.0, "b": 0.0}) == {"a": 10}

    def test_default_mix_at_1000(self):
        assert apportion(1000, DEFAULT_MIX) == {
            "vertical-bar": 140,
            "horizontal-bar": 100,
            "grouped-bar": 80,
            "scatter": 200,
            "bubble": 100,
            "line": 120,
            "donut": 80,
            "heatmap": 80,
            "text-table": 100,
        }


class TestRecipe:
    def test_count_must_be_positive(self):
        with pytest.raises(ValueError, match="count"):
            SynthRecipe(count=0)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError, match="sankey"):
            SynthRecipe(mix={"sankey": 1.0})

    def test_mix_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum"):
            SynthRecipe(mix={"line": 0.7})


class TestDeterminism:
    def test_same_seed_same_output(self):
        a_charts, a_truth = synthesize(SynthRecipe(seed=5, count=25))
        b_charts, b_truth = synthesize(SynthRecipe(seed=5, count=25))
        assert [c.to_dict() for c in a_charts] == [c.to_dict() for c in b_charts]
        assert a_truth == b_truth

    def test_different_seeds_differ(self):
        a_charts, _ = synthesize(SynthRecipe(seed=5, count=25))
        b_charts, _ = synthesize(SynthRecipe(seed=6, count=25))
        assert {c.id for c in a_charts} != {c.id for c in b_charts}

    def test_charts_sorted_with_content_ids(self, small_synth):
        charts, _ = small_synth
        ids = [c.id for c in charts]
        assert ids == sorted(ids)
        for chart in charts:
            assert chart.id == content_id(chart)


class TestGroundTruth:
    def test_every_chart_has_an_entry(self, small_synth):
        charts, truth = small_synth
        assert set(truth["charts"]) == {c.id for c in charts}
        assert truth["seed"] == 7
        assert truth["count"] == 40 == len(charts)

    def test_family_counts_follow_the_plan(self, small_synth):
        charts, truth = small_synth
        plan = apportion(40, DEFAULT_MIX)
        by_family: dict = {}
        for entry in truth["charts"].values():
            by_family[entry["family"]] = by_family.get(entry["family"], 0) + 1
        assert by_family == plan

    def test_entries_describe_the_normalized_chart(self, small_synth):
        charts, truth = small_synth
        for chart in charts:
            entry = truth["charts"][chart.id]
            normalized = normalize_rect_to_bar(chart)
            assert entry["domain"] == chart.metadata.domain
            assert entry["background"] == chart.background
            assert entry["markTypes"] == sorted({m.mtype for m in normalized.marks})
            assert entry["fieldDtypes"] == {f.name: f.dtype for f in normalized.fields}
            recorded = [
                (e["channel"], e["dtype"], e["mtype"], e["field"]) for e in entry["encodings"]
            ]
            actual = [
                (e.channel, e.dtype, e.mtype, e.field_name) for e in normalized.encodings
            ]
            assert recorded == actual

    def test_bar_families_arrive_as_rects(self, small_synth):
        charts, truth = small_synth
        for chart in charts:
            entry = truth["charts"][chart.id]
            if entry["family"] in ("vertical-bar", "horizontal-bar", "grouped-bar"):
                assert {m.mtype for m in chart.marks} == {"rect"}
                assert "bar" in entry["markTypes"]

    def test_planted_flags_hold_on_the_charts(self, small_synth):
        charts, truth = small_synth
        for chart in charts:
            entry = truth["charts"][chart.id]
            normalized = normalize_rect_to_bar(chart)
            if entry["isDense"]:
                assert any(len(f.values) >= 1500 for f in normalized.fields)
            if entry["isDivergingBar"]:
                quant = [f for f in normalized.fields if f.dtype == "quantitative"]
                assert any(min(f.values) < 0 < max(f.values) for f in quant)
            if entry["isRedundant"]:
                positional = {
                    e.field_name for e in normalized.encodings if e.channel in ("x", "y")
                }
                colored = {e.field_name for e in normalized.encodings if e.channel == "color"}
                assert positional & colored
            if entry["isColoredCircleScatter"]:
                combos = {(e.channel, e.dtype) for e in normalized.encodings if e.mtype == "circle"}
                assert {("x", "quantitative"), ("y", "quantitative"), ("color", "nominal")} <= combos

    def test_planted_correlations_are_exact(self, small_synth):
        charts, truth = small_synth
        seen = set()
        for chart in charts:
            entry = truth["charts"][chart.id]
            planted = entry["plantedCorrelation"]
            if planted == 0:
                continue
            seen.add(planted)
            quant = [f for f in chart.fields if f.dtype == "quantitative"]
            rs = [
                statistics.correlation(list(a.values), list(b.values))
                for i, a in enumerate(quant)
                for b in quant[i + 1 :]
                if len(a.values) == len(b.values)
            ]
            assert any(r == pytest.approx(planted, abs=1e-9) for r in rs), chart.id

    def test_fill_color_counts_match_the_marks(self, small_synth):
        charts, truth = small_synth
        for chart in charts:
            entry = truth["charts"][chart.id]
            if entry["distinctFillColors"] is None:
                continue
            normalized = normalize_rect_to_bar(chart)
            mtypes = {
                e.mtype
                for e in normalized.encodings
                if e.channel == "color" and e.dtype == "nominal"
            }
            colors = set()
            for mark in normalized.marks:
                if mark.mtype in mtypes and "color" in mark.attrs:
                    colors.update(mark.attrs["color"])
            assert entry["distinctFillColors"] == len(colors)


class TestMixControl:
    def test_restricted_mix_only_builds_those_families(self):
        charts, truth = synthesize(SynthRecipe(seed=3, count=10, mix={"heatmap": 0.5, "donut": 0.5}))
        families = {entry["family"] for entry in truth["charts"].values()}
        assert families == {"heatmap", "donut"}
        assert len(charts) == 10

    def test_all_families_have_builders(self):
        charts, truth = synthesize(
            SynthRecipe(seed=11, count=len(FAMILIES), mix={f: 1 / len(FAMILIES) for f in FAMILIES})
        )
        assert {e["family"] for e in truth["charts"].values()} == set(FAMILIES)


class TestWriteCorpus:
    def test_files_round_trip(self, small_synth, tmp_path):
        charts, truth = small_synth
        write_corpus(charts, truth, tmp_path)
        for chart in charts:
            text = (tmp_path / f"{chart.id}.chart.json").read_text()
            assert parse_spec(text) == chart
        assert json.loads((tmp_path / "ground_truth.json").read_text()) == truth
