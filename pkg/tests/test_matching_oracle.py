"""The matcher against a brute-force reference.

oracle.py enumerates complete variable bindings over each chart's string
universe and tries every injective clause-to-encoding assignment via
itertools.permutations; matching.py does backtracking with incremental
unification. Agreement across adversarial generated pairs is the core
correctness argument for the matcher.
"""

import json
import random

import pytest

from chartsearch.matching import match_chart
from chartsearch.model import ChartSpec, DataField, Encoding, Mark
from chartsearch.query import parse_query, query_to_document

from fuzz import random_chart, random_query
from oracle import brute_force_match


def disagreement_message(query, chart, engine, oracle):
    return (
        f"engine={engine} oracle={oracle}\n"
        f"query: {json.dumps(query_to_document(query))}\n"
        f"chart: {json.dumps(chart.to_dict(), indent=1)}"
    )


@pytest.mark.parametrize("seed", [1, 7, 42, 20260816])
def test_engine_agrees_with_oracle(seed):
    rng = random.Random(seed)
    for _ in range(250):
        chart = random_chart(rng)
        query = random_query(rng, chart)
        engine = match_chart(query, chart).matched
        oracle = brute_force_match(query, chart)
        assert engine == oracle, disagreement_message(query, chart, engine, oracle)


def make_chart(encodings, marks=None, fields=None):
    fields = fields or [
        DataField("f_one", "nominal", ("alpha", "bravo")),
        DataField("f_two", "quantitative", (1.0, 2.0)),
        DataField("f_three", "quantitative", (3.0, 4.0)),
        DataField("f_four", "nominal", ("golf", "hotel")),
    ]
    marks = marks or [Mark("m0", "ellipse", {"x": (1.0, 2.0)}, {"typeface": "Arial"})]
    return ChartSpec(
        id="c0",
        fields=tuple(fields),
        marks=tuple(marks),
        encodings=tuple(Encoding(*e) for e in encodings),
    )


class TestCountClauseCorners:
    """Regression shapes found by the fuzzer: zero-claim count clauses whose
    variables never bind during assignment still quantify existentially."""

    def test_variable_in_zero_count_clause_can_avoid_matches(self):
        chart = make_chart(
            [("f_two", "quantitative", "ellipse", "y"), ("f_one", "nominal", "ellipse", "y")],
            marks=[
                Mark("m0", "ellipse", {"y": (1.0, 2.0)}),
                Mark("m1", "line", {"x": (0.0, 1.0)}),
            ],
        )
        query = parse_query(
            '{"mark": "ellipse|line", "encoding": ['
            '{"channel": "y", "type": "nominal"},'
            '{"channel": "$a", "field": "f_one", "count": {"lt": 1}}]}'
        )
        result = match_chart(query, chart)
        assert result.matched, "a fresh $a value matches zero f_one encodings"
        assert brute_force_match(query, chart)

    def test_variable_field_count_upper_bound(self):
        chart = make_chart(
            [
                ("f_three", "quantitative", "ellipse", "shape"),
                ("f_one", "nominal", "ellipse", "size"),
                ("f_four", "nominal", "ellipse", "angle"),
                ("f_two", "quantitative", "ellipse", "angle"),
            ]
        )
        query = parse_query(
            '{"mark": "*", "encoding": ['
            '{"field": "$a", "count": {"lt": 2}},'
            "{},"
            '{"field": "f_one", "count": {"eq": 1}}]}'
        )
        assert match_chart(query, chart).matched
        assert brute_force_match(query, chart)

    def test_bound_variable_constrains_count_globally(self):
        # $a binds through the first clause, so the count clause sees the
        # bound value, not a per-encoding wildcard.
        chart = make_chart(
            [
                ("f_one", "nominal", "ellipse", "x"),
                ("f_one", "nominal", "ellipse", "color"),
                ("f_two", "quantitative", "ellipse", "y"),
            ]
        )
        accepted = parse_query(
            '{"encoding": [{"field": "$a", "channel": "y"}, {"field": "$a", "count": {"lte": 1}}]}'
        )
        result = match_chart(accepted, chart)
        assert result.matched and result.binding == {"$a": "f_two"}
        rejected = parse_query(
            '{"encoding": [{"field": "$a", "channel": "x"}, {"field": "$a", "count": {"lte": 1}}]}'
        )
        # The x channel forces $a = f_one, which appears twice.
        assert not match_chart(rejected, chart).matched
        assert brute_force_match(accepted, chart)
        assert not brute_force_match(rejected, chart)

    def test_positive_count_claims_are_injective_with_other_clauses(self):
        # A count of exactly 1 claims its own encoding; a clause that already
        # consumed the only candidate starves it.
        chart = make_chart(
            [
                ("f_one", "nominal", "ellipse", "x"),
                ("f_one", "nominal", "ellipse", "color"),
                ("f_two", "quantitative", "ellipse", "y"),
            ]
        )
        starved = parse_query(
            '{"encoding": [{"field": "$a", "channel": "y"}, {"field": "$a", "count": {"eq": 1}}]}'
        )
        assert not match_chart(starved, chart).matched
        assert not brute_force_match(starved, chart)

    def test_count_zero_forbids_any_match(self):
        chart = make_chart([("f_one", "nominal", "ellipse", "x")])
        query = parse_query('{"mark": "*", "encoding": {"channel": "x", "count": {"eq": 0}}}')
        assert not match_chart(query, chart).matched
        query = parse_query('{"mark": "*", "encoding": {"channel": "color", "count": {"eq": 0}}}')
        assert match_chart(query, chart).matched

    def test_count_clause_consumes_smallest_satisfying(self):
        chart = make_chart(
            [
                ("f_one", "nominal", "ellipse", "x"),
                ("f_one", "nominal", "ellipse", "color"),
                ("f_two", "quantitative", "ellipse", "y"),
            ]
        )
        query = parse_query('{"encoding": [{"field": "f_one", "count": {"gte": 2}}, {}]}')
        result = match_chart(query, chart)
        assert result.matched
        # Two consumed by the counting clause, one by the bare clause.
        assert result.matched_encoding_count == 3
        assert result.unmatched_chart_encoding_count == 0


class TestInjectiveAssignment:
    def test_two_clauses_cannot_share_one_encoding(self):
        chart = make_chart([("f_one", "nominal", "ellipse", "x")])
        query = parse_query('{"encoding": [{"channel": "x"}, {"channel": "x"}]}')
        assert not match_chart(query, chart).matched

    def test_assignment_backtracks_over_greedy_choice(self):
        # The x|y clause must leave the x encoding for the stricter clause.
        chart = make_chart(
            [
                ("f_one", "nominal", "ellipse", "x"),
                ("f_two", "quantitative", "ellipse", "y"),
            ]
        )
        query = parse_query(
            '{"encoding": [{"channel": "x|y"}, {"channel": "x", "type": "nominal"}]}'
        )
        assert match_chart(query, chart).matched

    def test_variable_unifies_across_clause_kinds(self):
        chart = make_chart(
            [
                ("f_one", "nominal", "ellipse", "x"),
                ("f_two", "quantitative", "ellipse", "y"),
            ]
        )
        query = parse_query(
            '{"data": {"field": "$t"}, "encoding": {"field": "$t", "channel": "y"}}'
        )
        result = match_chart(query, chart)
        assert result.matched
        assert result.binding == {"$t": "f_two"}


def test_matched_and_unmatched_counts_follow_claims():
    rng = random.Random(88)
    for _ in range(150):
        chart = random_chart(rng)
        query = random_query(rng, chart)
        result = match_chart(query, chart)
        if not result.matched:
            assert result.matched_encoding_count == 0
            continue
        assert 0 <= result.matched_encoding_count <= len(chart.encodings)
        assert result.unmatched_chart_encoding_count == len(chart.encodings) - result.matched_encoding_count
