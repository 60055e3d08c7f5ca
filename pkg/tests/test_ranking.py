import functools
import json
import random
from pathlib import Path

import pytest

from chartsearch.matching import MatchResult, match_corpus
from chartsearch.model import normalize_rect_to_bar
from chartsearch.query import parse_query
from chartsearch.ranking import (
    DEFAULT_SEED,
    RANDOMIZED,
    RANKED,
    OrderingStrategy,
    SplitMix64,
    order_results,
    shuffled,
)

GOLDEN = Path(__file__).parent / "golden" / "randomized_order.json"


def result(chart_id, matched_count, unmatched_count):
    return MatchResult(
        chart_id=chart_id,
        matched=True,
        binding={},
        matched_encoding_count=matched_count,
        unmatched_chart_encoding_count=unmatched_count,
        diagnostics=(),
    )


def reference_compare(a: MatchResult, b: MatchResult) -> int:
    """Ordering rules written out longhand, independent of sort_key."""
    if a.matched_encoding_count != b.matched_encoding_count:
        return -1 if a.matched_encoding_count > b.matched_encoding_count else 1
    if a.unmatched_chart_encoding_count != b.unmatched_chart_encoding_count:
        return -1 if a.unmatched_chart_encoding_count < b.unmatched_chart_encoding_count else 1
    if a.chart_id != b.chart_id:
        return -1 if a.chart_id < b.chart_id else 1
    return 0


class TestRankedOrder:
    def test_agrees_with_independent_sort_on_random_inputs(self):
        rng = random.Random(17)
        for _ in range(200):
            results = [
                result(f"c{rng.randrange(30):02d}", rng.randrange(5), rng.randrange(5))
                for _ in range(rng.randrange(1, 25))
            ]
            got = order_results(results, OrderingStrategy(RANKED))
            want = sorted(results, key=functools.cmp_to_key(reference_compare))
            assert got == want

    def test_more_matches_win(self):
        rs = [result("ca", 1, 0), result("cb", 3, 5)]
        assert [r.chart_id for r in order_results(rs, OrderingStrategy(RANKED))] == ["cb", "ca"]

    def test_fewer_surplus_encodings_break_ties(self):
        rs = [result("ca", 2, 4), result("cb", 2, 1)]
        assert [r.chart_id for r in order_results(rs, OrderingStrategy(RANKED))] == ["cb", "ca"]

    def test_chart_id_makes_order_total(self):
        rs = [result("cb", 2, 2), result("ca", 2, 2)]
        assert [r.chart_id for r in order_results(rs, OrderingStrategy(RANKED))] == ["ca", "cb"]

    def test_order_is_a_permutation(self):
        rng = random.Random(23)
        results = [result(f"c{i}", rng.randrange(4), rng.randrange(4)) for i in range(40)]
        for strategy in (OrderingStrategy(RANKED), OrderingStrategy(RANDOMIZED, 9)):
            got = order_results(results, strategy)
            assert sorted(r.chart_id for r in got) == sorted(r.chart_id for r in results)


class TestRandomizedOrder:
    def test_same_seed_reproduces(self):
        items = list(range(100))
        assert shuffled(items, 42) == shuffled(items, 42)
        assert order_results(items, OrderingStrategy(RANDOMIZED, 7)) == order_results(
            items, OrderingStrategy(RANDOMIZED, 7)
        )

    def test_different_seeds_differ(self):
        items = list(range(100))
        assert shuffled(items, 42) != shuffled(items, 43)

    def test_input_not_mutated(self):
        items = [3, 1, 2]
        shuffled(items, 5)
        assert items == [3, 1, 2]

    def test_default_strategy_is_randomized_seed_zero(self):
        strategy = OrderingStrategy()
        assert strategy.name == RANDOMIZED
        assert strategy.seed == DEFAULT_SEED

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError):
            OrderingStrategy("alphabetical")


class TestSplitMix64:
    def test_published_reference_outputs(self):
        # First three outputs of splitmix64 for seed 0 and the first for
        # seed 1, as published with the algorithm.
        rng = SplitMix64(0)
        assert [rng.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]
        assert SplitMix64(1).next_u64() == 0x910A2DEC89025CC1

    def test_seed_wraps_to_64_bits(self):
        assert SplitMix64(1 << 64).next_u64() == SplitMix64(0).next_u64()

    def test_below_range_and_determinism(self):
        rng = SplitMix64(99)
        draws = [rng.below(10) for _ in range(1000)]
        assert set(draws) <= set(range(10))
        assert len(set(draws)) == 10
        replay = SplitMix64(99)
        assert draws == [replay.below(10) for _ in range(1000)]

    def test_below_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SplitMix64(0).below(0)


def test_randomized_corpus_order_matches_golden_file(small_synth):
    """The shuffle is part of the API surface: a seed must reproduce its
    order across releases, so the first ten ids are pinned."""
    charts, _ = small_synth
    normalized = [normalize_rect_to_bar(c) for c in charts]
    results, _ = match_corpus(parse_query('{"encoding": {}}'), normalized)
    ordered = order_results(results, OrderingStrategy(RANDOMIZED, 12345))
    got = [r.chart_id for r in ordered][:10]
    want = json.loads(GOLDEN.read_text())
    assert got == want
