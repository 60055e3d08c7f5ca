import json
import random
import threading

import pytest

from chartsearch.matching import match_chart
from chartsearch.model import content_id, normalize_rect_to_bar
from chartsearch.query import parse_query
from chartsearch.store import CorpusStore, build_indices, tokenize

from fuzz import random_query


class TestTokenize:
    def test_lowercases_and_splits_on_nonalnum(self):
        assert tokenize("The US: election-2024 (CNN)") == [
            "the",
            "us",
            "election",
            "2024",
            "cnn",
        ]

    def test_empty_and_symbol_only(self):
        assert tokenize("") == []
        assert tokenize("!!! --- ???") == []


class TestIngest:
    def test_ingest_accepts_and_normalizes(self, small_store, small_synth):
        charts, _ = small_synth
        snap = small_store.snapshot()
        assert len(snap) == len({c.id for c in charts})
        # rect marks that behave like bars are retyped during ingest
        for chart in charts:
            stored = snap.get(chart.id)
            assert stored == normalize_rect_to_bar(chart)

    def test_reingest_is_a_noop(self, small_store, small_corpus_dir):
        before = small_store.snapshot()
        report = small_store.ingest_dir(small_corpus_dir)
        after = small_store.snapshot()
        assert report.accepted == len(before)
        assert report.rejected == []
        assert after.charts == before.charts

    def test_missing_id_gets_content_hash(self, tmp_path, four_bar_chart):
        doc = four_bar_chart.to_dict()
        doc["id"] = ""
        src = tmp_path / "src"
        src.mkdir()
        (src / "a.chart.json").write_text(json.dumps(doc))
        store = CorpusStore(tmp_path / "store")
        report = store.ingest_dir(src)
        assert report.accepted == 1
        expected = content_id(normalize_rect_to_bar(four_bar_chart))
        assert store.snapshot().ids() == [expected]

    def test_invalid_spec_is_rejected_with_problems(self, tmp_path, four_bar_chart):
        doc = four_bar_chart.to_dict()
        doc["encodings"][0]["fieldName"] = "nope"
        src = tmp_path / "src"
        src.mkdir()
        (src / "bad.chart.json").write_text(json.dumps(doc))
        store = CorpusStore(tmp_path / "store")
        report = store.ingest_dir(src)
        assert report.accepted == 0
        assert len(store) == 0
        [(name, problems)] = report.rejected
        assert name == "bad.chart.json"
        assert any("dangling" in p for p in problems)

    def test_unreadable_file_is_rejected(self, tmp_path):
        src = tmp_path / "src"
        src.mkdir()
        (src / "junk.chart.json").write_text("{not json")
        store = CorpusStore(tmp_path / "store")
        report = store.ingest_dir(src)
        [(name, problems)] = report.rejected
        assert name == "junk.chart.json"
        assert problems[0].startswith("unreadable:")

    def test_duplicate_content_warns_and_stores_once(self, tmp_path, four_bar_chart):
        doc = json.dumps(four_bar_chart.to_dict())
        src = tmp_path / "src"
        src.mkdir()
        (src / "a.chart.json").write_text(doc)
        (src / "b.chart.json").write_text(doc)
        store = CorpusStore(tmp_path / "store")
        report = store.ingest_dir(src)
        assert report.accepted == 2
        assert len(store) == 1
        assert len(report.warnings) == 1
        assert "b.chart.json" in report.warnings[0]

    def test_only_chart_json_suffix_is_read(self, tmp_path, four_bar_chart):
        src = tmp_path / "src"
        src.mkdir()
        (src / "readme.json").write_text(json.dumps(four_bar_chart.to_dict()))
        store = CorpusStore(tmp_path / "store")
        report = store.ingest_dir(src)
        assert report.accepted == 0
        assert len(store) == 0

    def test_missing_directory_raises(self, tmp_path):
        store = CorpusStore(tmp_path / "store")
        with pytest.raises(FileNotFoundError):
            store.ingest_dir(tmp_path / "nowhere")


class TestLogAndManifest:
    def _log_lines(self, store):
        return [l for l in store.log_path.read_text().splitlines() if l.strip()]

    def test_manifest_tracks_log(self, tmp_path, four_bar_chart):
        store = CorpusStore(tmp_path / "s")
        store.put_many([normalize_rect_to_bar(four_bar_chart)])
        manifest = json.loads(store.manifest_path.read_text())
        assert manifest == {"version": 1, "charts": 1, "records": 1}
        assert len(self._log_lines(store)) == 1

    def test_compaction_bounds_log_growth(self, tmp_path, four_bar_chart):
        store = CorpusStore(tmp_path / "s")
        chart = normalize_rect_to_bar(four_bar_chart)
        for _ in range(12):
            store.put_many([chart])
        lines = self._log_lines(store)
        # One live chart: the log may carry at most factor * live records.
        assert len(lines) <= 4
        manifest = json.loads(store.manifest_path.read_text())
        assert manifest["charts"] == 1
        assert manifest["records"] == len(lines)

    def test_reopen_replays_the_log(self, tmp_path, small_corpus_dir):
        store = CorpusStore(tmp_path / "s")
        store.ingest_dir(small_corpus_dir)
        reopened = CorpusStore(tmp_path / "s")
        assert reopened.snapshot().charts == store.snapshot().charts
        assert reopened.corrupt_records == []

    def test_corrupt_lines_are_reported_not_fatal(self, tmp_path, four_bar_chart):
        chart = normalize_rect_to_bar(four_bar_chart)
        store_dir = tmp_path / "s"
        store_dir.mkdir()
        lines = [
            json.dumps({"op": "put", "chart": chart.to_dict()}),
            "{this is not json",
            json.dumps({"op": "frobnicate"}),
            "",
            json.dumps({"op": "delete", "id": "absent"}),
        ]
        (store_dir / "log.jsonl").write_text("\n".join(lines) + "\n")
        store = CorpusStore(store_dir)
        assert store.snapshot().ids() == [chart.id]
        assert [r["line"] for r in store.corrupt_records] == [2, 3]

    def test_delete_records_remove_charts_on_replay(self, tmp_path, four_bar_chart):
        chart = normalize_rect_to_bar(four_bar_chart)
        store_dir = tmp_path / "s"
        store_dir.mkdir()
        lines = [
            json.dumps({"op": "put", "chart": chart.to_dict()}),
            json.dumps({"op": "delete", "id": chart.id}),
        ]
        (store_dir / "log.jsonl").write_text("\n".join(lines) + "\n")
        store = CorpusStore(store_dir)
        assert len(store) == 0
        assert store.corrupt_records == []


class TestSnapshots:
    def test_snapshot_is_stable_across_writes(self, tmp_path, four_bar_chart, small_corpus_dir):
        store = CorpusStore(tmp_path / "s")
        old = store.snapshot()
        store.ingest_dir(small_corpus_dir)
        assert len(old) == 0
        assert len(store.snapshot()) > 0

    def test_ids_and_charts_sorted(self, small_store):
        snap = small_store.snapshot()
        assert snap.ids() == sorted(snap.charts)
        assert [c.id for c in snap.charts_sorted()] == snap.ids()

    def test_rebuild_index_matches_fresh_build(self, small_store):
        snap = small_store.rebuild_index()
        by_mtype, by_channel_dtype, by_domain, by_keyword = build_indices(snap.charts)
        assert snap.by_mtype == by_mtype
        assert snap.by_channel_dtype == by_channel_dtype
        assert snap.by_domain == by_domain
        assert snap.by_keyword == by_keyword

    def test_single_writer_lock(self, small_store):
        assert small_store.try_begin_write()
        saw = []
        t = threading.Thread(target=lambda: saw.append(small_store.try_begin_write()))
        t.start()
        t.join()
        assert saw == [False]
        small_store.end_write()
        t2 = threading.Thread(
            target=lambda: (small_store.try_begin_write() and small_store.end_write(), saw.append(True))
        )
        t2.start()
        t2.join()
        assert saw == [False, True]


class TestCandidatePruning:
    def test_literal_mark_prunes_to_index_entry(self, small_store):
        snap = small_store.snapshot()
        got = snap.candidate_ids(parse_query('{"mark": "bar"}'))
        want = {cid for cid, c in snap.charts.items() if any(m.mtype == "bar" for m in c.marks)}
        assert got == want

    def test_wildcards_do_not_prune(self, small_store):
        snap = small_store.snapshot()
        assert snap.candidate_ids(parse_query('{"encoding": {}}')) is None
        assert snap.candidate_ids(parse_query('{"mark": "*"}')) is None

    def test_absence_claims_do_not_prune(self, small_store):
        snap = small_store.snapshot()
        q = parse_query('{"encoding": {"channel": "color", "count": {"eq": 0}}}')
        assert snap.candidate_ids(q) is None

    def test_presence_count_prunes(self, small_store):
        snap = small_store.snapshot()
        q = parse_query('{"encoding": {"channel": "color", "count": {"gte": 1}}}')
        got = snap.candidate_ids(q)
        want = {cid for cid, c in snap.charts.items() if any(e.channel == "color" for e in c.encodings)}
        assert got == want

    def test_keyword_prunes_by_token_intersection(self, small_store):
        snap = small_store.snapshot()
        token = next(iter(snap.by_keyword))
        got = snap.candidate_ids(parse_query(json.dumps({"keyword": token})))
        assert got == snap.by_keyword[token]

    def test_keyword_regex_passes_unpruned(self, small_store):
        snap = small_store.snapshot()
        assert snap.candidate_ids(parse_query('{"keyword": "elect.*"}')) is None

    def test_domain_prunes_by_matching_index_keys(self, small_store):
        snap = small_store.snapshot()
        domain = next(iter(snap.by_domain))
        got = snap.candidate_ids(parse_query(json.dumps({"domain": domain})))
        assert got == snap.by_domain[domain]

    def test_pruning_never_drops_a_match(self, small_store):
        """Soundness: the candidate set is an upper bound on true matches."""
        snap = small_store.snapshot()
        charts = snap.charts_sorted()
        rng = random.Random(2024)
        for _ in range(150):
            query = random_query(rng, rng.choice(charts))
            true_ids = {c.id for c in charts if match_chart(query, c).matched}
            candidates = snap.candidate_ids(query)
            if candidates is not None:
                assert true_ids <= candidates
