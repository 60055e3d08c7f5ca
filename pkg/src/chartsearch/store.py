"""Chart corpus persistence and candidate pruning.

A corpus lives in one directory: an append-only log of JSON records plus a
small manifest. Writers append and periodically compact; readers work
from immutable snapshots that swap in atomically, so a long search never
sees a half-applied ingest. Inverted indices (mark type, channel+dtype
pair, domain, keyword token) only narrow the candidate set; matching
correctness never depends on them.
"""

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .model import ChartSpec, content_id, normalize_rect_to_bar, validate_spec
from .query import Query, StringPattern
from .vocab import CHANNELS, DATA_TYPES, MARK_TYPES

LOG_NAME = "log.jsonl"
MANIFEST_NAME = "manifest.json"
STORE_VERSION = 1

# Compact when the log carries this many times more records than live charts.
_COMPACT_FACTOR = 4

_TOKEN = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class CorpusSnapshot:
    """Immutable view of the corpus used by searches."""

    charts: dict
    by_mtype: dict
    by_channel_dtype: dict
    by_domain: dict
    by_keyword: dict

    def __len__(self) -> int:
        return len(self.charts)

    def get(self, chart_id: str) -> ChartSpec | None:
        return self.charts.get(chart_id)

    def ids(self) -> list[str]:
        return sorted(self.charts)

    def charts_sorted(self) -> list[ChartSpec]:
        return [self.charts[i] for i in sorted(self.charts)]

    def candidate_ids(self, query: Query) -> set | None:
        """Upper bound on matching ids from the inverted indices.

        None means "no pruning possible". Only literal patterns prune:
        wildcards and variables pass, and a pattern prunes by matching it
        against the finite key set of the relevant index, which keeps the
        result a superset of the true answer.
        """
        narrowed: set | None = None

        def restrict(ids: set):
            nonlocal narrowed
            narrowed = set(ids) if narrowed is None else narrowed & ids

        for clause in query.mark_clauses:
            if clause.mtype.kind == "regex":
                hit = set()
                for mtype in MARK_TYPES:
                    if clause.mtype.regex().fullmatch(mtype):
                        hit |= self.by_mtype.get(mtype, set())
                restrict(hit)

        for clause in query.encoding_clauses:
            claims_presence = clause.count is None
            if not claims_presence:
                # A count predicate may be satisfied by zero encodings, in
                # which case absence is allowed and pruning would be wrong.
                from .matching import _smallest_satisfying

                smallest = _smallest_satisfying(clause.count, 10**6)
                claims_presence = smallest is not None and smallest >= 1
            if not claims_presence:
                continue
            if clause.channel.kind != "regex" and clause.dtype.kind != "regex":
                continue
            hit = set()
            for channel in CHANNELS:
                if clause.channel.kind == "regex" and not clause.channel.regex().fullmatch(channel):
                    continue
                for dtype in DATA_TYPES:
                    if clause.dtype.kind == "regex" and not clause.dtype.regex().fullmatch(dtype):
                        continue
                    hit |= self.by_channel_dtype.get((channel, dtype), set())
            restrict(hit)

        for clause in query.metadata_clauses:
            if not isinstance(clause.pattern, StringPattern) or clause.pattern.kind != "regex":
                continue
            if clause.key == "domain":
                hit = set()
                for domain in self.by_domain:
                    if clause.pattern.regex().fullmatch(domain):
                        hit |= self.by_domain[domain]
                restrict(hit)
            elif clause.key == "keyword" and re.fullmatch(r"[A-Za-z0-9 ]+", clause.pattern.payload):
                for token in tokenize(clause.pattern.payload):
                    restrict(self.by_keyword.get(token, set()))

        return narrowed


def _index_chart(chart: ChartSpec, by_mtype, by_channel_dtype, by_domain, by_keyword):
    for m in chart.marks:
        by_mtype.setdefault(m.mtype, set()).add(chart.id)
    for e in chart.encodings:
        by_channel_dtype.setdefault((e.channel, e.dtype), set()).add(chart.id)
    if chart.metadata.domain:
        by_domain.setdefault(chart.metadata.domain, set()).add(chart.id)
    for token in set(tokenize(chart.metadata.page_text)):
        by_keyword.setdefault(token, set()).add(chart.id)


def build_indices(charts: dict) -> tuple[dict, dict, dict, dict]:
    by_mtype: dict = {}
    by_channel_dtype: dict = {}
    by_domain: dict = {}
    by_keyword: dict = {}
    for chart_id in sorted(charts):
        _index_chart(charts[chart_id], by_mtype, by_channel_dtype, by_domain, by_keyword)
    return by_mtype, by_channel_dtype, by_domain, by_keyword


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": [
                {"file": name, "problems": problems} for name, problems in self.rejected
            ],
            "warnings": list(self.warnings),
        }


class CorpusStore:
    """Single-writer, many-reader chart store over an append log."""

    def __init__(self, directory: str | Path, create: bool = True):
        self.directory = Path(directory)
        if create:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.RLock()  # reentrant: ingest holds it across put_many
        self._charts: dict = {}
        self.corrupt_records: list = []
        self._replay()
        self._snapshot = self._build_snapshot()

    @property
    def log_path(self) -> Path:
        return self.directory / LOG_NAME

    @property
    def manifest_path(self) -> Path:
        return self.directory / MANIFEST_NAME

    def _replay(self):
        self._log_records = 0
        if not self.log_path.exists():
            return
        with open(self.log_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                self._log_records += 1
                try:
                    record = json.loads(line)
                    if record.get("op") == "put":
                        chart = ChartSpec.from_dict(record["chart"])
                        self._charts[chart.id] = chart
                    elif record.get("op") == "delete":
                        self._charts.pop(record["id"], None)
                    else:
                        raise ValueError(f"unknown op {record.get('op')!r}")
                except (ValueError, KeyError, TypeError) as exc:
                    self.corrupt_records.append({"line": line_no, "error": str(exc)})

    def _build_snapshot(self) -> CorpusSnapshot:
        by_mtype, by_channel_dtype, by_domain, by_keyword = build_indices(self._charts)
        return CorpusSnapshot(
            charts=dict(self._charts),
            by_mtype=by_mtype,
            by_channel_dtype=by_channel_dtype,
            by_domain=by_domain,
            by_keyword=by_keyword,
        )

    def snapshot(self) -> CorpusSnapshot:
        return self._snapshot

    def __len__(self) -> int:
        return len(self._charts)

    def try_begin_write(self) -> bool:
        return self._write_lock.acquire(blocking=False)

    def end_write(self):
        self._write_lock.release()

    def _append(self, records: list[dict]):
        with open(self.log_path, "a", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        self._log_records += len(records)

    def _write_manifest(self):
        manifest = {
            "version": STORE_VERSION,
            "charts": len(self._charts),
            "records": self._log_records,
        }
        self.manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    def put_many(self, charts: list[ChartSpec]):
        """Store charts (replacing same-id entries) and publish a snapshot."""
        with self._write_lock:
            self._append([{"op": "put", "chart": c.to_dict()} for c in charts])
            for c in charts:
                self._charts[c.id] = c
            if self._log_records > _COMPACT_FACTOR * max(len(self._charts), 1):
                self._compact_locked()
            self._write_manifest()
            self._snapshot = self._build_snapshot()

    def compact(self):
        with self._write_lock:
            self._compact_locked()
            self._write_manifest()
            self._snapshot = self._build_snapshot()

    def _compact_locked(self):
        tmp = self.log_path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for chart_id in sorted(self._charts):
                record = {"op": "put", "chart": self._charts[chart_id].to_dict()}
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        tmp.replace(self.log_path)
        self._log_records = len(self._charts)

    def ingest_dir(self, directory: str | Path) -> IngestReport:
        """Load every *.chart.json under *directory*.

        Valid specs are normalized (rect marks that behave like bars are
        retyped), given content-hash ids when they arrive without one,
        and stored; invalid ones are reported with their violations.
        Re-ingesting the same directory is a no-op by construction.
        """
        directory = Path(directory)
        if not directory.is_dir():
            raise FileNotFoundError(f"not a directory: {directory}")
        report = IngestReport()
        batch: dict = {}
        for path in sorted(directory.glob("*.chart.json")):
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
                chart = ChartSpec.from_dict(raw)
            except (ValueError, KeyError, TypeError) as exc:
                report.rejected.append((path.name, [f"unreadable: {exc}"]))
                continue
            problems = validate_spec(chart)
            if problems:
                report.rejected.append((path.name, [str(v.to_dict()) for v in problems]))
                continue
            chart = normalize_rect_to_bar(chart)
            if not chart.id:
                chart = ChartSpec.from_dict({**chart.to_dict(), "id": content_id(chart)})
            if chart.id in batch:
                report.warnings.append(
                    f"{path.name}: id {chart.id} already seen in this batch; later file wins"
                )
            batch[chart.id] = chart
            report.accepted += 1
        if batch:
            self.put_many(list(batch.values()))
        else:
            with self._write_lock:
                self._write_manifest()
        return report

    def rebuild_index(self) -> CorpusSnapshot:
        """Recompute all indices from stored charts and publish the result."""
        with self._write_lock:
            self._snapshot = self._build_snapshot()
        return self._snapshot
