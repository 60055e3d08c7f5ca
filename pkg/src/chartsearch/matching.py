"""Decide whether a chart satisfies a query.

Matching is exhaustive backtracking search: mark, data, and metadata
clauses each need one witness (a mark, a data field, the metadata), while
encoding clauses must be assigned to *distinct* chart encodings. All
clause kinds share one global binding for pattern variables, so a
variable bound by a data clause constrains encoding clauses and vice
versa. A failed candidate is never an error; the result records whether a
consistent assignment exists.
"""

import itertools
import math
import re
from dataclasses import dataclass, field

from .model import ChartSpec, Encoding
from .colors import try_normalize_color
from .query import (
    Aggregate,
    AxisConstraint,
    Compare,
    Contains,
    DataClause,
    EncodingClause,
    Logical,
    MarkClause,
    MetadataClause,
    Query,
    QueryEvaluationError,
    SimilarColor,
    SimilarWord,
    StringPattern,
    TimeRange,
)
from .similarity import (
    EmbeddingTable,
    SimilarityConfig,
    default_table,
    min_color_distance,
    words_similar,
)


@dataclass(frozen=True)
class MatchContext:
    table: EmbeddingTable
    config: SimilarityConfig = SimilarityConfig()


_default_context: MatchContext | None = None


def default_context() -> MatchContext:
    global _default_context
    if _default_context is None:
        _default_context = MatchContext(table=default_table())
    return _default_context


@dataclass
class MatchResult:
    chart_id: str
    matched: bool
    binding: dict | None = None
    matched_encoding_count: int = 0
    unmatched_chart_encoding_count: int = 0
    diagnostics: tuple = ()

    def sort_key(self):
        return (
            -self.matched_encoding_count,
            self.unmatched_chart_encoding_count,
            self.chart_id,
        )

    def to_dict(self) -> dict:
        return {
            "chartId": self.chart_id,
            "matched": self.matched,
            "binding": self.binding,
            "matchedEncodingCount": self.matched_encoding_count,
            "unmatchedChartEncodingCount": self.unmatched_chart_encoding_count,
        }


def _pattern_bindings(pattern: StringPattern, value: str, binding: dict):
    """Bindings (possibly extended) under which *pattern* accepts *value*."""
    if pattern.is_wildcard():
        yield binding
    elif pattern.is_variable():
        bound = binding.get(pattern.payload)
        if bound is None:
            extended = dict(binding)
            extended[pattern.payload] = value
            yield extended
        elif bound == value:
            yield binding
    elif pattern.regex().fullmatch(value):
        yield binding


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _eval_compare(node: Compare, value) -> bool:
    op, operand = node.op, node.operand
    if op == "eq":
        if isinstance(operand, str):
            return isinstance(value, str) and value == operand
        return _is_number(value) and value == operand
    if not _is_number(value):
        raise QueryEvaluationError(f"{op} needs a numeric subject, got {value!r}")
    if op == "gt":
        return value > operand
    if op == "gte":
        return value >= operand
    if op == "lt":
        return value < operand
    return value <= operand


def eval_scalar_predicate(node, value) -> bool:
    """Comparison tree against a single scalar."""
    if isinstance(node, Compare):
        return _eval_compare(node, value)
    if isinstance(node, Logical):
        if node.op == "and":
            return all(eval_scalar_predicate(c, value) for c in node.children)
        if node.op == "or":
            return any(eval_scalar_predicate(c, value) for c in node.children)
        return not eval_scalar_predicate(node.children[0], value)
    raise QueryEvaluationError(f"not a scalar predicate: {node!r}")


def _contains_match(item, subject, binding: dict, ctx: MatchContext) -> bool:
    """Membership test with all variables already bound."""
    if isinstance(item, StringPattern):
        if item.is_wildcard():
            return len(subject) > 0
        if item.is_variable():
            target = binding.get(item.payload)
            if target is None:
                raise QueryEvaluationError(f"unbound variable {item.payload}")
            return any(isinstance(v, str) and v == target for v in subject)
        pattern = item.regex()
        as_color = try_normalize_color(item.payload)
        for v in subject:
            if isinstance(v, str):
                if pattern.fullmatch(v):
                    return True
                if as_color is not None and try_normalize_color(v) == as_color:
                    return True
        return False
    return any(_is_number(v) and v == item for v in subject)


def eval_value_predicate(node, subject, binding: dict, ctx: MatchContext, path: str = "$") -> bool:
    """Predicate over a multiset of values.

    Aggregates other than count demand a non-empty all-numeric subject
    and raise QueryEvaluationError otherwise; a bare comparison demands a
    single scalar. Membership, color, and word tests never raise.
    """
    if isinstance(node, Aggregate):
        if node.op == "count":
            return eval_scalar_predicate(node.arg, len(subject))
        numbers = [v for v in subject if _is_number(v)]
        if len(numbers) != len(subject) or not numbers:
            raise QueryEvaluationError(
                f"{node.op} needs a non-empty numeric subject", path=f"{path}.{node.op}"
            )
        if node.op == "min":
            value = min(numbers)
        elif node.op == "max":
            value = max(numbers)
        elif node.op == "sum":
            value = math.fsum(numbers)
        else:
            value = math.fsum(numbers) / len(numbers)
        return eval_scalar_predicate(node.arg, value)
    if isinstance(node, Logical):
        if node.op == "and":
            return all(
                eval_value_predicate(c, subject, binding, ctx, f"{path}.and[{i}]")
                for i, c in enumerate(node.children)
            )
        if node.op == "or":
            return any(
                eval_value_predicate(c, subject, binding, ctx, f"{path}.or[{i}]")
                for i, c in enumerate(node.children)
            )
        return not eval_value_predicate(node.children[0], subject, binding, ctx, f"{path}.not")
    if isinstance(node, Contains):
        return _contains_match(node.item, subject, binding, ctx)
    if isinstance(node, SimilarColor):
        distance = min_color_distance(subject, node.target)
        return distance is not None and distance <= ctx.config.color_threshold
    if isinstance(node, SimilarWord):
        return any(
            isinstance(v, str) and words_similar(v, node.target, ctx.table, ctx.config.word_threshold)
            for v in subject
        )
    if isinstance(node, Compare):
        if len(subject) != 1:
            raise QueryEvaluationError(
                f"comparison needs a single value, subject has {len(subject)}", path=path
            )
        return _eval_compare(node, next(iter(subject)))
    raise QueryEvaluationError(f"unknown predicate node {node!r}", path=path)


def _predicate_variables(node) -> set[str]:
    if isinstance(node, Contains) and isinstance(node.item, StringPattern) and node.item.is_variable():
        return {node.item.payload}
    if isinstance(node, Logical):
        out: set[str] = set()
        for c in node.children:
            out |= _predicate_variables(c)
        return out
    return set()


def _value_predicate_bindings(node, subject, binding: dict, ctx: MatchContext, path: str):
    """Bindings under which the predicate holds, extending for free variables.

    Unbound variables inside membership tests range over the subject's
    distinct string values.
    """
    free = sorted(v for v in _predicate_variables(node) if v not in binding)
    if not free:
        if eval_value_predicate(node, subject, binding, ctx, path):
            yield binding
        return
    domains = sorted({v for v in subject if isinstance(v, str)})
    if not domains:
        return

    def assign(i: int, current: dict):
        if i == len(free):
            if eval_value_predicate(node, subject, current, ctx, path):
                yield current
            return
        for value in domains:
            extended = dict(current)
            extended[free[i]] = value
            yield from assign(i + 1, extended)

    yield from assign(0, binding)


def _field_constraint_bindings(constraint, name: str, binding: dict, ctx: MatchContext):
    if isinstance(constraint, SimilarWord):
        if words_similar(name, constraint.target, ctx.table, ctx.config.word_threshold):
            yield binding
        return
    yield from _pattern_bindings(constraint, name, binding)


def _style_constraint_bindings(constraint, value, binding: dict, ctx: MatchContext, path: str):
    if isinstance(constraint, StringPattern):
        if not isinstance(value, str):
            return
        if constraint.kind == "regex":
            want = try_normalize_color(constraint.payload)
            have = try_normalize_color(value)
            if want is not None and have is not None and want == have:
                yield binding
                return
        yield from _pattern_bindings(constraint, value, binding)
        return
    if isinstance(constraint, SimilarColor):
        if isinstance(value, str):
            distance = min_color_distance([value], constraint.target)
            if distance is not None and distance <= ctx.config.color_threshold:
                yield binding
        return
    if eval_scalar_predicate(constraint, value):
        yield binding


_CHANNEL_AXIS = {"x": "x-axis", "y": "y-axis"}


def _axis_bindings(constraint: AxisConstraint, chart: ChartSpec, enc: Encoding, binding: dict, ctx: MatchContext):
    atype = _CHANNEL_AXIS.get(enc.channel)
    if atype is None:
        return
    for axis in chart.axes:
        if axis.atype != atype:
            continue
        if axis.field_name is not None and axis.field_name != enc.field_name:
            continue
        if constraint.orient is not None and axis.orient != constraint.orient:
            continue
        if constraint.tick_width is not None:
            if axis.tick_width is None or not eval_scalar_predicate(constraint.tick_width, axis.tick_width):
                continue
        candidates = [binding]
        if constraint.title is not None:
            if axis.title is None:
                continue
            candidates = [b for b in _pattern_bindings(constraint.title, axis.title, binding)]
        if constraint.tick_color is not None:
            if axis.tick_color is None:
                continue
            narrowed = []
            for b in candidates:
                narrowed.extend(
                    _style_constraint_bindings(constraint.tick_color, axis.tick_color, b, ctx, "axis.tickColor")
                )
            candidates = narrowed
        yield from candidates


class _EncodedValues:
    """Per-chart cache of attribute values grouped by (mtype, attr name)."""

    def __init__(self, chart: ChartSpec):
        self._chart = chart
        self._cache: dict = {}

    def get(self, mtype: str, attr: str) -> tuple:
        key = (mtype, attr)
        if key not in self._cache:
            collected: list = []
            for m in self._chart.marks:
                if m.mtype == mtype and attr in m.attrs:
                    collected.extend(m.attrs[attr])
            self._cache[key] = tuple(collected)
        return self._cache[key]


def _dedupe(bindings) -> list[dict]:
    seen = set()
    out = []
    for b in bindings:
        key = tuple(sorted(b.items()))
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


class _Evaluator:
    """Clause evaluation with per-clause type-error bookkeeping."""

    def __init__(self, chart: ChartSpec, ctx: MatchContext):
        self.chart = chart
        self.ctx = ctx
        self.values = _EncodedValues(chart)
        self.errors: dict[str, list[QueryEvaluationError]] = {}
        self.successes: set[str] = set()
        # Tags where some candidate failed a predicate without raising;
        # such clauses failed for ordinary reasons, not type errors.
        self.clean: set[str] = set()

    def _record(self, tag: str, err: QueryEvaluationError):
        self.errors.setdefault(tag, []).append(err)

    def metadata_bindings(self, clause: MetadataClause, binding: dict) -> list[dict]:
        meta = self.chart.metadata
        if clause.key == "keyword":
            return self._keyword_bindings(clause.pattern, meta.page_text, binding)
        if clause.key == "timestamp":
            return self._timestamp_bindings(clause.pattern, meta.timestamp, binding)
        value = {"title": meta.title, "url": meta.url, "domain": meta.domain}[clause.key]
        return _dedupe(_pattern_bindings(clause.pattern, value, binding))

    def _keyword_bindings(self, pattern, page_text: str, binding: dict) -> list[dict]:
        if pattern.is_wildcard():
            return [binding]
        if pattern.is_variable():
            return _dedupe(_pattern_bindings(pattern, page_text, binding))
        word = re.compile(rf"\b(?:{pattern.payload})\b", re.IGNORECASE | re.DOTALL)
        return [binding] if word.search(page_text) else []

    def _timestamp_bindings(self, pattern, timestamp: str | None, binding: dict) -> list[dict]:
        if isinstance(pattern, TimeRange):
            if timestamp is None:
                return []
            for op, bound in pattern.bounds:
                ok = (
                    (op == "gt" and timestamp > bound)
                    or (op == "gte" and timestamp >= bound)
                    or (op == "lt" and timestamp < bound)
                    or (op == "lte" and timestamp <= bound)
                )
                if not ok:
                    return []
            return [binding]
        if timestamp is None:
            return [binding] if pattern.is_wildcard() else []
        return _dedupe(_pattern_bindings(pattern, timestamp, binding))

    def mark_bindings(self, clause: MarkClause, binding: dict, tag: str) -> list[dict]:
        out: list[dict] = []
        for m in self.chart.marks:
            for b in _pattern_bindings(clause.mtype, m.mtype, binding):
                candidates = [b]
                raised = False
                for name in sorted(clause.style_attrs):
                    constraint = clause.style_attrs[name]
                    if name not in m.style_attrs:
                        candidates = []
                        break
                    value = m.style_attrs[name]
                    narrowed: list[dict] = []
                    for cb in candidates:
                        try:
                            narrowed.extend(
                                _style_constraint_bindings(constraint, value, cb, self.ctx, name)
                            )
                        except QueryEvaluationError as err:
                            raised = True
                            self._record(tag, err)
                    candidates = narrowed
                if candidates:
                    out.extend(candidates)
                elif not raised:
                    self.clean.add(tag)
        if out:
            self.successes.add(tag)
        return _dedupe(out)

    def data_bindings(self, clause: DataClause, binding: dict, tag: str) -> list[dict]:
        out: list[dict] = []
        for f in self.chart.fields:
            for b in _field_constraint_bindings(clause.field, f.name, binding, self.ctx):
                if clause.values is None:
                    out.append(b)
                    continue
                try:
                    found = list(
                        _value_predicate_bindings(clause.values, f.values, b, self.ctx, f"{tag}.values")
                    )
                except QueryEvaluationError as err:
                    self._record(tag, err)
                    continue
                if found:
                    out.extend(found)
                else:
                    self.clean.add(tag)
        if out:
            self.successes.add(tag)
        return _dedupe(out)

    def encoding_bindings(self, clause: EncodingClause, enc: Encoding, binding: dict, tag: str) -> list[dict]:
        candidates = list(_pattern_bindings(clause.channel, enc.channel, binding))
        if not candidates:
            return []
        candidates = [b2 for b in candidates for b2 in _pattern_bindings(clause.dtype, enc.dtype, b)]
        candidates = [b2 for b in candidates for b2 in _pattern_bindings(clause.mark, enc.mtype, b)]
        narrowed: list[dict] = []
        for b in candidates:
            narrowed.extend(_field_constraint_bindings(clause.field, enc.field_name, b, self.ctx))
        candidates = narrowed
        if clause.values is not None and candidates:
            subject = self.values.get(enc.mtype, enc.channel)
            narrowed = []
            for b in candidates:
                try:
                    found = list(
                        _value_predicate_bindings(clause.values, subject, b, self.ctx, f"{tag}.values")
                    )
                except QueryEvaluationError as err:
                    self._record(tag, err)
                    continue
                if found:
                    narrowed.extend(found)
                else:
                    self.clean.add(tag)
            candidates = narrowed
        if clause.axis is not None and candidates:
            narrowed = []
            for b in candidates:
                narrowed.extend(_axis_bindings(clause.axis, self.chart, enc, b, self.ctx))
            if candidates and not narrowed:
                self.clean.add(tag)
            candidates = narrowed
        if candidates:
            self.successes.add(tag)
        return _dedupe(candidates)


def _smallest_satisfying(predicate, limit: int) -> int | None:
    """Smallest count in 0..limit accepted by a count predicate."""
    for k in range(limit + 1):
        try:
            if eval_scalar_predicate(predicate, k):
                return k
        except QueryEvaluationError:
            return None
    return None


def _clause_variables(clause: EncodingClause) -> set[str]:
    out: set[str] = set()
    for pattern in (clause.channel, clause.dtype, clause.mark, clause.field):
        if isinstance(pattern, StringPattern) and pattern.is_variable():
            out.add(pattern.payload)
    if clause.values is not None:
        out |= _predicate_variables(clause.values)
    if clause.axis is not None:
        for pattern in (clause.axis.title, clause.axis.tick_color):
            if isinstance(pattern, StringPattern) and pattern.is_variable():
                out.add(pattern.payload)
    return out


# A value no chart string can equal; binding a variable to it makes the
# variable match nothing, covering the "any fresh value" case in one probe.
_FRESH = "\x00fresh\x00"


def _chart_strings(chart: ChartSpec) -> tuple[str, ...]:
    """Distinct strings a pattern variable could bind against in a chart."""
    out: set[str] = set()
    for enc in chart.encodings:
        out.update((enc.channel, enc.dtype, enc.mtype, enc.field_name))
    for field in chart.fields:
        out.add(field.name)
        out.update(v for v in field.values if isinstance(v, str))
    for mark in chart.marks:
        out.add(mark.mtype)
        for values in mark.attrs.values():
            out.update(v for v in values if isinstance(v, str))
        out.update(v for v in mark.style_attrs.values() if isinstance(v, str))
    for axis in chart.axes:
        out.update(
            v
            for v in (axis.atype, axis.orient, axis.field_name, axis.title, axis.tick_color)
            if isinstance(v, str)
        )
    return tuple(sorted(out))


def match_chart(query: Query, chart: ChartSpec, context: MatchContext | None = None) -> MatchResult:
    """Exhaustive matching of one chart against a query.

    Returns a MatchResult, never raises for chart/query value mismatches;
    predicate type errors make the offending candidate fail and surface
    in diagnostics when they explain a failed clause.
    """
    ctx = context or default_context()
    ev = _Evaluator(chart, ctx)
    n_chart = len(chart.encodings)

    def finish(matched: bool, binding: dict | None, consumed: int) -> MatchResult:
        diagnostics = []
        if not matched:
            # Report a clause only when type errors are the whole story:
            # if any candidate failed it cleanly, the errors were incidental.
            for tag in sorted(ev.errors):
                if tag not in ev.successes and tag not in ev.clean:
                    first = ev.errors[tag][0]
                    diagnostics.append(
                        {"path": first.path if first.path != "$" else tag, "message": str(first), "clause": tag}
                    )
        return MatchResult(
            chart_id=chart.id,
            matched=matched,
            binding=dict(sorted(binding.items())) if matched and binding is not None else None,
            matched_encoding_count=consumed if matched else 0,
            unmatched_chart_encoding_count=max(0, n_chart - consumed) if matched else n_chart,
            diagnostics=tuple(diagnostics),
        )

    # Claim sizes for encoding clauses are binding independent.
    claims: list[int] = []
    for i, clause in enumerate(query.encoding_clauses):
        if clause.count is None:
            claims.append(1)
        else:
            smallest = _smallest_satisfying(clause.count, n_chart)
            if smallest is None:
                return finish(False, None, 0)
            claims.append(smallest)

    def search_metadata(idx: int, binding: dict):
        if idx == len(query.metadata_clauses):
            yield from search_data(0, binding)
            return
        for b in ev.metadata_bindings(query.metadata_clauses[idx], binding):
            yield from search_metadata(idx + 1, b)

    def search_data(idx: int, binding: dict):
        if idx == len(query.data_clauses):
            yield from search_marks(0, binding)
            return
        for b in ev.data_bindings(query.data_clauses[idx], binding, f"$.data[{idx}]"):
            yield from search_data(idx + 1, b)

    def search_marks(idx: int, binding: dict):
        if idx == len(query.mark_clauses):
            yield from search_encodings(binding)
            return
        for b in ev.mark_bindings(query.mark_clauses[idx], binding, f"$.mark[{idx}]"):
            yield from search_marks(idx + 1, b)

    enc_order: list[int] = []
    if query.encoding_clauses:
        sizes = []
        for i, clause in enumerate(query.encoding_clauses):
            count = sum(
                1
                for enc in chart.encodings
                if ev.encoding_bindings(clause, enc, {}, f"$.encoding[{i}]")
            )
            sizes.append((count, i))
        enc_order = [i for _, i in sorted(sizes)]

    def search_encodings(binding: dict):
        # Depth-first over clauses in ascending candidate-count order; each
        # clause consumes exactly its claimed number of distinct encodings.
        def assign_clause(pos: int, used: frozenset, b: dict):
            if pos == len(enc_order):
                yield b
                return
            ci = enc_order[pos]
            clause = query.encoding_clauses[ci]
            tag = f"$.encoding[{ci}]"
            need = claims[ci]

            def pick(start: int, taken: int, cb: dict):
                if taken == need:
                    yield from assign_clause(pos + 1, used | frozenset(range_taken), cb)
                    return
                for j in range(start, n_chart):
                    if j in used or j in range_taken:
                        continue
                    for nb in ev.encoding_bindings(clause, chart.encodings[j], cb, tag):
                        range_taken.append(j)
                        yield from pick(j + 1, taken + 1, nb)
                        range_taken.pop()

            range_taken: list[int] = []
            yield from pick(0, 0, b)

        def counts_hold(b: dict) -> bool:
            for ci, clause in enumerate(query.encoding_clauses):
                if clause.count is None:
                    continue
                matching = sum(
                    1
                    for enc in chart.encodings
                    if ev.encoding_bindings(clause, enc, b, f"$.encoding[{ci}]")
                )
                if not eval_scalar_predicate(clause.count, matching):
                    return False
            return True

        counted_vars: set[str] = set()
        for clause in query.encoding_clauses:
            if clause.count is not None:
                counted_vars |= _clause_variables(clause)

        for candidate in assign_clause(0, frozenset(), binding):
            # Global cardinality checks for clauses with explicit counts.
            # A variable a zero-claim clause never bound is still quantified
            # existentially, so probe chart strings plus one fresh value.
            unresolved = sorted(v for v in counted_vars if v not in candidate)
            if not unresolved:
                if counts_hold(candidate):
                    yield candidate
                continue
            domains = _chart_strings(chart) + (_FRESH,)
            for combo in itertools.product(domains, repeat=len(unresolved)):
                extended = dict(candidate)
                extended.update(zip(unresolved, combo))
                if counts_hold(extended):
                    yield {k: v for k, v in extended.items() if v is not _FRESH}
                    break

    for final in search_metadata(0, {}):
        return finish(True, final, sum(claims))
    return finish(False, None, 0)


def match_chart_partial(query: Query, chart: ChartSpec, context: MatchContext | None = None) -> MatchResult:
    """Best-effort matching for example queries: marks are required, each
    encoding clause slot matches if it can, and the result counts how many
    slots found a distinct chart encoding. Queries must be variable-free.
    """
    ctx = context or default_context()
    ev = _Evaluator(chart, ctx)
    n_chart = len(chart.encodings)

    for idx, clause in enumerate(query.mark_clauses):
        if not ev.mark_bindings(clause, {}, f"$.mark[{idx}]"):
            return MatchResult(chart.id, False, None, 0, n_chart)
    for idx, clause in enumerate(query.data_clauses):
        if not ev.data_bindings(clause, {}, f"$.data[{idx}]"):
            return MatchResult(chart.id, False, None, 0, n_chart)
    for idx, clause in enumerate(query.metadata_clauses):
        if not ev.metadata_bindings(clause, {}):
            return MatchResult(chart.id, False, None, 0, n_chart)

    slots: list[EncodingClause] = []
    for clause in query.encoding_clauses:
        copies = 1
        if clause.count is not None:
            copies = _smallest_satisfying(clause.count, max(n_chart, 1)) or 0
        slots.extend([clause] * max(copies, 1))

    # Maximum bipartite matching between clause slots and chart encodings.
    edges: list[list[int]] = []
    for slot_idx, clause in enumerate(slots):
        row = [
            j
            for j, enc in enumerate(chart.encodings)
            if ev.encoding_bindings(clause, enc, {}, f"$.encoding[{slot_idx}]")
        ]
        edges.append(row)

    enc_owner = [-1] * n_chart

    def augment(slot: int, visited: set) -> bool:
        for j in edges[slot]:
            if j in visited:
                continue
            visited.add(j)
            if enc_owner[j] == -1 or augment(enc_owner[j], visited):
                enc_owner[j] = slot
                return True
        return False

    matched_slots = 0
    for slot in range(len(slots)):
        if augment(slot, set()):
            matched_slots += 1

    matched = matched_slots >= 1 if slots else True
    return MatchResult(
        chart_id=chart.id,
        matched=matched,
        binding={} if matched else None,
        matched_encoding_count=matched_slots if matched else 0,
        unmatched_chart_encoding_count=(n_chart - matched_slots) if matched else n_chart,
    )


def match_corpus(query: Query, charts, context: MatchContext | None = None, partial: bool = False):
    """Match every chart; return (matched results sorted by id, diagnostics)."""
    ctx = context or default_context()
    results: list[MatchResult] = []
    diagnostics: list[dict] = []
    for chart in charts:
        result = (match_chart_partial if partial else match_chart)(query, chart, ctx)
        if result.matched:
            results.append(result)
        else:
            for diag in result.diagnostics:
                entry = dict(diag)
                entry["chartId"] = chart.id
                diagnostics.append(entry)
    results.sort(key=lambda r: r.chart_id)
    return results, diagnostics
