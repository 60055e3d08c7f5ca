"""Brute-force reference matcher.

Enumerates complete variable bindings over every string the chart
contains, then for each binding enumerates injective clause-to-encoding
assignments with itertools. No search-order tricks, no pruning, no
shared code with the production matcher beyond the query AST itself.
Supports the feature set the fuzz generator emits: string patterns with
variables, value predicates (contains / count / min / max / sum /
average / logicals), clause counts, bare and oriented axis constraints.
"""

import itertools
import math
import re

from chartsearch.model import ChartSpec
from chartsearch.query import (
    Aggregate,
    AxisConstraint,
    Compare,
    Contains,
    Logical,
    Query,
    StringPattern,
)

_AXIS_OF_CHANNEL = {"x": "x-axis", "y": "y-axis"}


def _pattern_ok(pattern: StringPattern, value: str, binding: dict) -> bool:
    if pattern.kind == "wildcard":
        return True
    if pattern.kind == "variable":
        return binding[pattern.payload] == value
    return re.fullmatch(pattern.payload, value, re.DOTALL) is not None


def _compare_ok(op: str, operand, subject) -> bool:
    if op == "eq":
        if isinstance(operand, str):
            return isinstance(subject, str) and subject == operand
        return _is_number(subject) and float(subject) == float(operand)
    if not _is_number(subject):
        raise TypeError("ordered comparison on non-number")
    s, o = float(subject), float(operand)
    return {"gt": s > o, "gte": s >= o, "lt": s < o, "lte": s <= o}[op]


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _scalar_ok(node, subject) -> bool:
    if isinstance(node, Compare):
        return _compare_ok(node.op, node.operand, subject)
    if isinstance(node, Logical):
        if node.op == "and":
            return all(_scalar_ok(c, subject) for c in node.children)
        if node.op == "or":
            return any(_scalar_ok(c, subject) for c in node.children)
        return not _scalar_ok(node.children[0], subject)
    raise AssertionError(f"oracle cannot evaluate {node!r} as scalar")


def value_predicate_ok(node, values, binding: dict) -> bool:
    """Boolean evaluation under a complete binding. Raises TypeError for
    aggregate misuse, mirroring the engine's evaluation errors."""
    if isinstance(node, Contains):
        if isinstance(node.item, StringPattern):
            return any(
                isinstance(v, str) and _pattern_ok(node.item, v, binding) for v in values
            )
        return any(_is_number(v) and float(v) == float(node.item) for v in values)
    if isinstance(node, Logical):
        if node.op == "and":
            return all(value_predicate_ok(c, values, binding) for c in node.children)
        if node.op == "or":
            return any(value_predicate_ok(c, values, binding) for c in node.children)
        return not value_predicate_ok(node.children[0], values, binding)
    if isinstance(node, Aggregate):
        if node.op == "count":
            return _scalar_ok(node.arg, len(values))
        numbers = [float(v) for v in values if _is_number(v)]
        if len(numbers) != len(values) or not numbers:
            raise TypeError(f"{node.op} needs a non-empty numeric subject")
        agg = {
            "min": min(numbers),
            "max": max(numbers),
            "sum": math.fsum(numbers),
            "average": math.fsum(numbers) / len(numbers),
        }[node.op]
        return _scalar_ok(node.arg, agg)
    if isinstance(node, Compare):
        if len(values) != 1:
            raise TypeError("bare comparison needs exactly one value")
        return _compare_ok(node.op, node.operand, values[0])
    raise AssertionError(f"oracle cannot evaluate {node!r}")


def _encoded_values(chart: ChartSpec, mtype: str, channel: str) -> list:
    out = []
    for mark in chart.marks:
        if mark.mtype == mtype and channel in mark.attrs:
            out.extend(mark.attrs[channel])
    return out


def _axis_ok(constraint: AxisConstraint, chart: ChartSpec, enc) -> bool:
    atype = _AXIS_OF_CHANNEL.get(enc.channel)
    if atype is None:
        return False
    for axis in chart.axes:
        if axis.atype != atype:
            continue
        if axis.field_name is not None and axis.field_name != enc.field_name:
            continue
        if constraint.orient is not None and axis.orient != constraint.orient:
            continue
        return True
    return False


def encoding_clause_ok(clause, chart: ChartSpec, enc, binding: dict) -> bool:
    if not _pattern_ok(clause.channel, enc.channel, binding):
        return False
    if not _pattern_ok(clause.dtype, enc.dtype, binding):
        return False
    if not _pattern_ok(clause.mark, enc.mtype, binding):
        return False
    if not _pattern_ok(clause.field, enc.field_name, binding):
        return False
    if clause.values is not None:
        subject = _encoded_values(chart, enc.mtype, enc.channel)
        try:
            if not value_predicate_ok(clause.values, subject, binding):
                return False
        except TypeError:
            return False
    if clause.axis is not None and not _axis_ok(clause.axis, chart, enc):
        return False
    return True


def mark_clause_ok(clause, chart: ChartSpec, binding: dict) -> bool:
    for mark in chart.marks:
        if not _pattern_ok(clause.mtype, mark.mtype, binding):
            continue
        ok = True
        for name, constraint in clause.style_attrs.items():
            if name not in mark.style_attrs:
                ok = False
                break
            value = mark.style_attrs[name]
            if isinstance(constraint, StringPattern):
                if not isinstance(value, str) or not _pattern_ok(constraint, value, binding):
                    ok = False
                    break
            else:
                try:
                    if not _scalar_ok(constraint, value):
                        ok = False
                        break
                except TypeError:
                    ok = False
                    break
        if ok:
            return True
    return False


def data_clause_ok(clause, chart: ChartSpec, binding: dict) -> bool:
    for field in chart.fields:
        if isinstance(clause.field, StringPattern):
            if not _pattern_ok(clause.field, field.name, binding):
                continue
        else:
            raise AssertionError("oracle queries use plain field patterns")
        if clause.values is None:
            return True
        try:
            if value_predicate_ok(clause.values, list(field.values), binding):
                return True
        except TypeError:
            continue
    return False


def metadata_clause_ok(clause, chart: ChartSpec, binding: dict) -> bool:
    meta = chart.metadata
    if clause.key == "keyword":
        pattern = clause.pattern
        if pattern.is_wildcard():
            return True
        if pattern.is_variable():
            return binding[pattern.payload] == meta.page_text
        return re.search(rf"\b(?:{pattern.payload})\b", meta.page_text, re.IGNORECASE | re.DOTALL) is not None
    if clause.key == "timestamp":
        value = meta.timestamp
        if not isinstance(clause.pattern, StringPattern):
            raise AssertionError("oracle queries use plain timestamp patterns")
        if value is None:
            return clause.pattern.is_wildcard()
        return _pattern_ok(clause.pattern, value, binding)
    value = {"title": meta.title, "url": meta.url, "domain": meta.domain}[clause.key]
    return _pattern_ok(clause.pattern, value, binding)


def _collect_variables(query: Query) -> set:
    seen = set()

    def visit_pattern(p):
        if isinstance(p, StringPattern) and p.kind == "variable":
            seen.add(p.payload)

    def visit_predicate(node):
        if isinstance(node, Contains):
            visit_pattern(node.item) if isinstance(node.item, StringPattern) else None
        elif isinstance(node, Logical):
            for c in node.children:
                visit_predicate(c)
        elif isinstance(node, Aggregate):
            pass

    for clause in query.data_clauses:
        visit_pattern(clause.field)
        if clause.values is not None:
            visit_predicate(clause.values)
    for clause in query.mark_clauses:
        visit_pattern(clause.mtype)
        for constraint in clause.style_attrs.values():
            if isinstance(constraint, StringPattern):
                visit_pattern(constraint)
    for clause in query.metadata_clauses:
        if isinstance(clause.pattern, StringPattern):
            visit_pattern(clause.pattern)
    for clause in query.encoding_clauses:
        for p in (clause.channel, clause.dtype, clause.mark, clause.field):
            visit_pattern(p)
        if clause.values is not None:
            visit_predicate(clause.values)
    return seen


def _universe(chart: ChartSpec) -> list:
    values: set = set()
    for enc in chart.encodings:
        values.update((enc.channel, enc.dtype, enc.mtype, enc.field_name))
    for mark in chart.marks:
        values.add(mark.mtype)
        values.update(v for v in mark.style_attrs.values() if isinstance(v, str))
        for attr_values in mark.attrs.values():
            values.update(v for v in attr_values if isinstance(v, str))
    for field in chart.fields:
        values.add(field.name)
        values.update(v for v in field.values if isinstance(v, str))
    for axis in chart.axes:
        values.update(
            v
            for v in (axis.atype, axis.orient, axis.field_name, axis.title, axis.tick_color)
            if isinstance(v, str)
        )
    meta = chart.metadata
    values.update((meta.title, meta.url, meta.domain, meta.page_text))
    if meta.timestamp:
        values.add(meta.timestamp)
    # One value outside the chart: a variable may satisfy a negated count
    # only by binding to something that matches nothing.
    values.add("\x00fresh\x00")
    return sorted(values)


def _smallest_count(predicate, limit: int):
    for k in range(limit + 1):
        try:
            if _scalar_ok(predicate, k):
                return k
        except TypeError:
            return None
    return None


def _binding_ok(query: Query, chart: ChartSpec, binding: dict) -> bool:
    for clause in query.metadata_clauses:
        if not metadata_clause_ok(clause, chart, binding):
            return False
    for clause in query.data_clauses:
        if not data_clause_ok(clause, chart, binding):
            return False
    for clause in query.mark_clauses:
        if not mark_clause_ok(clause, chart, binding):
            return False

    n = len(chart.encodings)
    slots = []
    for clause in query.encoding_clauses:
        if clause.count is None:
            slots.append(clause)
            continue
        need = _smallest_count(clause.count, n)
        if need is None:
            return False
        matching = sum(
            1 for enc in chart.encodings if encoding_clause_ok(clause, chart, enc, binding)
        )
        if not _scalar_ok(clause.count, matching):
            return False
        slots.extend([clause] * need)

    if len(slots) > n:
        return False
    for chosen in itertools.permutations(range(n), len(slots)):
        if all(
            encoding_clause_ok(slots[i], chart, chart.encodings[j], binding)
            for i, j in enumerate(chosen)
        ):
            return True
    return False


def brute_force_match(query: Query, chart: ChartSpec) -> bool:
    """True when some complete binding plus injective assignment works."""
    variables = sorted(_collect_variables(query))
    if not variables:
        return _binding_ok(query, chart, {})
    universe = _universe(chart)
    for combo in itertools.product(universe, repeat=len(variables)):
        if _binding_ok(query, chart, dict(zip(variables, combo))):
            return True
    return False
