"""Query language: JSON partial chart specifications parsed into a typed AST.

A query describes the parts of a chart the caller cares about; everything
unspecified is a wildcard. Bare strings are full-string regular
expressions, ``*`` is the wildcard, and ``$name`` is a pattern variable
that must take the same value everywhere it occurs.

The grammar lives in ``schema/query-schema.json``; this module enforces it
while building the AST, and the editor derives its completions from the
same file, so the two cannot drift.
"""

import json
import re
from dataclasses import dataclass, field

from .colors import try_normalize_color
from .vocab import (
    AGGREGATE_OPS,
    AXIS_ORIENTS,
    CHANNELS,
    COMPARE_OPS,
    DATA_TYPES,
    MARK_TYPES,
    METADATA_KEYS,
    VARIABLE_PREFIX,
    WILDCARD,
)

_VARIABLE_NAME = re.compile(r"\$[A-Za-z][A-Za-z0-9_]*\Z")

KIND_REGEX = "regex"
KIND_WILDCARD = "wildcard"
KIND_VARIABLE = "variable"


class QueryError(ValueError):
    """Base for all query rejection errors."""


class QuerySyntaxError(QueryError):
    """Malformed JSON. Carries the byte offset of the failure."""

    def __init__(self, message: str, position: int, line: int, column: int):
        super().__init__(message)
        self.position = position
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return {
            "error": "syntax",
            "message": str(self),
            "position": self.position,
            "line": self.line,
            "column": self.column,
        }


class QuerySchemaError(QueryError):
    """Well-formed JSON that is not a query. Carries the offending path."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message

    def to_dict(self) -> dict:
        return {"error": "schema", "message": self.detail, "path": self.path}


class QueryEvaluationError(QueryError):
    """A predicate hit a type error while evaluating against a chart."""

    def __init__(self, message: str, path: str = "$", chart_id: str | None = None):
        super().__init__(message)
        self.path = path
        self.chart_id = chart_id

    def to_dict(self) -> dict:
        d = {"error": "evaluation", "message": str(self), "path": self.path}
        if self.chart_id is not None:
            d["chartId"] = self.chart_id
        return d


@dataclass(frozen=True)
class StringPattern:
    """Full-string regex, wildcard, or pattern variable."""

    kind: str
    payload: str = ""

    def is_wildcard(self) -> bool:
        return self.kind == KIND_WILDCARD

    def is_variable(self) -> bool:
        return self.kind == KIND_VARIABLE

    def regex(self) -> re.Pattern:
        return _compiled(self.payload)

    def matches_literal(self, value: str) -> bool:
        """Match ignoring variables; the matcher resolves those itself."""
        if self.kind == KIND_WILDCARD:
            return True
        if self.kind == KIND_VARIABLE:
            raise QueryEvaluationError(f"unbound variable {self.payload}")
        return self.regex().fullmatch(value) is not None

    def source(self) -> str:
        if self.kind == KIND_WILDCARD:
            return WILDCARD
        return self.payload


_REGEX_CACHE: dict[str, re.Pattern] = {}


def _compiled(source: str) -> re.Pattern:
    pat = _REGEX_CACHE.get(source)
    if pat is None:
        pat = re.compile(source, re.DOTALL)
        _REGEX_CACHE[source] = pat
    return pat


WILDCARD_PATTERN = StringPattern(KIND_WILDCARD)


@dataclass(frozen=True)
class Compare:
    op: str
    operand: object


@dataclass(frozen=True)
class Aggregate:
    op: str
    arg: object


@dataclass(frozen=True)
class Logical:
    op: str
    children: tuple


@dataclass(frozen=True)
class Contains:
    item: object


@dataclass(frozen=True)
class SimilarColor:
    target: str


@dataclass(frozen=True)
class SimilarWord:
    target: str


@dataclass(frozen=True)
class TimeRange:
    bounds: tuple


@dataclass(frozen=True)
class AxisConstraint:
    orient: str | None = None
    title: StringPattern | None = None
    tick_color: object | None = None
    tick_width: object | None = None

    def is_bare(self) -> bool:
        return (
            self.orient is None
            and self.title is None
            and self.tick_color is None
            and self.tick_width is None
        )


@dataclass(frozen=True)
class EncodingClause:
    channel: StringPattern = WILDCARD_PATTERN
    dtype: StringPattern = WILDCARD_PATTERN
    field: object = WILDCARD_PATTERN
    mark: StringPattern = WILDCARD_PATTERN
    values: object | None = None
    axis: AxisConstraint | None = None
    count: object | None = None


@dataclass(frozen=True)
class MarkClause:
    mtype: StringPattern = WILDCARD_PATTERN
    style_attrs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "style_attrs", dict(self.style_attrs))


@dataclass(frozen=True)
class DataClause:
    field: object = WILDCARD_PATTERN
    values: object | None = None


@dataclass(frozen=True)
class MetadataClause:
    key: str
    pattern: object


@dataclass(frozen=True)
class Query:
    data_clauses: tuple = ()
    mark_clauses: tuple = ()
    encoding_clauses: tuple = ()
    metadata_clauses: tuple = ()

    def clause_count(self) -> int:
        return (
            len(self.data_clauses)
            + len(self.mark_clauses)
            + len(self.encoding_clauses)
            + len(self.metadata_clauses)
        )


def _err(path: str, message: str) -> QuerySchemaError:
    return QuerySchemaError(message, path)


def _expect_keys(node: dict, allowed, path: str):
    for key in node:
        if key not in allowed:
            raise _err(f"{path}.{key}", f"unknown key {key!r}")


def _parse_pattern(value, path: str) -> StringPattern:
    if not isinstance(value, str):
        raise _err(path, f"expected a string pattern, got {type(value).__name__}")
    if value == WILDCARD:
        return WILDCARD_PATTERN
    if value.startswith(VARIABLE_PREFIX):
        if not _VARIABLE_NAME.match(value):
            raise _err(path, f"bad variable name {value!r}")
        return StringPattern(KIND_VARIABLE, value)
    try:
        re.compile(value)
    except re.error as exc:
        raise _err(path, f"regex does not compile: {exc}") from None
    return StringPattern(KIND_REGEX, value)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _and_of(children: list, path: str):
    if not children:
        raise _err(path, "empty predicate object")
    if len(children) == 1:
        return children[0]
    return Logical("and", tuple(children))


def _parse_scalar_predicate(node, path: str):
    """Predicate over a single number: comparisons and their combinations."""
    if _is_number(node):
        return Compare("eq", node)
    if not isinstance(node, dict):
        raise _err(path, f"expected a comparison, got {type(node).__name__}")
    parts = []
    for key in node:
        sub = node[key]
        subpath = f"{path}.{key}"
        if key in COMPARE_OPS:
            if key == "eq":
                if not (_is_number(sub) or isinstance(sub, str)):
                    raise _err(subpath, "eq needs a number or string")
            elif not _is_number(sub):
                raise _err(subpath, f"{key} needs a number")
            parts.append(Compare(key, sub))
        elif key in ("and", "or"):
            if not isinstance(sub, list) or not sub:
                raise _err(subpath, f"{key} needs a non-empty array")
            parts.append(
                Logical(key, tuple(_parse_scalar_predicate(c, f"{subpath}[{i}]") for i, c in enumerate(sub)))
            )
        elif key == "not":
            parts.append(Logical("not", (_parse_scalar_predicate(sub, subpath),)))
        else:
            raise _err(subpath, f"unknown comparison key {key!r}")
    return _and_of(parts, path)


def _parse_value_predicate(node, path: str):
    """Predicate over a collection of values (data values, encoded values)."""
    if isinstance(node, str):
        return Contains(_parse_pattern(node, path))
    if _is_number(node):
        return Contains(node)
    if not isinstance(node, dict):
        raise _err(path, f"expected a value predicate, got {type(node).__name__}")
    parts = []
    for key in node:
        sub = node[key]
        subpath = f"{path}.{key}"
        if key in AGGREGATE_OPS:
            parts.append(Aggregate(key, _parse_scalar_predicate(sub, subpath)))
        elif key in ("and", "or"):
            if not isinstance(sub, list) or not sub:
                raise _err(subpath, f"{key} needs a non-empty array")
            parts.append(
                Logical(key, tuple(_parse_value_predicate(c, f"{subpath}[{i}]") for i, c in enumerate(sub)))
            )
        elif key == "not":
            parts.append(Logical("not", (_parse_value_predicate(sub, subpath),)))
        elif key == "colorSim":
            normalized = try_normalize_color(sub)
            if normalized is None:
                raise _err(subpath, f"{sub!r} is not a recognized color")
            parts.append(SimilarColor(normalized))
        elif key == "wordSim":
            if not isinstance(sub, str) or not sub:
                raise _err(subpath, "wordSim needs a non-empty string")
            parts.append(SimilarWord(sub))
        elif key in COMPARE_OPS:
            if key == "eq":
                if not (_is_number(sub) or isinstance(sub, str)):
                    raise _err(subpath, "eq needs a number or string")
            elif not _is_number(sub):
                raise _err(subpath, f"{key} needs a number")
            parts.append(Compare(key, sub))
        else:
            raise _err(subpath, f"unknown predicate key {key!r}")
    return _and_of(parts, path)


def _parse_field_constraint(node, path: str):
    if isinstance(node, dict):
        _expect_keys(node, ("wordSim",), path)
        if "wordSim" not in node:
            raise _err(path, "field object supports only wordSim")
        target = node["wordSim"]
        if not isinstance(target, str) or not target:
            raise _err(f"{path}.wordSim", "wordSim needs a non-empty string")
        return SimilarWord(target)
    return _parse_pattern(node, path)


def _parse_style_constraint(node, path: str):
    if isinstance(node, str):
        return _parse_pattern(node, path)
    if _is_number(node):
        return Compare("eq", node)
    if isinstance(node, dict):
        if "colorSim" in node:
            _expect_keys(node, ("colorSim",), path)
            normalized = try_normalize_color(node["colorSim"])
            if normalized is None:
                raise _err(f"{path}.colorSim", f"{node['colorSim']!r} is not a recognized color")
            return SimilarColor(normalized)
        return _parse_scalar_predicate(node, path)
    raise _err(path, f"expected a style constraint, got {type(node).__name__}")


def _parse_axis(node, path: str) -> AxisConstraint:
    if node is True:
        return AxisConstraint()
    if node is False:
        raise _err(path, "axis: false is not supported; omit the key instead")
    if not isinstance(node, dict):
        raise _err(path, f"expected true or an axis object, got {type(node).__name__}")
    _expect_keys(node, ("orient", "title", "tickColor", "tickWidth"), path)
    orient = node.get("orient")
    if orient is not None and orient not in AXIS_ORIENTS:
        raise _err(f"{path}.orient", f"unknown orientation {orient!r}")
    title = node.get("title")
    tick_color = node.get("tickColor")
    tick_width = node.get("tickWidth")
    return AxisConstraint(
        orient=orient,
        title=None if title is None else _parse_pattern(title, f"{path}.title"),
        tick_color=None if tick_color is None else _parse_style_constraint(tick_color, f"{path}.tickColor"),
        tick_width=None if tick_width is None else _parse_scalar_predicate(tick_width, f"{path}.tickWidth"),
    )


_ENCODING_KEYS = ("channel", "type", "field", "mark", "values", "axis", "count")


def _parse_encoding_clause(node, path: str) -> EncodingClause:
    if not isinstance(node, dict):
        raise _err(path, f"expected an encoding clause object, got {type(node).__name__}")
    _expect_keys(node, _ENCODING_KEYS, path)
    return EncodingClause(
        channel=_parse_pattern(node["channel"], f"{path}.channel") if "channel" in node else WILDCARD_PATTERN,
        dtype=_parse_pattern(node["type"], f"{path}.type") if "type" in node else WILDCARD_PATTERN,
        field=_parse_field_constraint(node["field"], f"{path}.field") if "field" in node else WILDCARD_PATTERN,
        mark=_parse_pattern(node["mark"], f"{path}.mark") if "mark" in node else WILDCARD_PATTERN,
        values=_parse_value_predicate(node["values"], f"{path}.values") if "values" in node else None,
        axis=_parse_axis(node["axis"], f"{path}.axis") if "axis" in node else None,
        count=_parse_scalar_predicate(node["count"], f"{path}.count") if "count" in node else None,
    )


def _parse_mark_clause(node, path: str) -> MarkClause:
    if isinstance(node, str):
        return MarkClause(mtype=_parse_pattern(node, path))
    if not isinstance(node, dict):
        raise _err(path, f"expected a mark clause, got {type(node).__name__}")
    mtype = WILDCARD_PATTERN
    style: dict = {}
    for key in node:
        if key == "type":
            mtype = _parse_pattern(node[key], f"{path}.type")
        else:
            style[key] = _parse_style_constraint(node[key], f"{path}.{key}")
    return MarkClause(mtype=mtype, style_attrs=style)


def _parse_data_clause(node, path: str) -> DataClause:
    if not isinstance(node, dict):
        raise _err(path, f"expected a data clause object, got {type(node).__name__}")
    _expect_keys(node, ("field", "values"), path)
    return DataClause(
        field=_parse_field_constraint(node["field"], f"{path}.field") if "field" in node else WILDCARD_PATTERN,
        values=_parse_value_predicate(node["values"], f"{path}.values") if "values" in node else None,
    )


def _parse_timestamp(node, path: str):
    if isinstance(node, str):
        return _parse_pattern(node, path)
    if isinstance(node, dict):
        bounds = []
        for key in node:
            if key not in ("gt", "gte", "lt", "lte"):
                raise _err(f"{path}.{key}", f"unknown time bound {key!r}")
            if not isinstance(node[key], str):
                raise _err(f"{path}.{key}", "time bounds are ISO-8601 strings")
            bounds.append((key, node[key]))
        if not bounds:
            raise _err(path, "empty time constraint")
        return TimeRange(tuple(bounds))
    raise _err(path, f"expected a timestamp constraint, got {type(node).__name__}")


def _as_list(node) -> list:
    return node if isinstance(node, list) else [node]


_TOP_KEYS = ("data", "mark", "encoding", "keyword", "title", "url", "domain", "timestamp")


def query_from_document(doc) -> Query:
    """Build a Query from already-parsed JSON. Raises QuerySchemaError."""
    if not isinstance(doc, dict):
        raise _err("$", f"a query is a JSON object, got {type(doc).__name__}")
    _expect_keys(doc, _TOP_KEYS, "$")
    if not doc:
        raise _err("$", "query specifies nothing; give at least one clause")

    data = tuple(
        _parse_data_clause(n, f"$.data[{i}]") for i, n in enumerate(_as_list(doc.get("data", [])))
    )
    marks = tuple(
        _parse_mark_clause(n, f"$.mark[{i}]") for i, n in enumerate(_as_list(doc.get("mark", [])))
    )
    encodings = tuple(
        _parse_encoding_clause(n, f"$.encoding[{i}]")
        for i, n in enumerate(_as_list(doc.get("encoding", [])))
    )
    metadata = []
    for key in METADATA_KEYS:
        if key not in doc:
            continue
        if key == "timestamp":
            metadata.append(MetadataClause(key, _parse_timestamp(doc[key], f"$.{key}")))
        else:
            metadata.append(MetadataClause(key, _parse_pattern(doc[key], f"$.{key}")))

    q = Query(
        data_clauses=data,
        mark_clauses=marks,
        encoding_clauses=encodings,
        metadata_clauses=tuple(metadata),
    )
    if q.clause_count() == 0:
        raise _err("$", "query specifies nothing; give at least one clause")
    return q


def parse_query(text: str) -> Query:
    """Parse query text. Raises QuerySyntaxError or QuerySchemaError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuerySyntaxError(exc.msg, position=exc.pos, line=exc.lineno, column=exc.colno) from None
    return query_from_document(doc)


def _print_pattern(p) -> str:
    if isinstance(p, StringPattern):
        return p.source()
    raise TypeError(f"not a pattern: {p!r}")


def _print_scalar_predicate(node):
    if isinstance(node, Compare):
        return {node.op: node.operand}
    if isinstance(node, Logical):
        if node.op == "not":
            return {"not": _print_scalar_predicate(node.children[0])}
        return {node.op: [_print_scalar_predicate(c) for c in node.children]}
    raise TypeError(f"not a scalar predicate: {node!r}")


def _print_value_predicate(node):
    if isinstance(node, Contains):
        return _print_pattern(node.item) if isinstance(node.item, StringPattern) else node.item
    if isinstance(node, Aggregate):
        return {node.op: _print_scalar_predicate(node.arg)}
    if isinstance(node, Logical):
        if node.op == "not":
            return {"not": _print_value_predicate(node.children[0])}
        return {node.op: [_print_value_predicate(c) for c in node.children]}
    if isinstance(node, SimilarColor):
        return {"colorSim": node.target}
    if isinstance(node, SimilarWord):
        return {"wordSim": node.target}
    if isinstance(node, Compare):
        return {node.op: node.operand}
    raise TypeError(f"not a value predicate: {node!r}")


def _print_field(node):
    if isinstance(node, SimilarWord):
        return {"wordSim": node.target}
    return _print_pattern(node)


def _print_style(node):
    if isinstance(node, StringPattern):
        return node.source()
    if isinstance(node, SimilarColor):
        return {"colorSim": node.target}
    return _print_scalar_predicate(node)


def _print_encoding_clause(c: EncodingClause) -> dict:
    out: dict = {}
    if not c.channel.is_wildcard():
        out["channel"] = c.channel.source()
    if not c.dtype.is_wildcard():
        out["type"] = c.dtype.source()
    if not (isinstance(c.field, StringPattern) and c.field.is_wildcard()):
        out["field"] = _print_field(c.field)
    if not c.mark.is_wildcard():
        out["mark"] = c.mark.source()
    if c.values is not None:
        out["values"] = _print_value_predicate(c.values)
    if c.axis is not None:
        if c.axis.is_bare():
            out["axis"] = True
        else:
            axis: dict = {}
            if c.axis.orient is not None:
                axis["orient"] = c.axis.orient
            if c.axis.title is not None:
                axis["title"] = c.axis.title.source()
            if c.axis.tick_color is not None:
                axis["tickColor"] = _print_style(c.axis.tick_color)
            if c.axis.tick_width is not None:
                axis["tickWidth"] = _print_scalar_predicate(c.axis.tick_width)
            out["axis"] = axis
    if c.count is not None:
        out["count"] = _print_scalar_predicate(c.count)
    return out


def _print_mark_clause(c: MarkClause):
    if not c.style_attrs:
        return c.mtype.source()
    out: dict = {}
    if not c.mtype.is_wildcard():
        out["type"] = c.mtype.source()
    for name in sorted(c.style_attrs):
        out[name] = _print_style(c.style_attrs[name])
    return out


def _print_data_clause(c: DataClause) -> dict:
    out: dict = {}
    if not (isinstance(c.field, StringPattern) and c.field.is_wildcard()):
        out["field"] = _print_field(c.field)
    if c.values is not None:
        out["values"] = _print_value_predicate(c.values)
    return out


def query_to_document(q: Query) -> dict:
    """Inverse of query_from_document up to AST equality."""

    def pack(items: list):
        return items[0] if len(items) == 1 else items

    out: dict = {}
    if q.data_clauses:
        out["data"] = pack([_print_data_clause(c) for c in q.data_clauses])
    if q.mark_clauses:
        out["mark"] = pack([_print_mark_clause(c) for c in q.mark_clauses])
    if q.encoding_clauses:
        out["encoding"] = pack([_print_encoding_clause(c) for c in q.encoding_clauses])
    for mc in q.metadata_clauses:
        if isinstance(mc.pattern, TimeRange):
            out[mc.key] = {op: value for op, value in mc.pattern.bounds}
        else:
            out[mc.key] = mc.pattern.source()
    return out


def query_to_text(q: Query, indent: int | None = None) -> str:
    return json.dumps(query_to_document(q), indent=indent)


@dataclass(frozen=True)
class ValidationWarning:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"

    def to_dict(self) -> dict:
        return {"path": self.path, "message": self.message}


def _iter_patterns(q: Query):
    """Yield (pattern, vocabulary-or-None, path) for every StringPattern."""
    for i, c in enumerate(q.data_clauses):
        p = f"$.data[{i}]"
        if isinstance(c.field, StringPattern):
            yield c.field, None, f"{p}.field"
        yield from _predicate_patterns(c.values, f"{p}.values")
    for i, c in enumerate(q.mark_clauses):
        p = f"$.mark[{i}]"
        yield c.mtype, MARK_TYPES, f"{p}.type"
        for name in sorted(c.style_attrs):
            node = c.style_attrs[name]
            if isinstance(node, StringPattern):
                yield node, None, f"{p}.{name}"
    for i, c in enumerate(q.encoding_clauses):
        p = f"$.encoding[{i}]"
        yield c.channel, CHANNELS, f"{p}.channel"
        yield c.dtype, DATA_TYPES, f"{p}.type"
        if isinstance(c.field, StringPattern):
            yield c.field, None, f"{p}.field"
        yield c.mark, MARK_TYPES, f"{p}.mark"
        yield from _predicate_patterns(c.values, f"{p}.values")
        if c.axis is not None and c.axis.title is not None:
            yield c.axis.title, None, f"{p}.axis.title"
    for c in q.metadata_clauses:
        if isinstance(c.pattern, StringPattern):
            yield c.pattern, None, f"$.{c.key}"


def _predicate_patterns(node, path: str):
    if isinstance(node, Contains) and isinstance(node.item, StringPattern):
        yield node.item, None, path
    elif isinstance(node, Logical):
        for i, child in enumerate(node.children):
            yield from _predicate_patterns(child, f"{path}.{node.op}[{i}]")


def _comparison_bounds(node, bounds: dict):
    """Fold Compare nodes under an implicit/explicit `and` into an interval."""
    if isinstance(node, Compare):
        op, v = node.op, node.operand
        if not _is_number(v):
            return
        if op == "gt":
            bounds["lo"] = max(bounds.get("lo", float("-inf")), v)
            bounds["lo_open"] = bounds.get("lo") == v
        elif op == "gte":
            if v > bounds.get("lo", float("-inf")):
                bounds["lo"], bounds["lo_open"] = v, False
        elif op == "lt":
            bounds["hi"] = min(bounds.get("hi", float("inf")), v)
            bounds["hi_open"] = bounds.get("hi") == v
        elif op == "lte":
            if v < bounds.get("hi", float("inf")):
                bounds["hi"], bounds["hi_open"] = v, False
        elif op == "eq":
            bounds.setdefault("eq", set()).add(v)
    elif isinstance(node, Logical) and node.op == "and":
        for child in node.children:
            _comparison_bounds(child, bounds)


def _interval_empty(bounds: dict) -> bool:
    lo = bounds.get("lo", float("-inf"))
    hi = bounds.get("hi", float("inf"))
    if lo > hi:
        return True
    if lo == hi and (bounds.get("lo_open") or bounds.get("hi_open")):
        return True
    eqs = bounds.get("eq", set())
    if len(eqs) > 1:
        return True
    for v in eqs:
        if v < lo or v > hi:
            return True
        if v == lo and bounds.get("lo_open"):
            return True
        if v == hi and bounds.get("hi_open"):
            return True
    return False


def _contradiction_paths(node, path: str):
    if isinstance(node, (Compare, Logical)) and not (
        isinstance(node, Logical) and node.op in ("or", "not")
    ):
        bounds: dict = {}
        _comparison_bounds(node, bounds)
        if _interval_empty(bounds):
            yield path
            return
    if isinstance(node, Logical):
        for i, child in enumerate(node.children):
            yield from _contradiction_paths(child, f"{path}.{node.op}[{i}]")
    elif isinstance(node, Aggregate):
        yield from _contradiction_paths(node.arg, f"{path}.{node.op}")


def _iter_predicates(q: Query):
    for i, c in enumerate(q.data_clauses):
        if c.values is not None:
            yield c.values, f"$.data[{i}].values"
    for i, c in enumerate(q.encoding_clauses):
        if c.values is not None:
            yield c.values, f"$.encoding[{i}].values"
        if c.count is not None:
            yield c.count, f"$.encoding[{i}].count"
        if c.axis is not None and c.axis.tick_width is not None:
            yield c.axis.tick_width, f"$.encoding[{i}].axis.tickWidth"
    for i, c in enumerate(q.mark_clauses):
        for name in sorted(c.style_attrs):
            node = c.style_attrs[name]
            if not isinstance(node, StringPattern):
                yield node, f"$.mark[{i}].{name}"


def validate_query(q: Query) -> list[ValidationWarning]:
    """Non-fatal lints: vacuous variables, unmatchable vocab, contradictions."""
    warnings: list[ValidationWarning] = []

    occurrences: dict[str, list[str]] = {}
    for pattern, vocab, path in _iter_patterns(q):
        if pattern.is_variable():
            occurrences.setdefault(pattern.payload, []).append(path)
        elif pattern.kind == KIND_REGEX and vocab is not None:
            if not any(pattern.regex().fullmatch(v) for v in vocab):
                warnings.append(
                    ValidationWarning(path, f"pattern {pattern.payload!r} matches no known value")
                )
    for name in sorted(occurrences):
        paths = occurrences[name]
        if len(paths) == 1:
            warnings.append(
                ValidationWarning(paths[0], f"variable {name} appears once; it binds nothing beyond a wildcard")
            )

    for node, path in _iter_predicates(q):
        for where in _contradiction_paths(node, path):
            warnings.append(ValidationWarning(where, "predicate can never hold (contradictory comparisons)"))

    warnings.sort(key=lambda w: (w.path, w.message))
    return warnings
