"""Cursor-position completions for query text being typed.

Works on incomplete JSON: a tolerant scanner tracks the container stack up
to the cursor, then the JSON path is resolved against the query schema to
enumerate the keys or enum values that would be legal there. Candidates
come straight from the schema file (``enum`` for closed vocabularies,
``examples`` for pattern-typed positions), so the editor and the validator
always agree.
"""

from .vocab import QUERY_SCHEMA

_SEGMENTS_BROKEN = object()


def _scan_to_cursor(text: str, cursor: int):
    """Return (in_string, role, segments, prefix) for the cursor position.

    role is "key" or "value" when the cursor sits inside a string;
    segments is the JSON path to that string (or to its enclosing object
    for a key), or _SEGMENTS_BROKEN when the text before the cursor is too
    mangled to place.
    """
    stack: list[dict] = []
    in_string = False
    escape = False
    role = None
    buf: list[str] = []

    for i in range(min(cursor, len(text))):
        ch = text[i]
        if in_string:
            if escape:
                escape = False
                buf.append(ch)
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_string = False
                closed = "".join(buf)
                buf = []
                if role == "key" and stack and stack[-1]["kind"] == "obj":
                    stack[-1]["key"] = closed
                    stack[-1]["phase"] = "after-key"
                elif stack and stack[-1]["kind"] == "obj":
                    stack[-1]["phase"] = "after-value"
                role = None
            else:
                buf.append(ch)
            continue
        if ch == '"':
            in_string = True
            buf = []
            top = stack[-1] if stack else None
            if top is not None and top["kind"] == "obj" and top["phase"] in ("expect-key", "after-value"):
                role = "key"
            else:
                role = "value"
        elif ch == "{":
            stack.append({"kind": "obj", "key": None, "phase": "expect-key"})
        elif ch == "[":
            stack.append({"kind": "arr", "index": 0})
        elif ch == "}":
            if not stack or stack[-1]["kind"] != "obj":
                return False, None, _SEGMENTS_BROKEN, ""
            stack.pop()
            if stack and stack[-1]["kind"] == "obj":
                stack[-1]["phase"] = "after-value"
        elif ch == "]":
            if not stack or stack[-1]["kind"] != "arr":
                return False, None, _SEGMENTS_BROKEN, ""
            stack.pop()
            if stack and stack[-1]["kind"] == "obj":
                stack[-1]["phase"] = "after-value"
        elif ch == ":":
            if stack and stack[-1]["kind"] == "obj":
                stack[-1]["phase"] = "expect-value"
        elif ch == ",":
            if stack:
                top = stack[-1]
                if top["kind"] == "obj":
                    top["phase"] = "expect-key"
                    top["key"] = None
                else:
                    top["index"] += 1

    if not in_string:
        return False, None, [], ""

    segments: list = []
    for depth, frame in enumerate(stack):
        last = depth == len(stack) - 1
        if frame["kind"] == "arr":
            segments.append(frame["index"])
        else:
            if last and role == "key":
                continue
            if frame["key"] is None:
                return True, role, _SEGMENTS_BROKEN, ""
            segments.append(frame["key"])
    return True, role, segments, "".join(buf)


def _string_closes(text: str, cursor: int) -> bool:
    """Whether the string open at the cursor has a closing quote later."""
    escape = False
    for ch in text[cursor:]:
        if escape:
            escape = False
        elif ch == "\\":
            escape = True
        elif ch == '"':
            return True
    return False


def _deref(node: dict) -> dict:
    while isinstance(node, dict) and "$ref" in node:
        target = node["$ref"].split("#", 1)[-1]
        resolved = QUERY_SCHEMA
        for part in target.strip("/").split("/"):
            if not part:
                continue
            resolved = resolved[part]
        node = resolved
    return node


def _resolve(node, segments: list):
    """Walk a JSON path through the schema; yield every reachable subschema."""
    if not isinstance(node, dict):
        return
    node = _deref(node)
    if not segments:
        yield node
        return
    head, rest = segments[0], segments[1:]
    if "oneOf" in node:
        for branch in node["oneOf"]:
            yield from _resolve(branch, segments)
        return
    if isinstance(head, int):
        if "items" in node:
            yield from _resolve(node["items"], rest)
        return
    props = node.get("properties", {})
    if head in props:
        yield from _resolve(props[head], rest)
        return
    extra = node.get("additionalProperties")
    if isinstance(extra, dict):
        yield from _resolve(extra, rest)


def _value_candidates(node) -> list[str]:
    node = _deref(node)
    out: list[str] = []
    if "oneOf" in node:
        for branch in node["oneOf"]:
            out.extend(_value_candidates(branch))
        return out
    for key in ("enum", "examples"):
        for v in node.get(key, ()):
            if isinstance(v, str):
                out.append(v)
    return out


def _key_candidates(node) -> list[str]:
    node = _deref(node)
    out: list[str] = []
    if "oneOf" in node:
        for branch in node["oneOf"]:
            out.extend(_key_candidates(branch))
        return out
    out.extend(node.get("properties", {}).keys())
    return out


def completions_at(text: str, cursor: int) -> list[str]:
    """Candidate tokens for the cursor position, alphabetical.

    Suggestions appear only inside an unterminated string: either a key
    being typed or an enumerated value. A string that already has its
    closing quote yields nothing.
    """
    cursor = max(0, min(cursor, len(text)))
    in_string, role, segments, prefix = _scan_to_cursor(text, cursor)
    if not in_string or segments is _SEGMENTS_BROKEN:
        return []
    if _string_closes(text, cursor):
        return []

    candidates: list[str] = []
    for node in _resolve(QUERY_SCHEMA, list(segments)):
        if role == "key":
            candidates.extend(_key_candidates(node))
        else:
            candidates.extend(_value_candidates(node))
    return sorted({c for c in candidates if c.startswith(prefix)})
