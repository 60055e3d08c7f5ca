"""Core chart model: deconstructed charts as plain immutable values.

A chart is stored the way it was recovered from the page: data fields with
their values, marks with per-instance attributes, encodings linking fields
to mark attributes, axes, and page metadata. Instances are frozen
dataclasses, safe to share across threads and hash-stable once built.
"""

import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from urllib.parse import urlparse

from .colors import is_color, try_normalize_color
from .vocab import AXIS_ORIENTS, CHANNELS, DATA_TYPES, MARK_TYPES, ORIENTS_BY_AXIS

# Sub-pixel jitter tolerance for the fixed-extent test in rect-to-bar
# normalization. Rendered widths rarely agree to more than a half pixel.
EPSILON_BAR = 0.5

AXIS_TYPES = ("x-axis", "y-axis")

_OPACITY_ATTR = re.compile(r"opacity", re.IGNORECASE)
_COLOR_ATTR = re.compile(r"^(fill|stroke|color)$|color$", re.IGNORECASE)


@dataclass(frozen=True)
class DataField:
    name: str
    dtype: str
    values: tuple = ()

    def to_dict(self) -> dict:
        return {"name": self.name, "dtype": self.dtype, "values": list(self.values)}

    @classmethod
    def from_dict(cls, d: dict) -> "DataField":
        return cls(name=d["name"], dtype=d["dtype"], values=tuple(d.get("values", ())))


@dataclass(frozen=True)
class Mark:
    id: str
    mtype: str
    attrs: dict = field(default_factory=dict)
    style_attrs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "attrs", {k: tuple(v) for k, v in self.attrs.items()}
        )
        object.__setattr__(self, "style_attrs", dict(self.style_attrs))

    def instance_count(self) -> int:
        for values in self.attrs.values():
            return len(values)
        return 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "mtype": self.mtype,
            "attrs": {k: list(v) for k, v in sorted(self.attrs.items())},
            "styleAttrs": dict(sorted(self.style_attrs.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Mark":
        return cls(
            id=d["id"],
            mtype=d["mtype"],
            attrs={k: tuple(v) for k, v in d.get("attrs", {}).items()},
            style_attrs=dict(d.get("styleAttrs", {})),
        )


@dataclass(frozen=True)
class Encoding:
    field_name: str
    dtype: str
    mtype: str
    channel: str

    def to_dict(self) -> dict:
        return {
            "fieldName": self.field_name,
            "dtype": self.dtype,
            "mtype": self.mtype,
            "channel": self.channel,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Encoding":
        return cls(
            field_name=d["fieldName"],
            dtype=d["dtype"],
            mtype=d["mtype"],
            channel=d["channel"],
        )


@dataclass(frozen=True)
class Axis:
    atype: str
    orient: str
    field_name: str | None = None
    title: str | None = None
    tick_color: str | None = None
    tick_width: float | None = None

    def to_dict(self) -> dict:
        d: dict = {"atype": self.atype, "orient": self.orient}
        if self.field_name is not None:
            d["fieldName"] = self.field_name
        if self.title is not None:
            d["title"] = self.title
        if self.tick_color is not None:
            d["tickColor"] = self.tick_color
        if self.tick_width is not None:
            d["tickWidth"] = self.tick_width
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Axis":
        return cls(
            atype=d["atype"],
            orient=d["orient"],
            field_name=d.get("fieldName"),
            title=d.get("title"),
            tick_color=d.get("tickColor"),
            tick_width=d.get("tickWidth"),
        )


@dataclass(frozen=True)
class ChartMetadata:
    url: str = ""
    domain: str = ""
    title: str = ""
    page_text: str = ""
    timestamp: str | None = None
    thumbnail_path: str | None = None

    def to_dict(self) -> dict:
        d: dict = {
            "url": self.url,
            "domain": self.domain,
            "title": self.title,
            "pageText": self.page_text,
        }
        if self.timestamp is not None:
            d["timestamp"] = self.timestamp
        if self.thumbnail_path is not None:
            d["thumbnailPath"] = self.thumbnail_path
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ChartMetadata":
        return cls(
            url=d.get("url", ""),
            domain=d.get("domain", ""),
            title=d.get("title", ""),
            page_text=d.get("pageText", ""),
            timestamp=d.get("timestamp"),
            thumbnail_path=d.get("thumbnailPath"),
        )


@dataclass(frozen=True)
class ChartSpec:
    id: str
    fields: tuple = ()
    marks: tuple = ()
    encodings: tuple = ()
    axes: tuple = ()
    metadata: ChartMetadata = field(default_factory=ChartMetadata)
    background: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        object.__setattr__(self, "marks", tuple(self.marks))
        object.__setattr__(self, "encodings", tuple(self.encodings))
        object.__setattr__(self, "axes", tuple(self.axes))

    def field_by_name(self, name: str) -> DataField | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def marks_of_type(self, mtype: str) -> list[Mark]:
        return [m for m in self.marks if m.mtype == mtype]

    def to_dict(self) -> dict:
        d: dict = {
            "id": self.id,
            "fields": [f.to_dict() for f in self.fields],
            "marks": [m.to_dict() for m in self.marks],
            "encodings": [e.to_dict() for e in self.encodings],
            "axes": [a.to_dict() for a in self.axes],
            "metadata": self.metadata.to_dict(),
        }
        if self.background is not None:
            d["background"] = self.background
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ChartSpec":
        return cls(
            id=d.get("id", ""),
            fields=tuple(DataField.from_dict(x) for x in d.get("fields", ())),
            marks=tuple(Mark.from_dict(x) for x in d.get("marks", ())),
            encodings=tuple(Encoding.from_dict(x) for x in d.get("encodings", ())),
            axes=tuple(Axis.from_dict(x) for x in d.get("axes", ())),
            metadata=ChartMetadata.from_dict(d.get("metadata", {})),
            background=d.get("background"),
        )


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_id(spec: ChartSpec) -> str:
    """Stable chart id: hash of the canonical serialization minus the id."""
    d = spec.to_dict()
    d.pop("id", None)
    digest = hashlib.sha256(canonical_json(d).encode("utf-8")).hexdigest()
    return "c" + digest[:16]


def with_content_id(spec: ChartSpec) -> ChartSpec:
    return ChartSpec(
        id=content_id(spec),
        fields=spec.fields,
        marks=spec.marks,
        encodings=spec.encodings,
        axes=spec.axes,
        metadata=spec.metadata,
        background=spec.background,
    )


_SPEC_KEYS = frozenset(("id", "fields", "marks", "encodings", "axes", "metadata", "background"))


def parse_spec(text: str) -> ChartSpec:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("chart spec must be a JSON object")
    # from_dict treats every key as optional so stored records stay
    # replayable; user-supplied documents must at least look like a spec.
    if not _SPEC_KEYS & doc.keys():
        raise ValueError("no chart spec keys present (expected fields, marks, encodings, ...)")
    return ChartSpec.from_dict(doc)


def serialize_spec(spec: ChartSpec) -> str:
    return canonical_json(spec.to_dict())


@dataclass(frozen=True)
class Violation:
    vtype: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"type": self.vtype, "path": self.path, "message": self.message}


def _is_finite_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def validate_spec(spec: ChartSpec) -> list[Violation]:
    """Collect every invariant violation in a chart.

    Violations are data, not exceptions: loading a corpus should report
    all defects in one pass. The result is sorted by (type, path) so
    repeated runs diff cleanly.
    """
    out: list[Violation] = []
    add = lambda vtype, path, message: out.append(Violation(vtype, path, message))

    seen_fields: dict[str, int] = {}
    encoded_fields = {e.field_name for e in spec.encodings}
    for i, f in enumerate(spec.fields):
        path = f"fields[{i}]"
        if f.name in seen_fields:
            add("duplicate-field", path, f"field name {f.name!r} already used at fields[{seen_fields[f.name]}]")
        else:
            seen_fields[f.name] = i
        if f.dtype not in DATA_TYPES:
            add("enum", f"{path}.dtype", f"unknown data type {f.dtype!r}")
        if f.name in encoded_fields and len(f.values) == 0:
            add("empty-values", f"{path}.values", f"encoded field {f.name!r} has no values")
        if f.dtype == "quantitative":
            for j, v in enumerate(f.values):
                if not _is_finite_number(v):
                    add("value-type", f"{path}.values[{j}]", f"quantitative field {f.name!r} holds non-finite {v!r}")

    mark_types_present = set()
    seen_mark_ids: dict[str, int] = {}
    for i, m in enumerate(spec.marks):
        path = f"marks[{i}]"
        mark_types_present.add(m.mtype)
        if m.id in seen_mark_ids:
            add("duplicate-mark-id", path, f"mark id {m.id!r} already used at marks[{seen_mark_ids[m.id]}]")
        else:
            seen_mark_ids[m.id] = i
        if m.mtype not in MARK_TYPES:
            add("enum", f"{path}.mtype", f"unknown mark type {m.mtype!r}")
        lengths = {name: len(vals) for name, vals in m.attrs.items()}
        if lengths:
            counts = set(lengths.values())
            if len(counts) > 1:
                detail = ", ".join(f"{k}={v}" for k, v in sorted(lengths.items()))
                add("length-mismatch", f"{path}.attrs", f"attribute lists differ in length ({detail})")
            if 0 in counts:
                add("empty-values", f"{path}.attrs", "attribute list with zero instances")
        for name in sorted(m.attrs):
            vals = m.attrs[name]
            if _OPACITY_ATTR.search(name):
                for j, v in enumerate(vals):
                    if not _is_finite_number(v) or not 0.0 <= v <= 1.0:
                        add("value-range", f"{path}.attrs.{name}[{j}]", f"opacity {v!r} outside [0, 1]")
            elif _COLOR_ATTR.search(name):
                for j, v in enumerate(vals):
                    if v is not None and not is_color(v):
                        add("value-type", f"{path}.attrs.{name}[{j}]", f"{v!r} does not parse as a color")

    for i, e in enumerate(spec.encodings):
        path = f"encodings[{i}]"
        if e.dtype not in DATA_TYPES:
            add("enum", f"{path}.dtype", f"unknown data type {e.dtype!r}")
        if e.channel not in CHANNELS:
            add("enum", f"{path}.channel", f"unknown channel {e.channel!r}")
        if e.mtype not in MARK_TYPES:
            add("enum", f"{path}.mtype", f"unknown mark type {e.mtype!r}")
        target = spec.field_by_name(e.field_name)
        if target is None:
            add("dangling-reference", f"{path}.fieldName", f"encoding references missing field {e.field_name!r}")
        elif target.dtype != e.dtype:
            add("dangling-reference", f"{path}.dtype", f"field {e.field_name!r} is {target.dtype}, encoding claims {e.dtype}")
        if e.mtype in MARK_TYPES and e.mtype not in mark_types_present:
            add("dangling-reference", f"{path}.mtype", f"no mark of type {e.mtype!r} in chart")

    for i, a in enumerate(spec.axes):
        path = f"axes[{i}]"
        if a.atype not in AXIS_TYPES:
            add("enum", f"{path}.atype", f"unknown axis type {a.atype!r}")
        elif a.orient not in ORIENTS_BY_AXIS[a.atype]:
            add("value-range", f"{path}.orient", f"{a.atype} cannot be oriented {a.orient!r}")
        if a.orient not in AXIS_ORIENTS:
            add("enum", f"{path}.orient", f"unknown orientation {a.orient!r}")
        if a.tick_color is not None and not is_color(a.tick_color):
            add("value-type", f"{path}.tickColor", f"{a.tick_color!r} does not parse as a color")

    if spec.background is not None and not is_color(spec.background):
        add("value-type", "background", f"{spec.background!r} does not parse as a color")

    meta = spec.metadata
    if meta.url:
        host = urlparse(meta.url).hostname
        if host and meta.domain and host != meta.domain:
            add("metadata-mismatch", "metadata.domain", f"domain {meta.domain!r} does not match url host {host!r}")

    out.sort(key=lambda v: (v.vtype, v.path))
    return out


def _constant_within(values, tolerance: float) -> bool:
    numeric = [v for v in values if _is_finite_number(v)]
    if len(numeric) != len(values) or not numeric:
        return False
    return max(numeric) - min(numeric) <= tolerance


def normalize_rect_to_bar(spec: ChartSpec, tolerance: float = EPSILON_BAR) -> ChartSpec:
    """Retype rect marks that behave like bars.

    A rect mark is a bar when a quantitative field drives one of its
    extents (height or width) while the other extent stays fixed across
    instances, up to *tolerance*. Marks convert individually; encodings
    keep their mark-type link intact, so the quantitative length encodings
    that justified the conversion follow the marks, and the remaining
    rect encodings follow only once no rect mark is left. Idempotent.
    """
    rect_encodings = [e for e in spec.encodings if e.mtype == "rect"]
    has_q_height = any(e.dtype == "quantitative" and e.channel == "height" for e in rect_encodings)
    has_q_width = any(e.dtype == "quantitative" and e.channel == "width" for e in rect_encodings)

    converted: set[str] = set()
    vertical = horizontal = False
    for m in spec.marks:
        if m.mtype != "rect":
            continue
        if has_q_height and _constant_within(m.attrs.get("width", ()), tolerance):
            converted.add(m.id)
            vertical = True
        elif has_q_width and _constant_within(m.attrs.get("height", ()), tolerance):
            converted.add(m.id)
            horizontal = True

    if not converted:
        return spec

    new_marks = tuple(
        Mark(id=m.id, mtype="bar", attrs=m.attrs, style_attrs=m.style_attrs)
        if m.id in converted
        else m
        for m in spec.marks
    )
    rect_remains = any(m.mtype == "rect" for m in new_marks)

    def retarget(e: Encoding) -> Encoding:
        if e.mtype != "rect":
            return e
        follows = not rect_remains or (
            e.dtype == "quantitative"
            and ((vertical and e.channel == "height") or (horizontal and e.channel == "width"))
        )
        if not follows:
            return e
        return Encoding(field_name=e.field_name, dtype=e.dtype, mtype="bar", channel=e.channel)

    return ChartSpec(
        id=spec.id,
        fields=spec.fields,
        marks=new_marks,
        encodings=tuple(retarget(e) for e in spec.encodings),
        axes=spec.axes,
        metadata=spec.metadata,
        background=spec.background,
    )
