"""Vocabulary shared by the model, the query language, and the editor schema.

The JSON schema shipped under ``schema/`` is the single normative source for
every enumeration; this module loads it once and exposes the values as plain
tuples so the rest of the package never hard-codes a vocabulary list.
"""

import json
from importlib import resources

_SCHEMA_TEXT = (
    resources.files("chartsearch").joinpath("schema/query-schema.json").read_text("utf-8")
)
QUERY_SCHEMA: dict = json.loads(_SCHEMA_TEXT)

_DEFS = QUERY_SCHEMA["$defs"]

MARK_TYPES: tuple[str, ...] = tuple(_DEFS["markType"]["enum"])
CHANNELS: tuple[str, ...] = tuple(_DEFS["channel"]["enum"])
DATA_TYPES: tuple[str, ...] = tuple(_DEFS["dataType"]["enum"])
AXIS_ORIENTS: tuple[str, ...] = tuple(_DEFS["orient"]["enum"])

QUANTITATIVE = "quantitative"
NOMINAL = "nominal"

# Channels that position or size a mark along one screen dimension. Values on
# these channels are pixel placements, so cross-chart value predicates on them
# are rarely meaningful; the docs call this out but nothing forbids it.
POSITIONAL_CHANNELS: frozenset[str] = frozenset({"x", "y", "width", "height"})

METADATA_KEYS: tuple[str, ...] = ("domain", "keyword", "timestamp", "title", "url")

AGGREGATE_OPS: tuple[str, ...] = ("average", "count", "max", "min", "sum")
COMPARE_OPS: tuple[str, ...] = ("eq", "gt", "gte", "lt", "lte")
LOGICAL_OPS: tuple[str, ...] = ("and", "not", "or")
SIMILARITY_OPS: tuple[str, ...] = ("colorSim", "wordSim")

ENCODING_CLAUSE_KEYS: tuple[str, ...] = tuple(
    sorted(_DEFS["encodingClause"]["properties"])
)
DATA_CLAUSE_KEYS: tuple[str, ...] = tuple(sorted(_DEFS["dataClause"]["properties"]))
AXIS_CONSTRAINT_KEYS: tuple[str, ...] = tuple(
    sorted(_DEFS["axisConstraint"]["oneOf"][1]["properties"])
)

TOP_LEVEL_KEYS: tuple[str, ...] = tuple(sorted(QUERY_SCHEMA["properties"]))

ORIENTS_BY_AXIS: dict[str, tuple[str, ...]] = {
    "x-axis": ("bottom", "top"),
    "y-axis": ("left", "right"),
}

WILDCARD = "*"
VARIABLE_PREFIX = "$"
