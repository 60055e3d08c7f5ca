"""Structural search over deconstructed chart specifications."""

__version__ = "0.1.0"

from .model import (
    Axis,
    ChartMetadata,
    ChartSpec,
    DataField,
    Encoding,
    Mark,
    normalize_rect_to_bar,
    validate_spec,
)

__all__ = [
    "Axis",
    "ChartMetadata",
    "ChartSpec",
    "DataField",
    "Encoding",
    "Mark",
    "normalize_rect_to_bar",
    "validate_spec",
    "__version__",
]
