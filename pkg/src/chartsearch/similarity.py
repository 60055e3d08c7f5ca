"""Color similarity in CIE-LAB and word similarity over embeddings.

Color distance is plain Euclidean ΔE (CIE76) between LAB coordinates
under D65. Word similarity is cosine similarity over a unit-normalized
embedding table; a pair is "similar" when the cosine reaches the
configured threshold, 0.75 by default.
"""

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels
from .colors import hex_to_rgb, try_normalize_color

# Acceptance radius for color-similarity predicates. The CIE76 metric puts
# just-noticeable differences around 2.3; 25 admits clearly related shades
# (e.g. the slate grays) without crossing hue families.
DEFAULT_COLOR_THRESHOLD = 25.0
DEFAULT_WORD_THRESHOLD = 0.75


@dataclass(frozen=True)
class SimilarityConfig:
    word_threshold: float = DEFAULT_WORD_THRESHOLD
    color_threshold: float = DEFAULT_COLOR_THRESHOLD

    def __post_init__(self):
        if not 0.0 < self.word_threshold <= 1.0:
            raise ValueError("word_threshold must be in (0, 1]")
        if self.color_threshold < 0.0:
            raise ValueError("color_threshold must be nonnegative")


def srgb_to_lab_one(color: str) -> tuple[float, float, float]:
    """LAB coordinates of one color given in any accepted sRGB spelling."""
    rgb = np.array([hex_to_rgb(color)], dtype=np.float64)
    lab = kernels.srgb_to_lab(rgb)
    return (float(lab[0, 0]), float(lab[0, 1]), float(lab[0, 2]))


def color_distance(c1: str, c2: str) -> float:
    """CIE76 ΔE between two colors; 0 iff they normalize identically."""
    rgb = np.array([hex_to_rgb(c1), hex_to_rgb(c2)], dtype=np.float64)
    lab = kernels.srgb_to_lab(rgb)
    return float(kernels.delta_e(lab[0:1], lab[1:2])[0])


def min_color_distance(colors, target: str) -> float | None:
    """Smallest ΔE from any parseable color in *colors* to *target*.

    Non-color values are skipped; None when nothing parseable remains.
    """
    rgbs = []
    for c in colors:
        normalized = try_normalize_color(c)
        if normalized is not None:
            rgbs.append(hex_to_rgb(normalized))
    if not rgbs:
        return None
    labs = kernels.srgb_to_lab(np.array(rgbs, dtype=np.float64))
    target_lab = kernels.srgb_to_lab(np.array([hex_to_rgb(target)], dtype=np.float64))
    distances = kernels.delta_e(labs, np.broadcast_to(target_lab, labs.shape))
    return float(distances.min())


_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


class EmbeddingTable:
    """Token → unit vector map, queried by cosine similarity.

    File format: one token per line, the token followed by its components,
    space-separated. All vectors must share one dimension; they are
    renormalized on load so cosines are plain dot products.
    """

    def __init__(self, tokens: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValueError("matrix shape does not match token count")
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("zero vector in embedding table")
        self.tokens = list(tokens)
        self.matrix = matrix / norms[:, None]
        self.dim = int(matrix.shape[1])
        self._index = {t: i for i, t in enumerate(self.tokens)}

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        tokens: list[str] = []
        rows: list[list[float]] = []
        dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                token, components = parts[0], parts[1:]
                if dim is None:
                    dim = len(components)
                    if dim == 0:
                        raise ValueError(f"{path}:{line_no}: no vector components")
                elif len(components) != dim:
                    raise ValueError(
                        f"{path}:{line_no}: expected {dim} components, got {len(components)}"
                    )
                tokens.append(token)
                rows.append([float(c) for c in components])
        if not tokens:
            raise ValueError(f"{path}: empty embedding file")
        return cls(tokens, np.array(rows, dtype=np.float64))

    def vector(self, text: str) -> np.ndarray | None:
        """Unit vector for a word or multi-word name; None when unknown.

        Multi-token names are lowercased, split on non-alphanumerics, and
        the known constituents' vectors are averaged then renormalized.
        """
        parts = [p for p in _TOKEN_SPLIT.split(text.lower()) if p]
        found = [self.matrix[self._index[p]] for p in parts if p in self._index]
        if not found:
            return None
        if len(found) == 1:
            return found[0]
        mean = np.mean(found, axis=0)
        norm = float(np.linalg.norm(mean))
        if norm == 0.0:
            return None
        return mean / norm

    def similarity(self, w1: str, w2: str) -> float | None:
        """Cosine similarity in [-1, 1], or None when either side is unknown."""
        v1 = self.vector(w1)
        v2 = self.vector(w2)
        if v1 is None or v2 is None:
            return None
        cos = float(kernels.cosine_to(v1[None, :], v2)[0])
        return max(-1.0, min(1.0, cos))

    def similar_tokens(self, word: str, threshold: float) -> list[str]:
        """All vocabulary tokens whose cosine to *word* reaches threshold."""
        v = self.vector(word)
        if v is None:
            return []
        cos = kernels.cosine_to(self.matrix, v)
        return [t for t, c in zip(self.tokens, cos) if c >= threshold]


def word_similarity(w1: str, w2: str, table: EmbeddingTable) -> float | None:
    return table.similarity(w1, w2)


def words_similar(w1: str, w2: str, table: EmbeddingTable, threshold: float = DEFAULT_WORD_THRESHOLD) -> bool:
    """Threshold acceptance; unknown tokens are never similar."""
    sim = table.similarity(w1, w2)
    return sim is not None and sim >= threshold


_default_table: EmbeddingTable | None = None


def default_table() -> EmbeddingTable:
    """The toy table shipped with the package, loaded once."""
    global _default_table
    if _default_table is None:
        path = resources.files("chartsearch").joinpath("data/toy_embeddings.txt")
        with resources.as_file(path) as p:
            _default_table = EmbeddingTable.load(p)
    return _default_table
