"""Per-attribute movie similarity and the pairwise feature matrix.

Pairs are enumerated lexicographically over movie indices (i<j, ids
ascending); every pair-indexed consumer shares this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .corpus import MovieMetadata


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str  # "set" | "categorical" | "scalar"
    extractor: Callable[[MovieMetadata], object]
    scalar_range: float | None = None  # fixed range for scalar kinds


def default_schema() -> list[Attribute]:
    """Seven attributes: six Jaccard set similarities plus categorical
    language. Scalars (runtime/budget/popularity) are opt-in."""
    return [
        Attribute("genres", "set", lambda m: m.genres),
        Attribute("director", "set", lambda m: m.director),
        Attribute("writer", "set", lambda m: m.writer),
        Attribute("actors", "set", lambda m: m.actors),
        Attribute("production_companies", "set", lambda m: m.production_companies),
        Attribute("production_countries", "set", lambda m: m.production_countries),
        Attribute("language", "categorical", lambda m: m.language),
    ]


def scalar_attributes() -> list[Attribute]:
    """Optional scalar attributes with fixed comparison ranges."""
    return [
        Attribute("runtime_minutes", "scalar", lambda m: m.runtime_minutes, 300.0),
        Attribute("popularity", "scalar", lambda m: m.popularity, 1000.0),
        Attribute("budget", "scalar", lambda m: m.budget, 5e8),
    ]


def attribute_similarity(a, b, kind: str, scalar_range: float | None = None) -> float:
    """Similarity in [0,1]; a missing side always scores 0."""
    if kind == "set":
        a = a or frozenset()
        b = b or frozenset()
        if not a or not b:
            return 0.0
        union = len(a | b)
        return len(a & b) / union
    if kind == "categorical":
        if a is None or b is None or a == "" or b == "":
            return 0.0
        return 1.0 if a == b else 0.0
    if kind == "scalar":
        if a is None or b is None:
            return 0.0
        if scalar_range is None or scalar_range <= 0:
            raise ValueError("scalar attribute needs a positive range")
        return max(0.0, 1.0 - abs(float(a) - float(b)) / scalar_range)
    raise ValueError(f"unknown attribute kind {kind!r}")


def feature_vector(
    mi: MovieMetadata, mj: MovieMetadata, schema: list[Attribute]
) -> list[float]:
    return [
        attribute_similarity(
            attr.extractor(mi), attr.extractor(mj), attr.kind, attr.scalar_range
        )
        for attr in schema
    ]


def closeness(
    i: int, j: int, metadata: dict[int, MovieMetadata], schema: list[Attribute]
) -> float:
    """Sum of per-attribute similarities; exactly 0 for i == j."""
    if i not in metadata or j not in metadata:
        missing = i if i not in metadata else j
        raise KeyError(f"unknown movie {missing}")
    if i == j:
        return 0.0
    return float(sum(feature_vector(metadata[i], metadata[j], schema)))


class FeatureMatrix:
    """Dense n x M(M-1)/2 matrix of per-attribute pair similarities."""

    def __init__(self, movie_ids: list[int], schema: list[Attribute], values: np.ndarray):
        self.movie_ids = list(movie_ids)
        self.schema = list(schema)
        self.values = values
        self._index = {mid: i for i, mid in enumerate(self.movie_ids)}
        M = len(self.movie_ids)
        expected = (len(schema), M * (M - 1) // 2)
        if values.shape != expected:
            raise ValueError(f"feature matrix shape {values.shape} != {expected}")

    @property
    def n_attributes(self) -> int:
        return len(self.schema)

    @property
    def n_pairs(self) -> int:
        return self.values.shape[1]

    def pair_column(self, id_i: int, id_j: int) -> int:
        i = self._index.get(id_i)
        j = self._index.get(id_j)
        if i is None or j is None:
            missing = id_i if i is None else id_j
            raise KeyError(f"unknown movie {missing}")
        if i == j:
            raise KeyError(f"no pair column for a movie with itself: {id_i}")
        if i > j:
            i, j = j, i
        M = len(self.movie_ids)
        # offset of row i in lexicographic (i<j) enumeration
        return i * M - i * (i + 1) // 2 + (j - i - 1)

    def pair_features(self, id_i: int, id_j: int) -> np.ndarray:
        return self.values[:, self.pair_column(id_i, id_j)]

    def iter_pairs(self):
        M = len(self.movie_ids)
        col = 0
        for i in range(M):
            for j in range(i + 1, M):
                yield col, self.movie_ids[i], self.movie_ids[j]
                col += 1


def build_feature_matrix(
    movie_ids: list[int],
    metadata: dict[int, MovieMetadata],
    schema: list[Attribute] | None = None,
) -> FeatureMatrix:
    if schema is None:
        schema = default_schema()
    ids = sorted(movie_ids)
    if len(ids) < 2:
        raise ValueError("need at least 2 movies")
    M = len(ids)
    values = np.zeros((len(schema), M * (M - 1) // 2))
    col = 0
    for i in range(M):
        for j in range(i + 1, M):
            values[:, col] = feature_vector(metadata[ids[i]], metadata[ids[j]], schema)
            col += 1
    return FeatureMatrix(ids, schema, values)
