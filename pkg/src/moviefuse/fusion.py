"""Weighted fusion of the hybrid content score H and the sentiment
similarity G into the combined score CS, and Top-N ranking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .content import FeatureMatrix
from .sentiment import MovieSentiment
from .weights import WeightVector

DEFAULT_D = 10.0
H_SCALE = 10.0


@dataclass(frozen=True)
class FusionConfig:
    omega1: float = 0.5
    omega2: float = 0.5
    D: float = DEFAULT_D

    def __post_init__(self):
        if not (0.0 <= self.omega1 <= 1.0 and 0.0 <= self.omega2 <= 1.0):
            raise ValueError("omega weights must lie in [0,1]")
        if abs(self.omega1 + self.omega2 - 1.0) > 1e-9:
            raise ValueError("omega1 + omega2 must equal 1")
        if self.D <= 0:
            raise ValueError("D must be positive")


@dataclass(frozen=True)
class Recommendation:
    movie_id: int
    title: str
    hybrid: float
    sentiment_sim: float
    combined: float
    no_tweets: bool


@dataclass(frozen=True)
class RecommendationList:
    source_movie_id: int
    requested: int
    entries: tuple[Recommendation, ...]


def sentiment_similarity(s_i: float, s_j: float, D: float = DEFAULT_D) -> float:
    """G(i,j) = D - |s_i - s_j|."""
    return D - abs(s_i - s_j)


def combined_score(H: float, G: float, config: FusionConfig) -> float:
    """CS(i,j) = omega1 * H + omega2 * G."""
    return config.omega1 * H + config.omega2 * G


@dataclass
class RecommenderModel:
    """Trained engine: immutable after construction, reads are pure."""

    features: FeatureMatrix
    weights: WeightVector
    sentiments: dict[int, MovieSentiment]
    titles: dict[int, str]
    config: FusionConfig = field(default_factory=FusionConfig)
    hybrid_degenerate: bool = False

    def __post_init__(self):
        if not self.weights.normalized:
            raise ValueError("weights must be normalized before fusion")
        q = self.weights.as_array()
        raw = q @ self.features.values
        lo, hi = raw.min(), raw.max()
        if hi == lo:
            self.hybrid_degenerate = True
            self._h = np.zeros_like(raw)
        else:
            self._h = (raw - lo) / (hi - lo) * H_SCALE
        self._raw_h = raw

    @property
    def movie_ids(self) -> list[int]:
        return self.features.movie_ids

    def raw_hybrid_score(self, i: int, j: int) -> float:
        """Dot product of normalized weights with the pair's features,
        before the [0,10] rescale."""
        return float(self._raw_h[self.features.pair_column(i, j)])

    def hybrid_score(self, i: int, j: int) -> float:
        """H rescaled across all pairs to [0,10]."""
        return float(self._h[self.features.pair_column(i, j)])

    def sentiment_rating(self, i: int) -> MovieSentiment:
        return self.sentiments[i]

    def combined(self, i: int, j: int, config: FusionConfig | None = None) -> float:
        cfg = config or self.config
        H = self.hybrid_score(i, j)
        G = sentiment_similarity(
            self.sentiments[i].sentiment_rating,
            self.sentiments[j].sentiment_rating,
            cfg.D,
        )
        return combined_score(H, G, cfg)

    def recommend(
        self, movie_id: int, N: int, config: FusionConfig | None = None
    ) -> RecommendationList:
        """All other movies ranked by CS descending, ties broken by
        ascending movie id."""
        if N < 1:
            raise ValueError("N must be >= 1")
        if movie_id not in self.sentiments or movie_id not in self.titles:
            raise KeyError(f"unknown movie {movie_id}")
        cfg = config or self.config
        s_i = self.sentiments[movie_id].sentiment_rating
        scored = []
        for other in self.movie_ids:
            if other == movie_id:
                continue
            H = self.hybrid_score(movie_id, other)
            sj = self.sentiments[other]
            G = sentiment_similarity(s_i, sj.sentiment_rating, cfg.D)
            scored.append(
                Recommendation(
                    movie_id=other,
                    title=self.titles.get(other, ""),
                    hybrid=H,
                    sentiment_sim=G,
                    combined=combined_score(H, G, cfg),
                    no_tweets=sj.no_tweets,
                )
            )
        scored.sort(key=lambda r: (-r.combined, r.movie_id))
        return RecommendationList(movie_id, N, tuple(scored[:N]))
