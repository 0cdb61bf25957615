"""Sparse user-item matrix, KNN rating prediction and the item
co-interest graph used as the weight-learning target."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_K = 30
DEFAULT_LIKE_THRESHOLD = 7.0


@dataclass(frozen=True)
class Prediction:
    value: float
    evidence: bool


class UserItemMatrix:
    """Immutable sparse ratings matrix with id<->index maps both ways.

    Movie and user indices follow ascending id order so pair-indexed
    consumers share one deterministic ordering.
    """

    def __init__(self, ratings, movie_ids=None):
        user_ids = sorted({r.user_id for r in ratings})
        if movie_ids is None:
            movie_ids = sorted({r.movie_id for r in ratings})
        else:
            movie_ids = sorted(movie_ids)
        self.user_ids = user_ids
        self.movie_ids = movie_ids
        self.user_index = {uid: i for i, uid in enumerate(user_ids)}
        self.movie_index = {mid: i for i, mid in enumerate(movie_ids)}
        # row-major and column-major views of the same entries
        self._by_user: list[dict[int, float]] = [dict() for _ in user_ids]
        self._by_movie: list[dict[int, float]] = [dict() for _ in movie_ids]
        for r in ratings:
            u = self.user_index[r.user_id]
            m = self.movie_index.get(r.movie_id)
            if m is None:
                continue
            if m in self._by_user[u]:
                raise ValueError(
                    f"duplicate rating for user {r.user_id}, movie {r.movie_id}"
                )
            if not 0 <= r.rating <= 10:
                raise ValueError(f"rating {r.rating} outside [0,10]")
            self._by_user[u][m] = float(r.rating)
            self._by_movie[m][u] = float(r.rating)

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_movies(self) -> int:
        return len(self.movie_ids)

    def rating(self, u: int, m: int) -> float | None:
        return self._by_user[u].get(m)

    def user_ratings(self, u: int) -> dict[int, float]:
        return self._by_user[u]

    def movie_raters(self, m: int) -> dict[int, float]:
        return self._by_movie[m]

    def _with_extra(self, extra: dict[tuple[int, int], float]) -> "UserItemMatrix":
        clone = object.__new__(UserItemMatrix)
        clone.user_ids = self.user_ids
        clone.movie_ids = self.movie_ids
        clone.user_index = self.user_index
        clone.movie_index = self.movie_index
        clone._by_user = [dict(d) for d in self._by_user]
        clone._by_movie = [dict(d) for d in self._by_movie]
        for (u, m), value in extra.items():
            clone._by_user[u][m] = value
            clone._by_movie[m][u] = value
        return clone


def user_similarity(u: int, v: int, matrix: UserItemMatrix, metric: str = "cosine") -> float:
    """Similarity over co-rated movies only; too little overlap maps to 0."""
    if u == v:
        raise ValueError("u and v must differ")
    if not (0 <= u < matrix.n_users and 0 <= v < matrix.n_users):
        raise KeyError(f"unknown user index: {u if u >= matrix.n_users else v}")
    ru, rv = matrix.user_ratings(u), matrix.user_ratings(v)
    common = sorted(ru.keys() & rv.keys())
    if metric == "cosine":
        if not common:
            return 0.0
        dot = sum(ru[m] * rv[m] for m in common)
        nu = math.sqrt(sum(ru[m] ** 2 for m in common))
        nv = math.sqrt(sum(rv[m] ** 2 for m in common))
        if nu == 0.0 or nv == 0.0:
            return 0.0
        return max(-1.0, min(1.0, dot / (nu * nv)))
    if metric == "pearson":
        if len(common) < 2:
            return 0.0
        mu = sum(ru[m] for m in common) / len(common)
        mv = sum(rv[m] for m in common) / len(common)
        du = [ru[m] - mu for m in common]
        dv = [rv[m] - mv for m in common]
        num = sum(a * b for a, b in zip(du, dv))
        den = math.sqrt(sum(a * a for a in du)) * math.sqrt(sum(b * b for b in dv))
        if den == 0.0:
            return 0.0
        return max(-1.0, min(1.0, num / den))
    raise ValueError(f"unknown metric {metric!r}")


def predict_rating(
    u: int,
    i: int,
    K: int,
    matrix: UserItemMatrix,
    metric: str = "cosine",
    normalized: bool = False,
) -> Prediction:
    """Average of similarity-weighted neighbor ratings over the K most
    similar raters of movie i.

    The divisor is K even when fewer neighbors exist; the `normalized`
    variant divides by the sum of |similarity| instead.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    raters = matrix.movie_raters(i)
    candidates = [v for v in raters if v != u]
    if not candidates:
        return Prediction(0.0, False)
    sims = {v: user_similarity(u, v, matrix, metric) for v in candidates}
    # ties at the K-th similarity break by ascending user id
    candidates.sort(key=lambda v: (-sims[v], matrix.user_ids[v]))
    neighbors = candidates[:K]
    total = sum(sims[v] * raters[v] for v in neighbors)
    if normalized:
        denom = sum(abs(sims[v]) for v in neighbors)
        if denom == 0.0:
            return Prediction(0.0, False)
        return Prediction(total / denom, True)
    return Prediction(total / K, True)


def densify(
    matrix: UserItemMatrix,
    K: int = DEFAULT_K,
    threshold: float = 0.0,
    metric: str = "cosine",
    normalized: bool = False,
) -> UserItemMatrix:
    """New matrix with predicted entries (clamped to [0,10]) added for
    unobserved (user, movie) pairs whose prediction has evidence and value
    >= threshold. Observed entries are never overwritten."""
    extra: dict[tuple[int, int], float] = {}
    for u in range(matrix.n_users):
        rated = matrix.user_ratings(u)
        for m in range(matrix.n_movies):
            if m in rated:
                continue
            pred = predict_rating(u, m, K, matrix, metric, normalized)
            if pred.evidence and pred.value >= threshold:
                extra[(u, m)] = max(0.0, min(10.0, pred.value))
    return matrix._with_extra(extra)


@dataclass
class CoInterestVector:
    """S(i,j) counts per unordered movie-index pair, stored once for i<j."""

    n_movies: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return self.entries.get((i, j), 0.0)

    def to_vector(self):
        """Dense vector in lexicographic (i<j) pair order, length M(M-1)/2."""
        import numpy as np

        M = self.n_movies
        out = np.zeros(M * (M - 1) // 2)
        col = 0
        for i in range(M):
            for j in range(i + 1, M):
                out[col] = self.get(i, j)
                col += 1
        return out


def co_interest(
    matrix: UserItemMatrix, like_threshold: float = DEFAULT_LIKE_THRESHOLD
) -> CoInterestVector:
    """S(i,j) = number of users rating both i and j at or above the
    like threshold."""
    if not 0 <= like_threshold <= 10:
        raise ValueError("like_threshold must lie in [0,10]")
    vec = CoInterestVector(matrix.n_movies)
    for u in range(matrix.n_users):
        liked = sorted(
            m for m, r in matrix.user_ratings(u).items() if r >= like_threshold
        )
        for a in range(len(liked)):
            for b in range(a + 1, len(liked)):
                key = (liked[a], liked[b])
                vec.entries[key] = vec.entries.get(key, 0.0) + 1.0
    return vec
