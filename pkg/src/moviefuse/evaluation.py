"""Top-N evaluation: precision/hit counts against reference relevant
sets, rank correlations, the fusion-weight sweep and baseline
comparison."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .fusion import FusionConfig, RecommenderModel


class UndefinedCorrelationError(ValueError):
    pass


def precision_at_n(recommended, relevant, N: int) -> tuple[float, int]:
    """Hits in the top-N prefix and hits/N. The denominator stays N even
    when fewer than N recommendations exist."""
    if N < 1:
        raise ValueError("N must be >= 1")
    top = list(recommended)[:N]
    hits = sum(1 for m in top if m in relevant)
    return hits / N, hits


def plcc(x, y) -> float:
    """Pearson linear correlation coefficient."""
    x, y = list(x), list(y)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need two equal-length sequences of length >= 2")
    mx = sum(x) / len(x)
    my = sum(y) / len(y)
    dx = [a - mx for a in x]
    dy = [b - my for b in y]
    den = math.sqrt(sum(a * a for a in dx)) * math.sqrt(sum(b * b for b in dy))
    if den == 0.0:
        raise UndefinedCorrelationError("zero variance")
    r = sum(a * b for a, b in zip(dx, dy)) / den
    return max(-1.0, min(1.0, r))


def _average_ranks(values) -> list[float]:
    """Fractional ranks: tied values share the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def srocc(x, y) -> float:
    """Spearman rank correlation: Pearson on average (fractional) ranks.

    Ranks are half-integers, so the computation runs in exact rational
    arithmetic; perfectly monotone (or reversed) data yields exactly 1.0
    (or -1.0).
    """
    from fractions import Fraction

    x, y = list(x), list(y)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need two equal-length sequences of length >= 2")
    rx = [Fraction(r).limit_denominator(2) for r in _average_ranks(x)]
    ry = [Fraction(r).limit_denominator(2) for r in _average_ranks(y)]
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    dx = [a - mx for a in rx]
    dy = [b - my for b in ry]
    num = sum(a * b for a, b in zip(dx, dy))
    sx2 = sum(a * a for a in dx)
    sy2 = sum(b * b for b in dy)
    if sx2 == 0 or sy2 == 0:
        raise UndefinedCorrelationError("zero rank variance")
    if num * num == sx2 * sy2:
        return 1.0 if num > 0 else -1.0
    r = float(num) / math.sqrt(float(sx2) * float(sy2))
    return max(-1.0, min(1.0, r))


def krcc(x, y) -> float:
    """Kendall tau-a: 2(Nc - Nd) / (N(N-1)); ties count toward neither."""
    x, y = list(x), list(y)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need two equal-length sequences of length >= 2")
    n = len(x)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            s = (x[i] - x[j]) * (y[i] - y[j])
            if s > 0:
                concordant += 1
            elif s < 0:
                discordant += 1
    return 2.0 * (concordant - discordant) / (n * (n - 1))


def load_truth(stream) -> dict[int, set[int]]:
    """truth.csv rows movie_id,relevant_movie_id; self-relevance rejected."""
    truth: dict[int, set[int]] = {}
    reader = csv.reader(stream)
    for row in reader:
        if not row or row[0].startswith("#") or row[0] == "movie_id":
            continue
        movie_id, relevant_id = int(row[0]), int(row[1])
        if movie_id == relevant_id:
            raise ValueError(f"movie {movie_id} marked relevant to itself")
        truth.setdefault(movie_id, set()).add(relevant_id)
    return truth


@dataclass
class MovieEval:
    movie_id: int
    p5: float
    hit5: int
    p10: float
    hit10: int


@dataclass
class EvalReport:
    per_movie: list[MovieEval]
    avg_p5: float
    avg_hit5: float
    avg_p10: float
    avg_hit10: float
    correlations: dict[str, float] = field(default_factory=dict)


def evaluate(
    model: RecommenderModel,
    truth: dict[int, set[int]],
    config: FusionConfig | None = None,
) -> EvalReport:
    """Precision@5/@10 and hit counts per ground-truth movie, averaged,
    plus correlations between sentiment ratings and external ratings."""
    if not truth:
        raise ValueError("empty ground truth")
    rows = []
    known = set(model.movie_ids)
    for movie_id in sorted(truth):
        if movie_id not in known:
            continue
        recs = model.recommend(movie_id, 10, config)
        ranked = [r.movie_id for r in recs.entries]
        p5, h5 = precision_at_n(ranked, truth[movie_id], 5)
        p10, h10 = precision_at_n(ranked, truth[movie_id], 10)
        rows.append(MovieEval(movie_id, p5, h5, p10, h10))
    if not rows:
        raise ValueError("no ground-truth movie present in the model")
    n = len(rows)
    report = EvalReport(
        per_movie=rows,
        avg_p5=sum(r.p5 for r in rows) / n,
        avg_hit5=sum(r.hit5 for r in rows) / n,
        avg_p10=sum(r.p10 for r in rows) / n,
        avg_hit10=sum(r.hit10 for r in rows) / n,
    )
    return report


def sentiment_rating_correlations(
    sentiments, external_ratings: dict[int, float]
) -> dict[str, float]:
    """PLCC/SROCC/KRCC between per-movie sentiment ratings and an
    external rating source, over movies present in both with tweets."""
    xs, ys = [], []
    for movie_id, ms in sorted(sentiments.items()):
        ext = external_ratings.get(movie_id)
        if ext is None or ms.tweet_count == 0:
            continue
        xs.append(ms.sentiment_rating)
        ys.append(ext)
    if len(xs) < 2:
        return {}
    try:
        return {"plcc": plcc(xs, ys), "srocc": srocc(xs, ys), "krcc": krcc(xs, ys)}
    except UndefinedCorrelationError:
        return {}


@dataclass
class SweepRow:
    omega2: float
    p5: float
    p10: float
    hit5: float
    hit10: float


def weight_sweep(
    model: RecommenderModel, truth: dict[int, set[int]], grid
) -> list[SweepRow]:
    """Average Top-N metrics for each omega2 on the grid (omega1 = 1 -
    omega2); endpoints reproduce the pure-hybrid and pure-sentiment
    baselines through the same code path."""
    if not truth:
        raise ValueError("empty ground truth")
    rows = []
    for omega2 in grid:
        if not 0.0 <= omega2 <= 1.0:
            raise ValueError(f"grid value {omega2} outside [0,1]")
        cfg = FusionConfig(omega1=1.0 - omega2, omega2=omega2, D=model.config.D)
        report = evaluate(model, truth, cfg)
        rows.append(
            SweepRow(omega2, report.avg_p5, report.avg_p10, report.avg_hit5, report.avg_hit10)
        )
    return rows
