"""Tweet preprocessing and lexicon/rule-based sentiment scoring.

Each tweet gets four components (positive, neutral, negative, compound);
per-movie compounds are averaged and mapped to a 2-10 rating via
6 + 4*x.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

# Rule constants (canonical published values for this lexicon method).
NEGATION_FACTOR = -0.74
NEGATION_WINDOW = 3
CAPS_BOOST = 0.733
EXCLAMATION_BOOST = 0.292
NORMALIZATION_ALPHA = 15.0

NEUTRAL_RATING = 6.0

_SPECIAL_CHARS = re.compile(r"[!@#$%_]")
_URL = re.compile(r"^(https?://|www\.)", re.IGNORECASE)
_REPEAT = re.compile(r"(.)\1{2,}")
_EDGE_PUNCT = re.compile(r"^[^\w]+|[^\w]+$")


@dataclass(frozen=True)
class Lexicon:
    valence: dict[str, float]
    boosters: dict[str, float]
    negators: frozenset[str]
    stopwords: frozenset[str]

    def __post_init__(self):
        for tok, v in self.valence.items():
            if not -4.0 <= v <= 4.0:
                raise ValueError(f"valence for {tok!r} outside [-4,4]: {v}")
        for tok, inc in self.boosters.items():
            if not -1.0 <= inc <= 1.0:
                raise ValueError(f"booster increment for {tok!r} outside [-1,1]")
        overlap = self.negators & self.stopwords
        if overlap:
            raise ValueError(f"negators overlap stopwords: {sorted(overlap)}")

    def lookup(self, token: str) -> float | None:
        """Valence lookup with light lemmatization: strip s/ed/ing when the
        stripped form is known and the surface form is not."""
        if token in self.valence:
            return self.valence[token]
        for suffix in ("s", "ed", "ing"):
            if token.endswith(suffix):
                stem = token[: -len(suffix)]
                if stem and stem in self.valence:
                    return self.valence[stem]
        return None


@dataclass(frozen=True)
class ProcessedTweet:
    tokens: tuple[str, ...]
    had_exclamation: bool
    allcaps_flags: tuple[bool, ...]


@dataclass(frozen=True)
class SentimentScores:
    positive: float
    neutral: float
    negative: float
    compound: float


@dataclass(frozen=True)
class MovieSentiment:
    movie_id: int
    sentiment_rating: float
    tweet_count: int

    @property
    def no_tweets(self) -> bool:
        return self.tweet_count == 0


def load_lexicon(
    valence_path, boosters_path, negators_path, stopwords_path
) -> Lexicon:
    valence = {}
    for line in Path(valence_path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        token, value = line.split("\t")
        valence[token.strip().lower()] = float(value)
    boosters = {}
    for line in Path(boosters_path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        token, value = line.split("\t")
        boosters[token.strip().lower()] = float(value)
    negators = frozenset(
        t.strip().lower()
        for t in Path(negators_path).read_text(encoding="utf-8").splitlines()
        if t.strip()
    )
    stopwords = frozenset(
        t.strip().lower()
        for t in Path(stopwords_path).read_text(encoding="utf-8").splitlines()
        if t.strip()
    )
    return Lexicon(valence, boosters, negators, stopwords)


def preprocess(text: str, lexicon: Lexicon) -> ProcessedTweet:
    """Strip URLs, special characters and stopwords, squeeze character runs,
    lowercase; exclamation presence and per-token all-caps are recorded
    before the information is destroyed."""
    had_exclamation = "!" in text
    tokens: list[str] = []
    allcaps: list[bool] = []
    for raw in text.split():
        if _URL.match(raw):
            continue
        token = _SPECIAL_CHARS.sub("", raw)
        token = _EDGE_PUNCT.sub("", token)
        if not token:
            continue
        is_caps = token.isupper() and any(c.isalpha() for c in token)
        token = _REPEAT.sub(r"\1\1", token.lower())
        if token in lexicon.stopwords:
            continue
        tokens.append(token)
        allcaps.append(is_caps)
    return ProcessedTweet(tuple(tokens), had_exclamation, tuple(allcaps))


def _sign(x: float) -> float:
    return math.copysign(1.0, x) if x != 0 else 0.0


def score(tweet: ProcessedTweet, lexicon: Lexicon) -> SentimentScores:
    """Rule-adjusted valence sum normalized to [-1,1].

    Per sentiment-bearing token, in order: all-caps emphasis, preceding
    booster, then negation within the preceding window.
    """
    sigma = 0.0
    pos_mass = 0.0
    neg_mass = 0.0
    neu_mass = 0.0
    tokens = tweet.tokens
    for idx, token in enumerate(tokens):
        valence = lexicon.lookup(token)
        if valence is None or valence == 0.0:
            if token not in lexicon.boosters and token not in lexicon.negators:
                neu_mass += 1.0
            continue
        adjusted = valence
        if tweet.allcaps_flags[idx]:
            adjusted += CAPS_BOOST * _sign(adjusted)
        if idx > 0 and tokens[idx - 1] in lexicon.boosters:
            adjusted += lexicon.boosters[tokens[idx - 1]] * _sign(adjusted)
        window = tokens[max(0, idx - NEGATION_WINDOW) : idx]
        if any(t in lexicon.negators for t in window):
            adjusted *= NEGATION_FACTOR
        sigma += adjusted
        if adjusted > 0:
            pos_mass += adjusted
        else:
            neg_mass += -adjusted
    if tweet.had_exclamation and sigma != 0.0:
        sigma += EXCLAMATION_BOOST * _sign(sigma)
    compound = sigma / math.sqrt(sigma * sigma + NORMALIZATION_ALPHA)
    total = pos_mass + neg_mass + neu_mass
    if total == 0.0:
        return SentimentScores(0.0, 1.0, 0.0, 0.0)
    return SentimentScores(
        positive=pos_mass / total,
        neutral=neu_mass / total,
        negative=neg_mass / total,
        compound=compound,
    )


def compound_to_rating(x: float) -> float:
    """Map a compound score in [-1,1] to the 2-10 rating scale."""
    return (1.0 + (1.0 + x) * 2.0) * 2.0


def movie_sentiment(movie_id: int, scores: list[SentimentScores]) -> MovieSentiment:
    """Aggregate per-tweet compounds by arithmetic mean; no tweets maps to
    the neutral rating (x = 0), distinguishable via tweet_count."""
    if not scores:
        return MovieSentiment(movie_id, NEUTRAL_RATING, 0)
    x = sum(s.compound for s in scores) / len(scores)
    return MovieSentiment(movie_id, compound_to_rating(x), len(scores))


def score_dataset(dataset, lexicon: Lexicon) -> dict[int, MovieSentiment]:
    """Per-movie sentiment for every movie in the dataset."""
    out = {}
    for movie_id in dataset.movie_ids():
        tweets = dataset.tweets.get(movie_id, ())
        scores = [score(preprocess(t.text, lexicon), lexicon) for t in tweets]
        out[movie_id] = movie_sentiment(movie_id, scores)
    return out
