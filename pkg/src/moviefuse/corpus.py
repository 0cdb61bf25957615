"""Ingestion of the ratings/movies/users/metadata/tweets corpus.

File formats:
  ratings.dat   user_id::movie_id::rating::timestamp
  movies.dat    movie_id::Title (YYYY)::Genre|Genre|...
  users.dat     user_id::twitter_id
  metadata.json array of per-movie attribute records (case-insensitive keys)
  tweets.tsv    movie_id<TAB>raw tweet text
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import IO, Iterable


class ParseError(ValueError):
    """Malformed input line; carries line number and offending content."""

    def __init__(self, line_no, content, reason):
        super().__init__(f"line {line_no}: {reason}: {content!r}")
        self.line_no = line_no
        self.content = content
        self.reason = reason


class ValidationError(ValueError):
    """Well-formed line with an out-of-range or inconsistent value."""

    def __init__(self, line_no, content, reason):
        super().__init__(f"line {line_no}: {reason}: {content!r}")
        self.line_no = line_no
        self.content = content
        self.reason = reason


@dataclass(frozen=True)
class RatingRecord:
    user_id: int
    movie_id: int
    rating: int
    timestamp: int

    def format_line(self) -> str:
        # movie ids are zero-padded to 7 digits on output
        return f"{self.user_id}::{self.movie_id:07d}::{self.rating}::{self.timestamp}"


@dataclass(frozen=True)
class MovieRecord:
    movie_id: int
    title: str
    release_year: int
    genres: frozenset[str]

    def format_line(self) -> str:
        genres = "|".join(sorted(self.genres))
        return f"{self.movie_id:07d}::{self.title} ({self.release_year})::{genres}"


@dataclass(frozen=True)
class UserRecord:
    user_id: int
    twitter_id: str


@dataclass(frozen=True)
class MovieMetadata:
    movie_id: int
    title: str = ""
    runtime_minutes: int | None = None
    genres: frozenset[str] = frozenset()
    director: frozenset[str] = frozenset()
    writer: frozenset[str] = frozenset()
    actors: frozenset[str] = frozenset()
    external_rating: float | None = None
    production_companies: frozenset[str] = frozenset()
    popularity: float | None = None
    language: str = ""
    production_countries: frozenset[str] = frozenset()
    budget: int | None = None

    def has_substance(self) -> bool:
        """Retention rule: keep only if any of genres/director/actors non-empty."""
        return bool(self.genres or self.director or self.actors)


@dataclass(frozen=True)
class TweetRecord:
    movie_id: int
    text: str


@dataclass(frozen=True)
class Dataset:
    """Joined, immutable corpus; safe for concurrent reads."""

    ratings: tuple[RatingRecord, ...]
    movies: dict[int, MovieRecord]
    users: dict[int, UserRecord]
    metadata: dict[int, MovieMetadata]
    tweets: dict[int, tuple[TweetRecord, ...]]

    def movie_ids(self) -> list[int]:
        return sorted(self.movies)


def _lines(stream: Iterable[str] | IO[str]):
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if line.strip():
            yield line_no, line


def parse_ratings(stream) -> list[RatingRecord]:
    records = []
    for line_no, line in _lines(stream):
        parts = line.split("::")
        if len(parts) != 4:
            raise ParseError(line_no, line, "expected 4 '::'-separated fields")
        try:
            user_id, movie_id, rating, ts = (int(p) for p in parts)
        except ValueError:
            raise ParseError(line_no, line, "non-integer field") from None
        if not 0 <= rating <= 10:
            raise ValidationError(line_no, line, f"rating {rating} outside [0,10]")
        if user_id <= 0:
            raise ValidationError(line_no, line, f"user_id {user_id} must be positive")
        if movie_id < 0:
            raise ValidationError(line_no, line, f"movie_id {movie_id} negative")
        records.append(RatingRecord(user_id, movie_id, rating, ts))
    return records


_TITLE_YEAR = re.compile(r"^(?P<title>.*) \((?P<year>\d{4})\)$")


def parse_movies(stream) -> list[MovieRecord]:
    records = []
    for line_no, line in _lines(stream):
        parts = line.split("::")
        if len(parts) != 3:
            raise ParseError(line_no, line, "expected 3 '::'-separated fields")
        try:
            movie_id = int(parts[0])
        except ValueError:
            raise ParseError(line_no, line, "non-integer movie id") from None
        m = _TITLE_YEAR.match(parts[1])
        if m is None:
            raise ParseError(line_no, line, "title missing trailing (YYYY)")
        year = int(m.group("year"))
        if not 1800 <= year <= 2100:
            raise ValidationError(line_no, line, f"implausible year {year}")
        genres = frozenset(g for g in parts[2].split("|") if g)
        records.append(MovieRecord(movie_id, m.group("title"), year, genres))
    return records


def parse_users(stream) -> list[UserRecord]:
    records = []
    seen = set()
    for line_no, line in _lines(stream):
        parts = line.split("::")
        if len(parts) != 2:
            raise ParseError(line_no, line, "expected 2 '::'-separated fields")
        try:
            user_id = int(parts[0])
        except ValueError:
            raise ParseError(line_no, line, "non-integer user id") from None
        if user_id in seen:
            raise ValidationError(line_no, line, f"duplicate user_id {user_id}")
        seen.add(user_id)
        records.append(UserRecord(user_id, parts[1]))
    return records


def parse_tweets(stream) -> list[TweetRecord]:
    records = []
    for line_no, line in _lines(stream):
        parts = line.split("\t", 1)
        if len(parts) != 2 or not parts[1].strip():
            raise ParseError(line_no, line, "expected movie_id<TAB>text")
        try:
            movie_id = int(parts[0])
        except ValueError:
            raise ParseError(line_no, line, "non-integer movie id") from None
        records.append(TweetRecord(movie_id, parts[1]))
    return records


def _as_set(value) -> frozenset[str]:
    if value is None:
        return frozenset()
    if isinstance(value, str):
        return frozenset(v.strip() for v in value.split(",") if v.strip())
    return frozenset(str(v).strip() for v in value if str(v).strip())


def _as_optional_number(value, cast):
    if value is None or value == "":
        return None
    if isinstance(value, str):
        # tolerate suffixes like "141 min"
        m = re.match(r"^\s*([0-9]+(?:\.[0-9]+)?)", value)
        if m is None:
            return None
        value = m.group(1)
    return cast(float(value))


_METADATA_KEYS = {
    "movieid": "movie_id",
    "movie_id": "movie_id",
    "title": "title",
    "runtime": "runtime_minutes",
    "runtime_minutes": "runtime_minutes",
    "genre": "genres",
    "genres": "genres",
    "director": "director",
    "writer": "writer",
    "actors": "actors",
    "rating": "external_rating",
    "external_rating": "external_rating",
    "production companies": "production_companies",
    "production_companies": "production_companies",
    "popularity": "popularity",
    "language": "language",
    "production countries": "production_countries",
    "production_countries": "production_countries",
    "budget": "budget",
}


@dataclass
class MetadataLoad:
    records: dict[int, MovieMetadata]
    dropped: int = 0
    duplicates: int = 0


def load_metadata(stream) -> MetadataLoad:
    """Load the metadata file; drops records failing the retention rule,
    last write wins on duplicate ids."""
    raw = json.load(stream)
    result = MetadataLoad(records={})
    for entry in raw:
        fields: dict = {}
        for key, value in entry.items():
            name = _METADATA_KEYS.get(key.strip().lower())
            if name is None:
                continue
            fields[name] = value
        movie_id = int(fields.pop("movie_id"))
        meta = MovieMetadata(
            movie_id=movie_id,
            title=str(fields.get("title", "")),
            runtime_minutes=_as_optional_number(fields.get("runtime_minutes"), int),
            genres=_as_set(fields.get("genres")),
            director=_as_set(fields.get("director")),
            writer=_as_set(fields.get("writer")),
            actors=_as_set(fields.get("actors")),
            external_rating=_as_optional_number(fields.get("external_rating"), float),
            production_companies=_as_set(fields.get("production_companies")),
            popularity=_as_optional_number(fields.get("popularity"), float),
            language=str(fields.get("language", "")),
            production_countries=_as_set(fields.get("production_countries")),
            budget=_as_optional_number(fields.get("budget"), int),
        )
        if not meta.has_substance():
            result.dropped += 1
            continue
        if movie_id in result.records:
            result.duplicates += 1
        result.records[movie_id] = meta
    return result


def _dedupe_ratings(ratings: Iterable[RatingRecord]) -> list[RatingRecord]:
    """Keep one rating per (user, movie): the most recent by timestamp,
    later file position winning ties."""
    best: dict[tuple[int, int], RatingRecord] = {}
    for rec in ratings:
        key = (rec.user_id, rec.movie_id)
        prev = best.get(key)
        if prev is None or rec.timestamp >= prev.timestamp:
            best[key] = rec
    return list(best.values())


def build_dataset(
    ratings: Iterable[RatingRecord],
    movies: Iterable[MovieRecord],
    users: Iterable[UserRecord],
    metadata: dict[int, MovieMetadata],
    tweets: Iterable[TweetRecord] = (),
) -> Dataset:
    """Join components: movies without retained metadata are discarded and
    ratings/tweets restricted to the surviving movies."""
    movie_map = {m.movie_id: m for m in movies}
    kept_movies = {mid: m for mid, m in movie_map.items() if mid in metadata}
    kept_meta = {mid: metadata[mid] for mid in kept_movies}
    kept_ratings = tuple(
        r for r in _dedupe_ratings(ratings) if r.movie_id in kept_movies
    )
    tweet_map: dict[int, list[TweetRecord]] = {}
    for t in tweets:
        if t.movie_id in kept_movies:
            tweet_map.setdefault(t.movie_id, []).append(t)
    return Dataset(
        ratings=kept_ratings,
        movies=kept_movies,
        users={u.user_id: u for u in users},
        metadata=kept_meta,
        tweets={mid: tuple(ts) for mid, ts in tweet_map.items()},
    )


def filter_by_year(dataset: Dataset, min_year: int) -> Dataset:
    """Keep movies released in or after min_year, plus their ratings,
    metadata and tweets. The user map is untouched."""
    kept = {
        mid: m for mid, m in dataset.movies.items() if m.release_year >= min_year
    }
    return Dataset(
        ratings=tuple(r for r in dataset.ratings if r.movie_id in kept),
        movies=kept,
        users=dict(dataset.users),
        metadata={mid: m for mid, m in dataset.metadata.items() if mid in kept},
        tweets={mid: t for mid, t in dataset.tweets.items() if mid in kept},
    )


# --- dataset artifact (de)serialization -----------------------------------

def dataset_to_json(dataset: Dataset) -> str:
    payload = {
        "ratings": [
            [r.user_id, r.movie_id, r.rating, r.timestamp] for r in dataset.ratings
        ],
        "movies": {
            str(mid): [m.title, m.release_year, sorted(m.genres)]
            for mid, m in sorted(dataset.movies.items())
        },
        "users": {
            str(uid): u.twitter_id for uid, u in sorted(dataset.users.items())
        },
        "metadata": {
            str(mid): {
                "title": m.title,
                "runtime_minutes": m.runtime_minutes,
                "genres": sorted(m.genres),
                "director": sorted(m.director),
                "writer": sorted(m.writer),
                "actors": sorted(m.actors),
                "external_rating": m.external_rating,
                "production_companies": sorted(m.production_companies),
                "popularity": m.popularity,
                "language": m.language,
                "production_countries": sorted(m.production_countries),
                "budget": m.budget,
            }
            for mid, m in sorted(dataset.metadata.items())
        },
        "tweets": {
            str(mid): [t.text for t in ts]
            for mid, ts in sorted(dataset.tweets.items())
        },
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def dataset_from_json(text: str) -> Dataset:
    payload = json.loads(text)
    movies = {
        int(mid): MovieRecord(int(mid), title, year, frozenset(genres))
        for mid, (title, year, genres) in payload["movies"].items()
    }
    metadata = {
        int(mid): MovieMetadata(
            movie_id=int(mid),
            title=m["title"],
            runtime_minutes=m["runtime_minutes"],
            genres=frozenset(m["genres"]),
            director=frozenset(m["director"]),
            writer=frozenset(m["writer"]),
            actors=frozenset(m["actors"]),
            external_rating=m["external_rating"],
            production_companies=frozenset(m["production_companies"]),
            popularity=m["popularity"],
            language=m["language"],
            production_countries=frozenset(m["production_countries"]),
            budget=m["budget"],
        )
        for mid, m in payload["metadata"].items()
    }
    return Dataset(
        ratings=tuple(RatingRecord(*row) for row in payload["ratings"]),
        movies=movies,
        users={
            int(uid): UserRecord(int(uid), tw)
            for uid, tw in payload["users"].items()
        },
        metadata=metadata,
        tweets={
            int(mid): tuple(TweetRecord(int(mid), text) for text in texts)
            for mid, texts in payload["tweets"].items()
        },
    )
