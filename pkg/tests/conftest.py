import json
from pathlib import Path

import pytest

from moviefuse import corpus, sentiment

FIXTURE = Path(__file__).parent / "data" / "fixture"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE


@pytest.fixture(scope="session")
def lexicon() -> sentiment.Lexicon:
    return sentiment.load_lexicon(
        FIXTURE / "lexicon_valence.tsv",
        FIXTURE / "lexicon_boosters.tsv",
        FIXTURE / "lexicon_negators.txt",
        FIXTURE / "lexicon_stopwords.txt",
    )


@pytest.fixture(scope="session")
def fixture_dataset() -> corpus.Dataset:
    with open(FIXTURE / "ratings.dat") as fh:
        ratings = corpus.parse_ratings(fh)
    with open(FIXTURE / "movies.dat") as fh:
        movies = corpus.parse_movies(fh)
    with open(FIXTURE / "users.dat") as fh:
        users = corpus.parse_users(fh)
    with open(FIXTURE / "metadata.json") as fh:
        meta = corpus.load_metadata(fh)
    with open(FIXTURE / "tweets.tsv") as fh:
        tweets = corpus.parse_tweets(fh)
    joined = corpus.build_dataset(ratings, movies, users, meta.records, tweets)
    return corpus.filter_by_year(joined, 2014)


def run_cli(*args) -> int:
    from moviefuse.cli import main

    return main([str(a) for a in args])


@pytest.fixture()
def fixture_config(fixture_dir) -> Path:
    return fixture_dir / "config.json"
