import json
from pathlib import Path

import pytest

from conftest import FIXTURE, run_cli

CONFIG = FIXTURE / "config.json"


@pytest.fixture(scope="module")
def pipeline_out(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("pipeline")
    for sub in ("ingest", "sentiment", "train"):
        assert run_cli("--config", CONFIG, "--out", out, sub) == 0
    return out


def test_train_before_ingest_names_producer(tmp_path, capsys):
    code = run_cli("--config", CONFIG, "--out", tmp_path, "train")
    assert code != 0
    assert "run ingest first" in capsys.readouterr().err


def test_sentiment_before_ingest_fails(tmp_path):
    assert run_cli("--config", CONFIG, "--out", tmp_path, "sentiment") != 0


def test_recommend_happy_path(pipeline_out):
    assert (
        run_cli(
            "--config", CONFIG, "--out", pipeline_out,
            "recommend", "--movie", "451279", "--top", "5",
        )
        == 0
    )
    path = pipeline_out / "recommendations_0451279.csv"
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[1] == "rank,movie_id,title,H,G,CS"
    assert len(lines) == 2 + 5
    # stable column order, zero-padded movie ids
    first = lines[2].split(",")
    assert first[0] == "1"
    assert len(first[1]) == 7


def test_recommend_top_larger_than_catalog(pipeline_out):
    assert (
        run_cli(
            "--config", CONFIG, "--out", pipeline_out,
            "recommend", "--movie", "451279", "--top", "99",
        )
        == 0
    )
    lines = (pipeline_out / "recommendations_0451279.csv").read_text().splitlines()
    # 8 movies in the filtered fixture, source excluded
    assert len(lines) == 2 + 7


def test_sweep_grid_cardinality(pipeline_out):
    assert run_cli("--config", CONFIG, "--out", pipeline_out, "sweep") == 0
    lines = (pipeline_out / "sweep.csv").read_text().splitlines()
    assert lines[1] == "omega2,p5,p10,hit5,hit10"
    assert len(lines) == 2 + 11
    assert (pipeline_out / "sweep.png").exists()


def test_evaluate_writes_report_and_figure(pipeline_out):
    assert run_cli("--config", CONFIG, "--out", pipeline_out, "evaluate") == 0
    report = (pipeline_out / "report.csv").read_text().splitlines()
    assert report[1] == "movie_id,p5,hit5,p10,hit10"
    summary = (pipeline_out / "summary.csv").read_text()
    for key in ("proposed_avg_hit5", "ph_avg_hit5", "ss_avg_hit5"):
        assert key in summary
    assert (pipeline_out / "comparison.png").exists()


def test_artifacts_share_config_hash(pipeline_out):
    hashes = set()
    for name in ("dataset.json", "sentiment.csv", "features.csv", "weights.csv"):
        first = (pipeline_out / name).read_text().splitlines()[0]
        assert first.startswith("# config_hash=")
        hashes.add(first)
    assert len(hashes) == 1


def test_min_year_override_changes_dataset(tmp_path):
    assert run_cli("--config", CONFIG, "--out", tmp_path, "--min-year", "2016", "ingest") == 0
    body = (tmp_path / "dataset.json").read_text().split("\n", 1)[1]
    movies = json.loads(body)["movies"]
    assert all(year >= 2016 for _, year, _ in movies.values())


def test_unknown_movie_fails_cleanly(pipeline_out, capsys):
    code = run_cli(
        "--config", CONFIG, "--out", pipeline_out,
        "recommend", "--movie", "42", "--top", "3",
    )
    assert code != 0
    assert "42" in capsys.readouterr().err


def test_rerun_is_byte_identical(pipeline_out, tmp_path):
    for sub in ("ingest", "sentiment", "train"):
        assert run_cli("--config", CONFIG, "--out", tmp_path, sub) == 0
    for name in ("dataset.json", "sentiment.csv", "features.csv",
                 "cointerest.csv", "weights.csv"):
        assert (tmp_path / name).read_bytes() == (pipeline_out / name).read_bytes()
