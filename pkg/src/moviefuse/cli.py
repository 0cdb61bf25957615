"""Batch pipeline CLI.

Subcommands (each reads the prior step's artifacts from the output
directory, so steps are independently re-runnable):

  ingest     parse + join + year-filter the corpus -> dataset.json
  sentiment  per-movie sentiment ratings -> sentiment.csv
  train      feature matrix, co-interest targets, learned weights
  recommend  Top-N list for one movie -> recommendations_<id>.csv
  evaluate   precision/hit report, baseline comparison + figure
  sweep      fusion-weight sweep table + figure

Every artifact starts with a `# config_hash=` header so provenance is
checkable; identical inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import collaborative, corpus, evaluation, plots, sentiment
from .content import Attribute, FeatureMatrix, build_feature_matrix, default_schema
from .fusion import FusionConfig, RecommenderModel
from .weights import normalize_weights, solve_weights

import numpy as np


class ArtifactMissingError(FileNotFoundError):
    def __init__(self, path, producer):
        super().__init__(f"missing artifact {path}: run {producer} first")
        self.producer = producer


DEFAULTS = {
    "min_year": 2014,
    "K": 30,
    "like_threshold": 7.0,
    "metric": "cosine",
    "densify": True,
    "scale_cointerest": False,
    "omega1": 0.5,
    "omega2": 0.5,
    "D": 10.0,
    "top_n": [5, 10],
    "out_dir": "out",
}


def load_config(path: str) -> dict:
    cfg_path = Path(path)
    with open(cfg_path, encoding="utf-8") as fh:
        raw = json.load(fh)
    cfg = dict(DEFAULTS)
    cfg.update(raw)
    base = cfg_path.parent
    for key in ("ratings", "movies", "users", "metadata", "tweets", "truth"):
        if key in cfg and cfg[key] is not None:
            cfg[key] = str((base / cfg[key]).resolve())
    if "lexicon" in cfg:
        cfg["lexicon"] = {
            k: str((base / v).resolve()) for k, v in cfg["lexicon"].items()
        }
    if "out_dir" in cfg:
        cfg["out_dir"] = str((base / cfg["out_dir"]).resolve())
    return cfg


def config_hash(cfg: dict) -> str:
    # out_dir excluded so relocating the output tree keeps hashes stable
    hashed = {k: v for k, v in cfg.items() if k != "out_dir"}
    blob = json.dumps(hashed, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _write_artifact(path: Path, cfg_hash: str, body: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# config_hash={cfg_hash}\n")
        fh.write(body)


def _read_artifact(path: Path, producer: str) -> str:
    if not path.exists():
        raise ArtifactMissingError(path, producer)
    text = path.read_text(encoding="utf-8")
    first, _, rest = text.partition("\n")
    if not first.startswith("# config_hash="):
        raise ValueError(f"{path} missing config_hash header")
    return rest


def _fmt(x: float) -> str:
    return repr(float(x))


# --- subcommands ----------------------------------------------------------

def cmd_ingest(cfg: dict, out: Path) -> None:
    with open(cfg["ratings"], encoding="utf-8") as fh:
        ratings = corpus.parse_ratings(fh)
    with open(cfg["movies"], encoding="utf-8") as fh:
        movies = corpus.parse_movies(fh)
    with open(cfg["users"], encoding="utf-8") as fh:
        users = corpus.parse_users(fh)
    with open(cfg["metadata"], encoding="utf-8") as fh:
        meta = corpus.load_metadata(fh)
    tweets = []
    if cfg.get("tweets"):
        with open(cfg["tweets"], encoding="utf-8") as fh:
            tweets = corpus.parse_tweets(fh)
    dataset = corpus.build_dataset(ratings, movies, users, meta.records, tweets)
    dataset = corpus.filter_by_year(dataset, int(cfg["min_year"]))
    _write_artifact(
        out / "dataset.json", config_hash(cfg), corpus.dataset_to_json(dataset) + "\n"
    )
    print(
        f"ingest: {len(dataset.ratings)} ratings, {len(dataset.movies)} movies, "
        f"{meta.dropped} metadata records dropped, {meta.duplicates} duplicates"
    )


def _load_dataset(out: Path) -> corpus.Dataset:
    return corpus.dataset_from_json(_read_artifact(out / "dataset.json", "ingest"))


def cmd_sentiment(cfg: dict, out: Path) -> None:
    dataset = _load_dataset(out)
    lex_cfg = cfg["lexicon"]
    lexicon = sentiment.load_lexicon(
        lex_cfg["valence"], lex_cfg["boosters"], lex_cfg["negators"], lex_cfg["stopwords"]
    )
    results = sentiment.score_dataset(dataset, lexicon)
    lines = ["movie_id,sentiment_rating,tweet_count"]
    for movie_id in sorted(results):
        ms = results[movie_id]
        lines.append(f"{movie_id:07d},{_fmt(ms.sentiment_rating)},{ms.tweet_count}")
    _write_artifact(out / "sentiment.csv", config_hash(cfg), "\n".join(lines) + "\n")
    print(f"sentiment: scored {len(results)} movies")


def _load_sentiments(out: Path) -> dict[int, sentiment.MovieSentiment]:
    body = _read_artifact(out / "sentiment.csv", "sentiment")
    results = {}
    for line in body.splitlines()[1:]:
        mid, rating, count = line.split(",")
        results[int(mid)] = sentiment.MovieSentiment(int(mid), float(rating), int(count))
    return results


def cmd_train(cfg: dict, out: Path) -> None:
    dataset = _load_dataset(out)
    movie_ids = dataset.movie_ids()
    matrix = collaborative.UserItemMatrix(dataset.ratings, movie_ids)
    if cfg["densify"]:
        matrix = collaborative.densify(
            matrix, K=int(cfg["K"]), metric=cfg["metric"]
        )
    s_vec = collaborative.co_interest(matrix, float(cfg["like_threshold"])).to_vector()
    if cfg["scale_cointerest"] and s_vec.max() > 0:
        s_vec = s_vec / s_vec.max()
    features = build_feature_matrix(movie_ids, dataset.metadata)
    raw = solve_weights(features.values, s_vec)
    norm = normalize_weights(raw)

    cfg_hash = config_hash(cfg)
    names = [a.name for a in features.schema]
    lines = ["i,j," + ",".join(names)]
    for col, id_i, id_j in features.iter_pairs():
        vals = ",".join(_fmt(v) for v in features.values[:, col])
        lines.append(f"{id_i:07d},{id_j:07d},{vals}")
    _write_artifact(out / "features.csv", cfg_hash, "\n".join(lines) + "\n")

    lines = ["i,j,S"]
    for col, id_i, id_j in features.iter_pairs():
        lines.append(f"{id_i:07d},{id_j:07d},{_fmt(s_vec[col])}")
    _write_artifact(out / "cointerest.csv", cfg_hash, "\n".join(lines) + "\n")

    lines = ["attribute_name,raw_weight,normalized_weight"]
    for name, r, n in zip(names, raw.q, norm.q):
        lines.append(f"{name},{_fmt(r)},{_fmt(n)}")
    _write_artifact(out / "weights.csv", cfg_hash, "\n".join(lines) + "\n")
    print(f"train: {features.n_attributes} attributes, {features.n_pairs} pairs")


def _load_model(cfg: dict, out: Path) -> RecommenderModel:
    dataset = _load_dataset(out)
    feat_body = _read_artifact(out / "features.csv", "train")
    feat_lines = feat_body.splitlines()
    names = feat_lines[0].split(",")[2:]
    known = {a.name: a for a in default_schema()}
    schema = [
        known.get(n, Attribute(n, "set", lambda m: frozenset())) for n in names
    ]
    ids = sorted(
        {int(line.split(",")[0]) for line in feat_lines[1:]}
        | {int(line.split(",")[1]) for line in feat_lines[1:]}
    )
    M = len(ids)
    values = np.zeros((len(names), M * (M - 1) // 2))
    for col, line in enumerate(feat_lines[1:]):
        values[:, col] = [float(v) for v in line.split(",")[2:]]
    features = FeatureMatrix(ids, schema, values)

    w_body = _read_artifact(out / "weights.csv", "train")
    norm_q = [float(line.split(",")[2]) for line in w_body.splitlines()[1:]]
    from .weights import WeightVector

    weights = WeightVector(tuple(norm_q), normalized=True)
    sentiments = _load_sentiments(out)
    titles = {mid: m.title for mid, m in dataset.movies.items()}
    config = FusionConfig(float(cfg["omega1"]), float(cfg["omega2"]), float(cfg["D"]))
    return RecommenderModel(features, weights, sentiments, titles, config)


def cmd_recommend(cfg: dict, out: Path, movie: int, top: int) -> None:
    model = _load_model(cfg, out)
    recs = model.recommend(movie, top)
    lines = ["rank,movie_id,title,H,G,CS"]
    for rank, r in enumerate(recs.entries, start=1):
        title = r.title.replace(",", " ")
        lines.append(
            f"{rank},{r.movie_id:07d},{title},{_fmt(r.hybrid)},"
            f"{_fmt(r.sentiment_sim)},{_fmt(r.combined)}"
        )
    path = out / f"recommendations_{movie:07d}.csv"
    _write_artifact(path, config_hash(cfg), "\n".join(lines) + "\n")
    print(f"recommend: wrote {len(recs.entries)} rows to {path}")


def _load_truth(cfg: dict) -> dict[int, set[int]]:
    truth_path = cfg.get("truth")
    if not truth_path or not Path(truth_path).exists():
        raise ArtifactMissingError(truth_path or "<truth>", "ingest (provide truth.csv)")
    with open(truth_path, encoding="utf-8") as fh:
        return evaluation.load_truth(fh)


def cmd_evaluate(cfg: dict, out: Path) -> None:
    model = _load_model(cfg, out)
    truth = _load_truth(cfg)
    dataset = _load_dataset(out)
    cfg_hash = config_hash(cfg)

    proposed = evaluation.evaluate(model, truth)
    ph = evaluation.evaluate(model, truth, FusionConfig(1.0, 0.0, model.config.D))
    ss = evaluation.evaluate(model, truth, FusionConfig(0.0, 1.0, model.config.D))

    lines = ["movie_id,p5,hit5,p10,hit10"]
    for row in proposed.per_movie:
        lines.append(
            f"{row.movie_id:07d},{_fmt(row.p5)},{row.hit5},{_fmt(row.p10)},{row.hit10}"
        )
    _write_artifact(out / "report.csv", cfg_hash, "\n".join(lines) + "\n")

    external = {
        mid: m.external_rating
        for mid, m in dataset.metadata.items()
        if m.external_rating is not None
    }
    corr = evaluation.sentiment_rating_correlations(model.sentiments, external)

    lines = ["metric,value"]
    for name, report in (("proposed", proposed), ("ph", ph), ("ss", ss)):
        lines.append(f"{name}_avg_p5,{_fmt(report.avg_p5)}")
        lines.append(f"{name}_avg_hit5,{_fmt(report.avg_hit5)}")
        lines.append(f"{name}_avg_p10,{_fmt(report.avg_p10)}")
        lines.append(f"{name}_avg_hit10,{_fmt(report.avg_hit10)}")
    for name in ("plcc", "srocc", "krcc"):
        if name in corr:
            lines.append(f"{name},{_fmt(corr[name])}")
    _write_artifact(out / "summary.csv", cfg_hash, "\n".join(lines) + "\n")

    plots.comparison_figure(
        {
            "SS": (ss.avg_hit5, ss.avg_hit10),
            "PH": (ph.avg_hit5, ph.avg_hit10),
            "proposed": (proposed.avg_hit5, proposed.avg_hit10),
        },
        out / "comparison.png",
    )
    print(
        f"evaluate: proposed hit@5={proposed.avg_hit5:.3f} hit@10={proposed.avg_hit10:.3f} "
        f"(PH {ph.avg_hit5:.3f}/{ph.avg_hit10:.3f}, SS {ss.avg_hit5:.3f}/{ss.avg_hit10:.3f})"
    )


def cmd_sweep(cfg: dict, out: Path, grid: list[float]) -> None:
    model = _load_model(cfg, out)
    truth = _load_truth(cfg)
    rows = evaluation.weight_sweep(model, truth, grid)
    lines = ["omega2,p5,p10,hit5,hit10"]
    for r in rows:
        lines.append(
            f"{_fmt(r.omega2)},{_fmt(r.p5)},{_fmt(r.p10)},{_fmt(r.hit5)},{_fmt(r.hit10)}"
        )
    _write_artifact(out / "sweep.csv", config_hash(cfg), "\n".join(lines) + "\n")
    plots.sweep_figure(rows, out / "sweep.png")
    print(f"sweep: {len(rows)} grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moviefuse",
        description="Hybrid movie recommender with tweet sentiment fusion",
    )
    parser.add_argument("--config", required=True, help="path to config JSON")
    parser.add_argument("--out", help="output directory override")
    parser.add_argument("--min-year", type=int, help="release-year filter override")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("ingest")
    sub.add_parser("sentiment")
    sub.add_parser("train")
    rec = sub.add_parser("recommend")
    rec.add_argument("--movie", type=int, required=True)
    rec.add_argument("--top", type=int, default=10)
    sub.add_parser("evaluate")
    sweep = sub.add_parser("sweep")
    sweep.add_argument(
        "--grid", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
        help="comma-separated omega2 values",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.min_year is not None:
            cfg["min_year"] = args.min_year
        if args.out is not None:
            cfg["out_dir"] = str(Path(args.out).resolve())
        out = Path(cfg["out_dir"])
        if args.subcommand == "ingest":
            cmd_ingest(cfg, out)
        elif args.subcommand == "sentiment":
            cmd_sentiment(cfg, out)
        elif args.subcommand == "train":
            cmd_train(cfg, out)
        elif args.subcommand == "recommend":
            cmd_recommend(cfg, out, args.movie, args.top)
        elif args.subcommand == "evaluate":
            cmd_evaluate(cfg, out)
        elif args.subcommand == "sweep":
            grid = [float(v) for v in args.grid.split(",") if v.strip()]
            cmd_sweep(cfg, out, grid)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
