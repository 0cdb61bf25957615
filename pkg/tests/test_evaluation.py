import io
import math
import random

import pytest
from hypothesis import given, strategies as st

from moviefuse import evaluation
from moviefuse.evaluation import (
    UndefinedCorrelationError,
    krcc,
    load_truth,
    plcc,
    precision_at_n,
    srocc,
)


class TestPrecision:
    def test_two_hits_in_top_five(self):
        p, h = precision_at_n([1, 2, 3, 4, 5], {2, 4, 9}, 5)
        assert (p, h) == (0.4, 2)

    def test_all_relevant(self):
        p, h = precision_at_n([1, 2, 3], {1, 2, 3, 4}, 3)
        assert (p, h) == (1.0, 3)

    def test_empty_relevant(self):
        p, h = precision_at_n([1, 2, 3], set(), 3)
        assert (p, h) == (0.0, 0)

    def test_short_list_keeps_denominator(self):
        p, h = precision_at_n([1, 2], {1, 2}, 5)
        assert h == 2
        assert p == pytest.approx(0.4)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            precision_at_n([1], {1}, 0)

    @given(
        st.lists(st.integers(0, 50), min_size=1, max_size=20, unique=True),
        st.sets(st.integers(0, 50), max_size=20),
        st.integers(1, 15),
    )
    def test_hits_equals_precision_times_n(self, recommended, relevant, N):
        p, h = precision_at_n(recommended, relevant, N)
        assert p * N == pytest.approx(h)


class TestPlcc:
    def test_perfect_linear(self):
        x = [1, 2, 3, 4]
        assert plcc(x, [2 * v + 1 for v in x]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        x = [1, 2, 3, 4]
        assert plcc(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_hand_value(self):
        assert plcc([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)

    def test_zero_variance_raises(self):
        with pytest.raises(UndefinedCorrelationError):
            plcc([1, 2, 3], [5, 5, 5])

    def test_affine_invariance(self):
        rng = random.Random(2)
        x = [rng.random() for _ in range(10)]
        y = [rng.random() for _ in range(10)]
        base = plcc(x, y)
        assert plcc([3 * v + 2 for v in x], [0.5 * w - 1 for w in y]) == pytest.approx(
            base, abs=1e-12
        )


class TestSrocc:
    def test_monotone_increasing(self):
        x = [1, 2, 3, 4, 5]
        assert srocc(x, [math.exp(v) for v in x]) == pytest.approx(1.0)

    def test_reversed(self):
        x = [1, 2, 3, 4, 5]
        assert srocc(x, x[::-1]) == pytest.approx(-1.0)

    def test_hand_value_no_ties(self):
        # d = (0, 1, 1, 0): 1 - 6*2/60
        assert srocc([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_monotone_transform_invariance(self):
        rng = random.Random(4)
        x = [rng.random() for _ in range(12)]
        y = [rng.random() for _ in range(12)]
        base = srocc(x, y)
        assert srocc(x, [math.tan(v) for v in y]) == pytest.approx(base, abs=1e-12)

    def test_ties_use_average_ranks(self):
        # hand evaluation with fractional ranks:
        # x ranks (1.5, 1.5, 3, 4); y ranks (1, 2, 3.5, 3.5)
        v = srocc([5, 5, 7, 9], [1, 2, 6, 6])
        dx = [-1.0, -1.0, 0.5, 1.5]
        dy = [-1.5, -0.5, 1.0, 1.0]
        num = sum(a * b for a, b in zip(dx, dy))
        den = math.sqrt(sum(a * a for a in dx)) * math.sqrt(sum(b * b for b in dy))
        assert v == pytest.approx(num / den, abs=1e-12)


class TestKrcc:
    def test_monotone(self):
        x = [1, 2, 3, 4]
        assert krcc(x, [v**3 for v in x]) == 1.0

    def test_hand_enumeration(self):
        assert krcc([1, 2, 3], [1, 3, 2]) == pytest.approx(1 / 3)

    def test_all_ties_zero(self):
        assert krcc([1, 2, 3], [5, 5, 5]) == 0.0

    def test_reversed(self):
        x = list(range(6))
        assert krcc(x, x[::-1]) == -1.0


class TestTruth:
    def test_load_and_union(self):
        text = "movie_id,relevant_movie_id\n1,2\n1,3\n2,1\n"
        truth = load_truth(io.StringIO(text))
        assert truth == {1: {2, 3}, 2: {1}}

    def test_self_relevance_rejected(self):
        with pytest.raises(ValueError):
            load_truth(io.StringIO("1,1\n"))


class TestSweep:
    def _model_and_truth(self):
        from test_fusion import build_model

        model = build_model()
        truth = {1: {2, 4}, 3: {5}}
        return model, truth

    def test_endpoints_reproduce_baselines(self):
        from moviefuse.fusion import FusionConfig

        model, truth = self._model_and_truth()
        rows = evaluation.weight_sweep(model, truth, [0.0, 1.0])
        ph = evaluation.evaluate(model, truth, FusionConfig(1.0, 0.0))
        ss = evaluation.evaluate(model, truth, FusionConfig(0.0, 1.0))
        assert (rows[0].hit5, rows[0].hit10) == (ph.avg_hit5, ph.avg_hit10)
        assert (rows[0].p5, rows[0].p10) == (ph.avg_p5, ph.avg_p10)
        assert (rows[1].hit5, rows[1].hit10) == (ss.avg_hit5, ss.avg_hit10)
        assert (rows[1].p5, rows[1].p10) == (ss.avg_p5, ss.avg_p10)

    def test_grid_validation(self):
        model, truth = self._model_and_truth()
        with pytest.raises(ValueError):
            evaluation.weight_sweep(model, truth, [1.5])
        with pytest.raises(ValueError):
            evaluation.weight_sweep(model, {}, [0.5])

    def test_evaluate_requires_overlap(self):
        model, _ = self._model_and_truth()
        with pytest.raises(ValueError):
            evaluation.evaluate(model, {99: {98}})


def test_correlation_block_skips_zero_tweet_movies():
    from moviefuse.sentiment import MovieSentiment

    sents = {
        1: MovieSentiment(1, 7.0, 2),
        2: MovieSentiment(2, 5.0, 1),
        3: MovieSentiment(3, 6.0, 0),
        4: MovieSentiment(4, 8.0, 4),
    }
    external = {1: 7.5, 2: 5.5, 3: 9.9, 4: 8.1}
    corr = evaluation.sentiment_rating_correlations(sents, external)
    assert corr["plcc"] == pytest.approx(
        plcc([7.0, 5.0, 8.0], [7.5, 5.5, 8.1]), abs=1e-12
    )
    assert set(corr) == {"plcc", "srocc", "krcc"}
