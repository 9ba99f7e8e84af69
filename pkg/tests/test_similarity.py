import random

import pytest
from hypothesis import given, settings, strategies as st

from bilex.dictionaries import WeightSet
from bilex.errors import ConfigError
from bilex.similarity import (ContextVector, METRICS, PartitionedVector,
                              newdice_min, similarity)

from oracles import ref_metric


def vec(values, space="s"):
    return ContextVector(dict(values), space)


def pvec(values, space="s"):
    return PartitionedVector(dict(values), space)


class TestHandValues:
    # X=(1,2), Y=(2,1) over two shared columns, cross-checked against the
    # independent dict-based evaluation in oracles.py.

    X = {"c1": 1.0, "c2": 2.0}
    Y = {"c1": 2.0, "c2": 1.0}

    @pytest.mark.parametrize("metric,expected", [
        ("dicemin", 2.0 / 3.0),
        ("cityblock", 2.0),
        ("cosine", 4.0 / 5.0),
        ("jaccardmin", 0.5),
        ("diceprod", 2.0 * 4.0 / 10.0),
        ("jaccardprod", 4.0 / (10.0 - 4.0)),
        ("lin", 1.0),
    ])
    def test_pinned(self, metric, expected):
        assert similarity(metric, vec(self.X), vec(self.Y)) == pytest.approx(
            expected, abs=1e-12)

    @pytest.mark.parametrize("metric", METRICS)
    def test_matches_reference(self, metric):
        assert similarity(metric, vec(self.X), vec(self.Y)) == ref_metric(
            metric, self.X, self.Y)


class TestEdgeCases:

    def test_dicemin_identity(self):
        x = vec({"a": 0.7, "b": 2.5})
        assert similarity("dicemin", x, x) == 1.0

    def test_dicemin_disjoint(self):
        assert similarity("dicemin", vec({"a": 1.0}), vec({"b": 1.0})) == 0.0

    def test_zero_vectors_score_zero(self):
        empty = vec({})
        for metric in METRICS:
            if metric == "cityblock":
                continue
            assert similarity(metric, empty, empty) == 0.0

    def test_cityblock_zero_vector_is_plain_sum(self):
        assert similarity("cityblock", vec({}), vec({"a": 3.0})) == 3.0

    def test_cosine_with_zero_vector(self):
        assert similarity("cosine", vec({}), vec({"a": 1.0})) == 0.0

    def test_space_mismatch_rejected(self):
        with pytest.raises(ConfigError, match="column spaces"):
            similarity("cosine", vec({"a": 1.0}, "s1"), vec({"a": 1.0}, "s2"))

    def test_unknown_metric_rejected(self):
        with pytest.raises(ConfigError, match="unknown metric"):
            similarity("euclid", vec({}), vec({}))

    def test_absent_keys_are_zero(self):
        x = vec({"a": 1.0})
        y = vec({"a": 1.0, "b": 4.0})
        assert similarity("cityblock", x, y) == 4.0


sparse_vectors = st.dictionaries(
    st.integers(min_value=0, max_value=15),
    st.floats(min_value=1e-6, max_value=1e3, allow_nan=False),
    max_size=8)


class TestMetricAxioms:

    @settings(max_examples=300, deadline=None)
    @given(sparse_vectors, sparse_vectors)
    def test_symmetry(self, xd, yd):
        for metric in METRICS:
            assert similarity(metric, vec(xd), vec(yd)) == similarity(
                metric, vec(yd), vec(xd))

    @settings(max_examples=300, deadline=None)
    @given(sparse_vectors, sparse_vectors)
    def test_bounded_metrics_stay_in_unit_interval(self, xd, yd):
        for metric in ("dicemin", "jaccardmin", "cosine", "lin"):
            value = similarity(metric, vec(xd), vec(yd))
            assert 0.0 <= value <= 1.0

    @settings(max_examples=300, deadline=None)
    @given(sparse_vectors.filter(bool))
    def test_identity_scores_one(self, xd):
        for metric in ("dicemin", "diceprod", "jaccardmin", "jaccardprod",
                       "cosine"):
            assert similarity(metric, vec(xd), vec(xd)) == pytest.approx(
                1.0, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(sparse_vectors, sparse_vectors)
    def test_jaccardmin_below_dicemin(self, xd, yd):
        jac = similarity("jaccardmin", vec(xd), vec(yd))
        dice = similarity("dicemin", vec(xd), vec(yd))
        assert jac <= dice + 1e-12

    @settings(max_examples=300, deadline=None)
    @given(sparse_vectors, sparse_vectors)
    def test_cityblock_nonnegative(self, xd, yd):
        assert similarity("cityblock", vec(xd), vec(yd)) >= 0.0


class TestNewdiceMin:

    def test_unit_weights_degenerate_to_dicemin(self):
        rng = random.Random(31)
        for trial in range(50):
            keys = [(f"D{rng.randint(1, 3)}", f"c{rng.randint(0, 9)}")
                    for _ in range(rng.randint(0, 8))]
            x = {k: rng.uniform(0.1, 4.0) for k in keys}
            y = {k: rng.uniform(0.1, 4.0)
                 for k in keys if rng.random() < 0.6}
            y.update({("D1", f"e{i}"): rng.uniform(0.1, 2.0)
                      for i in range(rng.randint(0, 3))})
            weights = WeightSet({"D1": 1.0, "D2": 1.0, "D3": 1.0})
            weighted = newdice_min(pvec(x), pvec(y), weights)
            flat = similarity("dicemin", vec(x), vec(y))
            assert weighted == pytest.approx(flat, abs=1e-12)

    def test_single_dictionary_weight_two(self):
        x = pvec({("D", "a"): 1.0, ("D", "b"): 1.0})
        weights = WeightSet({"D": 2.0})
        assert newdice_min(x, x, weights) == 2.0

    def test_disjoint_scores_zero(self):
        x = pvec({("D1", "a"): 1.0})
        y = pvec({("D1", "b"): 1.0})
        assert newdice_min(x, y, WeightSet({"D1": 9.0})) == 0.0

    def test_missing_weight_rejected(self):
        x = pvec({("D1", "a"): 1.0})
        with pytest.raises(ConfigError, match="no weight"):
            newdice_min(x, x, WeightSet({"D2": 1.0}))

    def test_matches_reference(self):
        rng = random.Random(41)
        weights = WeightSet({"D1": 0.7, "D2": 2.1})
        for trial in range(30):
            x = {(f"D{rng.randint(1, 2)}", f"c{rng.randint(0, 6)}"):
                 rng.uniform(0.1, 3.0) for _ in range(rng.randint(1, 6))}
            y = {(f"D{rng.randint(1, 2)}", f"c{rng.randint(0, 6)}"):
                 rng.uniform(0.1, 3.0) for _ in range(rng.randint(1, 6))}
            assert newdice_min(pvec(x), pvec(y), weights) == ref_metric(
                "newdicemin", x, y, weights.weights)

    def test_weight_scaling_scales_score(self):
        rng = random.Random(43)
        weights = WeightSet({"D1": 0.5, "D2": 1.5})
        for trial in range(20):
            x = {(f"D{rng.randint(1, 2)}", f"c{rng.randint(0, 5)}"):
                 rng.uniform(0.1, 3.0) for _ in range(rng.randint(1, 6))}
            y = {(f"D{rng.randint(1, 2)}", f"c{rng.randint(0, 5)}"):
                 rng.uniform(0.1, 3.0) for _ in range(rng.randint(1, 6))}
            base = newdice_min(pvec(x), pvec(y), weights)
            scaled = newdice_min(pvec(x), pvec(y), weights.scaled(3.0))
            assert scaled == pytest.approx(3.0 * base, rel=1e-12)
