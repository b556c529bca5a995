import itertools

import numpy as np
import pytest

from divcast.diversity import (
    ambiguity_gap,
    extract_features,
    feature_names,
    pair_order,
    pairwise_div,
    scaled_div_block,
)
from divcast.errors import LengthMismatch

from conftest import make_matrix


class TestPairwiseDiv:
    def test_hand_value(self):
        assert pairwise_div([1, 1], [3, 3]) == 4.0

    def test_identical(self, rng):
        f = rng.normal(size=6)
        assert pairwise_div(f, f) == 0.0

    def test_single_step(self):
        assert pairwise_div([0], [2]) == 4.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            pairwise_div([1, 2], [1])


class TestScaledDivBlock:
    def test_m3_example(self):
        block = scaled_div_block([[0, 0], [1, 1], [2, 2]])
        assert np.allclose(block, [1 / 6, 2 / 3, 1 / 6], atol=1e-15)

    def test_degenerate_all_zero(self):
        block = scaled_div_block([[1, 2], [1, 2], [1, 2]])
        assert np.array_equal(block, np.zeros(3))

    def test_m2_normalizes_to_one(self, rng):
        block = scaled_div_block(rng.normal(size=(2, 5)))
        assert block.shape == (1,)
        assert block[0] == pytest.approx(1.0)

    def test_scale_invariance(self, rng):
        f = rng.normal(size=(4, 6))
        assert np.allclose(scaled_div_block(f), scaled_div_block(3.7 * f),
                           rtol=1e-12)

    def test_permutation_consistency(self, rng):
        f = rng.normal(size=(4, 5))
        base = scaled_div_block(f)
        pairs = pair_order(4)
        for perm in itertools.permutations(range(4)):
            permuted = scaled_div_block(f[list(perm)])
            for k, (i, j) in enumerate(pairs):
                a, b = sorted((perm[i], perm[j]))
                orig_k = pairs.index((a, b))
                assert permuted[k] == pytest.approx(base[orig_k], rel=1e-12)


class TestExtractFeatures:
    def test_8_method_pool_gives_56(self, rng):
        fm = make_matrix(rng.normal(size=(8, 18)))
        vec = extract_features(fm)
        assert vec.as_row().shape == (56,)
        assert vec.upper_features.sum() == pytest.approx(1.0)
        assert vec.lower_features.sum() == pytest.approx(1.0)

    def test_identical_intervals_all_zero(self):
        point = np.tile(np.arange(4.0), (8, 1))
        fm = make_matrix(point)
        vec = extract_features(fm)
        assert np.array_equal(vec.as_row(), np.zeros(56))

    def test_distinct_upper_identical_lower(self):
        point = np.array([[1.0, 1.0], [1.0, 1.0]])
        lower = np.zeros((2, 2))
        upper = np.array([[2.0, 2.0], [3.0, 3.0]])
        vec = extract_features(make_matrix(point, lower, upper))
        assert np.array_equal(vec.as_row(), [1.0, 0.0])

    def test_feature_names_layout(self):
        names = feature_names([f"m{i}" for i in range(8)])
        assert len(names) == 56
        assert names[0] == "u_1_2"
        assert names[27] == "u_7_8"
        assert names[28] == "l_1_2"
        assert names[-1] == "l_7_8"


class TestAmbiguity:
    def test_identity_random_instances(self, rng):
        for _ in range(300):
            m = int(rng.integers(2, 9))
            h = int(rng.integers(1, 19))
            f = rng.normal(0, 10, size=(m, h))
            y = rng.normal(0, 10, size=h)
            w = rng.dirichlet(np.ones(m))
            assert abs(ambiguity_gap(f, y, w)) < 1e-9

    def test_single_method_weight(self, rng):
        f = rng.normal(size=(3, 5))
        y = rng.normal(size=5)
        w = np.array([1.0, 0.0, 0.0])
        assert abs(ambiguity_gap(f, y, w)) < 1e-12
