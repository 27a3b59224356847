import numpy as np
import pytest

from ggmnet.errors import ValidationError
from ggmnet.simulate import SyntheticSpec, simulate, support_edges, support_f1, true_precision


class TestTruePrecision:
    def test_chain_support(self):
        theta = true_precision(SyntheticSpec(p=3, n=10, graph_pattern="chain"))
        assert support_edges(theta) == {(0, 1), (1, 2)}

    def test_hub_support(self):
        theta = true_precision(SyntheticSpec(p=5, n=10, graph_pattern="hub"))
        assert support_edges(theta) == {(0, j) for j in range(1, 5)}

    def test_two_block_inter_weak(self):
        spec = SyntheticSpec(p=6, n=10, graph_pattern="two_block", block_strength=0.05)
        theta = true_precision(spec)
        assert abs(theta[0, 3]) == pytest.approx(0.05 * abs(theta[0, 1]))

    def test_always_spd(self):
        for pattern in ("chain", "hub", "random", "two_block"):
            for seed in range(3):
                theta = true_precision(
                    SyntheticSpec(p=7, n=10, graph_pattern=pattern, seed=seed,
                                  edge_prob=0.5)
                )
                assert np.linalg.eigvalsh(theta)[0] > 0

    def test_invalid_spec(self):
        with pytest.raises(ValidationError):
            true_precision(SyntheticSpec(p=1, n=10))
        with pytest.raises(ValidationError):
            true_precision(SyntheticSpec(p=3, n=10, graph_pattern="ring"))


class TestSimulate:
    def test_deterministic(self):
        spec = SyntheticSpec(p=4, n=20, graph_pattern="chain", seed=9)
        a, _ = simulate(spec)
        b, _ = simulate(spec)
        np.testing.assert_array_equal(a.values, b.values)

    def test_different_seeds_differ(self):
        a, _ = simulate(SyntheticSpec(p=4, n=20, seed=1))
        b, _ = simulate(SyntheticSpec(p=4, n=20, seed=2))
        assert not np.array_equal(a.values, b.values)

    def test_empirical_covariance_converges(self):
        spec = SyntheticSpec(p=4, n=100_000, graph_pattern="chain", seed=10)
        raw, theta = simulate(spec)
        sigma_true = np.linalg.inv(theta)
        sigma_hat = np.cov(raw.values.T)
        assert np.max(np.abs(sigma_hat - sigma_true)) < 0.02


class TestSupportScores:
    def test_f1_perfect(self):
        edges = {(0, 1), (1, 2)}
        fp, fn, f1 = support_f1(edges, edges)
        assert (fp, fn, f1) == (0, 0, 1.0)

    def test_f1_partial(self):
        fp, fn, f1 = support_f1({(0, 1), (0, 2)}, {(0, 1), (1, 2)})
        assert fp == 1 and fn == 1
        assert f1 == pytest.approx(0.5)
