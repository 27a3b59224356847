import numpy as np
import pytest

import ggmnet.bootstrap as bt
from ggmnet.bootstrap import (
    BootstrapConfig,
    bootstrap_centrality,
    centrality_rank_stability,
    summarize_iterations,
)
from ggmnet.cv import CvConfig, cross_validate
from ggmnet.data import ridge_condition, sample_covariance, standardize
from ggmnet.errors import ValidationError
from ggmnet.estimator import adaptive_glasso_fit, adaptive_weights, glasso_fit
from ggmnet.netgraph import centrality_summary, precision_to_adjacency
from ggmnet.simulate import SyntheticSpec, simulate


def small_config(**kw):
    defaults = dict(B=8, seed=3, cv=CvConfig(K=3, num_lambda=5, seed=3))
    defaults.update(kw)
    return BootstrapConfig(**defaults)


def reference_centralities(raw, lam, delta=0.2):
    cov = ridge_condition(sample_covariance(standardize(raw)), 1e6)
    init = glasso_fit(cov, lam)
    fit = adaptive_glasso_fit(cov, lam, adaptive_weights(init.theta, delta))
    net = precision_to_adjacency(fit, node_labels=raw.variable_names)
    return centrality_summary(net)


class TestBootstrapCentrality:
    def test_identity_resample_matches_pipeline(self, monkeypatch):
        raw, _ = simulate(SyntheticSpec(p=5, n=40, graph_pattern="chain", seed=1))
        lam = cross_validate(raw, CvConfig(seed=1)).lambda_star

        class IdentityRng:
            def integers(self, lo, hi, size):
                return np.arange(size)

        monkeypatch.setattr(bt, "_iteration_rng", lambda seed, b: IdentityRng())
        summary = bootstrap_centrality(raw, small_config(B=1, fix_lambda=lam))
        ref = reference_centralities(raw, lam)
        np.testing.assert_array_equal(summary.stats["strength"]["mean"], ref.strength)
        np.testing.assert_array_equal(summary.stats["closeness"]["mean"], ref.closeness)
        np.testing.assert_array_equal(
            summary.stats["betweenness"]["mean"], ref.betweenness
        )

    def test_parallelism_invariant(self):
        raw, _ = simulate(SyntheticSpec(p=5, n=30, graph_pattern="chain", seed=2))
        lam = 0.2
        serial = bootstrap_centrality(raw, small_config(fix_lambda=lam, parallelism=1))
        threaded = bootstrap_centrality(raw, small_config(fix_lambda=lam, parallelism=2))
        for m in bt.MEASURES:
            np.testing.assert_array_equal(
                serial.per_iteration_log[m], threaded.per_iteration_log[m]
            )
            for k in serial.stats[m]:
                np.testing.assert_array_equal(serial.stats[m][k], threaded.stats[m][k])

    def test_summary_matches_log_recomputation(self):
        raw, _ = simulate(SyntheticSpec(p=4, n=30, graph_pattern="chain", seed=4))
        summary = bootstrap_centrality(raw, small_config(B=12, fix_lambda=0.2))
        ok = summary.success_mask
        for m in bt.MEASURES:
            mat = summary.per_iteration_log[m][:, ok]
            np.testing.assert_allclose(summary.stats[m]["mean"], mat.mean(axis=1), atol=1e-12)
            np.testing.assert_allclose(
                summary.stats[m]["sd"], mat.std(axis=1, ddof=1), atol=1e-12
            )
            np.testing.assert_allclose(
                summary.stats[m]["q025"], np.quantile(mat, 0.025, axis=1), atol=1e-12
            )

    def test_quantiles_ordered_and_counts_balance(self):
        raw, _ = simulate(SyntheticSpec(p=4, n=25, graph_pattern="hub", seed=5))
        summary = bootstrap_centrality(raw, small_config(B=10, fix_lambda=0.25))
        assert summary.success_count + summary.failure_count == summary.B
        for m in bt.MEASURES:
            s = summary.stats[m]
            assert np.all(s["q025"] <= s["median"] + 1e-12)
            assert np.all(s["median"] <= s["q975"] + 1e-12)

    def test_per_iteration_cv_mode_runs(self):
        raw, _ = simulate(SyntheticSpec(p=4, n=30, graph_pattern="chain", seed=6))
        summary = bootstrap_centrality(raw, small_config(B=2))
        assert summary.B == 2

    def test_invalid_config(self):
        with pytest.raises(ValidationError):
            BootstrapConfig(B=0).validate()

    def test_hub_node_dominates_strength(self):
        # 3-chain: the middle node is the hub; its median strength should win
        # in nearly every outer replication.
        wins = 0
        for rep in range(10):
            raw, _ = simulate(
                SyntheticSpec(p=3, n=200, graph_pattern="chain", seed=900 + rep)
            )
            lam = cross_validate(raw, CvConfig(seed=rep)).lambda_star
            summary = bootstrap_centrality(
                raw, BootstrapConfig(B=50, seed=rep, fix_lambda=lam)
            )
            medians = summary.stats["strength"]["median"]
            if np.argmax(medians) == 1:
                wins += 1
        assert wins >= 9


class TestRankStability:
    def test_constant_centrality_zero_sd(self):
        logs = {
            m: np.tile(np.array([[3.0], [2.0], [1.0]]), (1, 6)) for m in bt.MEASURES
        }
        summary = summarize_iterations(["a", "b", "c"], logs, np.ones(6, dtype=bool))
        assert np.all(summary.stats["strength"]["sd"] == 0.0)

    def test_report_fields(self):
        raw, _ = simulate(SyntheticSpec(p=4, n=30, graph_pattern="chain", seed=7))
        summary = bootstrap_centrality(raw, small_config(B=6, fix_lambda=0.2))
        original = reference_centralities(raw, 0.2)
        report = centrality_rank_stability(summary, original, top_k=2)
        assert report["top_k"] == 2
        for m in bt.MEASURES:
            entry = report["measures"][m]
            assert len(entry["top_k_fraction"]) == 4
            assert all(0.0 <= f <= 1.0 for f in entry["top_k_fraction"])

    def test_absent_node_zero_stats(self):
        # A node with no edges in any resample keeps strength 0 with SD 0.
        logs = {m: np.zeros((2, 5)) for m in bt.MEASURES}
        logs["strength"][0] = [1.0, 2.0, 1.5, 1.2, 0.8]
        summary = summarize_iterations(["hub", "isolated"], logs, np.ones(5, dtype=bool))
        assert summary.stats["strength"]["mean"][1] == 0.0
        assert summary.stats["strength"]["sd"][1] == 0.0

    def test_requires_log(self):
        raw, _ = simulate(SyntheticSpec(p=3, n=20, graph_pattern="chain", seed=8))
        summary = bootstrap_centrality(
            raw, small_config(B=3, fix_lambda=0.3, keep_iterations=False)
        )
        original = reference_centralities(raw, 0.3)
        with pytest.raises(ValidationError, match="per-iteration log"):
            centrality_rank_stability(summary, original)
