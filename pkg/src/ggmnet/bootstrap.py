"""Nonparametric bootstrap over individuals for centrality stability.

Each iteration resamples rows with replacement, re-runs the full
standardize / covariance / ridge / glasso / adaptive-glasso / network
pipeline, and records the three centrality vectors. Iterations own
independent RNG streams keyed by (seed, iteration index), so results do
not depend on execution order or worker count.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .cv import CvConfig, cross_validate
from .data import RawDataset, ridge_condition, sample_covariance, standardize
from .errors import NumericalError, ValidationError
from .estimator import adaptive_glasso_fit, adaptive_weights, glasso_fit
from .netgraph import CentralitySummary, centrality_summary, precision_to_adjacency

BOOTSTRAP_STREAM = 23
MEASURES = ("strength", "closeness", "betweenness")


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 1000
    seed: int = 0
    cv: CvConfig = field(default_factory=CvConfig)
    delta: float = 0.2
    parallelism: int = 1
    fix_lambda: Optional[float] = None
    divisor: str = "n_minus_1"
    kappa_max: float = 1e6
    zero_tol: float = 1e-8
    keep_iterations: bool = True

    def validate(self) -> None:
        if self.B < 1:
            raise ValidationError("B must be >= 1")
        if self.delta <= 0:
            raise ValidationError("delta must be positive")
        if self.parallelism < 1:
            raise ValidationError("parallelism must be >= 1")


@dataclass(frozen=True)
class BootstrapSummary:
    """Per-measure, per-node summary statistics over successful iterations."""

    node_labels: list[str]
    B: int
    failure_count: int
    stats: dict  # measure -> {"mean","sd","median","q025","q975"} arrays
    per_iteration_log: Optional[dict] = None  # measure -> p x B matrix (NaN = failed)
    success_mask: Optional[np.ndarray] = None

    @property
    def success_count(self) -> int:
        return self.B - self.failure_count

    def to_dict(self) -> dict:
        out = {
            "B": self.B,
            "failure_count": self.failure_count,
            "nodes": list(self.node_labels),
            "stats": {
                m: {k: [float(x) for x in v] for k, v in s.items()}
                for m, s in self.stats.items()
            },
        }
        return out


def _iteration_rng(seed: int, b: int) -> np.random.Generator:
    return np.random.default_rng([seed, BOOTSTRAP_STREAM, b])


def _run_iteration(raw: RawDataset, config: BootstrapConfig, b: int):
    rng = _iteration_rng(config.seed, b)
    idx = rng.integers(0, raw.n, size=raw.n)
    try:
        sample = RawDataset(
            values=raw.values[idx],
            variable_names=raw.variable_names,
            domain_labels=raw.domain_labels,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            std = standardize(sample, divisor=config.divisor)
            cov = ridge_condition(sample_covariance(std), config.kappa_max)
            if config.fix_lambda is not None:
                lam = config.fix_lambda
            else:
                lam = cross_validate(
                    sample,
                    config.cv,
                    divisor=config.divisor,
                    kappa_max=config.kappa_max,
                ).lambda_star
            init = glasso_fit(cov, lam)
            w = adaptive_weights(init.theta, config.delta)
            fit = adaptive_glasso_fit(cov, lam, w)
            if not fit.converged:
                raise NumericalError("adaptive fit did not converge")
            net = precision_to_adjacency(
                fit, zero_tol=config.zero_tol, node_labels=raw.variable_names
            )
            cent = centrality_summary(net)
        return b, True, cent.strength, cent.closeness, cent.betweenness
    except (NumericalError, ValidationError):
        nan = np.full(raw.p, np.nan)
        return b, False, nan, nan, nan


def summarize_iterations(
    node_labels: list[str],
    logs: dict,
    success: np.ndarray,
    keep_log: bool = True,
) -> BootstrapSummary:
    """Reduce p x B centrality matrices to per-node summary statistics."""
    B = success.size
    stats = {}
    for m in MEASURES:
        mat = logs[m]
        ok = mat[:, success]
        if ok.shape[1] == 0:
            raise NumericalError("all bootstrap iterations failed")
        sd = (
            ok.std(axis=1, ddof=1)
            if ok.shape[1] >= 2
            else np.zeros(mat.shape[0])
        )
        stats[m] = {
            "mean": ok.mean(axis=1),
            "sd": sd,
            "median": np.median(ok, axis=1),
            "q025": np.quantile(ok, 0.025, axis=1),
            "q975": np.quantile(ok, 0.975, axis=1),
        }
    return BootstrapSummary(
        node_labels=node_labels,
        B=B,
        failure_count=int(B - success.sum()),
        stats=stats,
        per_iteration_log=logs if keep_log else None,
        success_mask=success if keep_log else None,
    )


def bootstrap_centrality(raw: RawDataset, config: BootstrapConfig) -> BootstrapSummary:
    """Run B bootstrap iterations of the full pipeline; summary is order-independent."""
    config.validate()
    runner = Parallel(n_jobs=config.parallelism, batch_size="auto")
    results = runner(
        delayed(_run_iteration)(raw, config, b) for b in range(config.B)
    )
    results.sort(key=lambda r: r[0])

    p = raw.p
    success = np.zeros(config.B, dtype=bool)
    logs = {m: np.full((p, config.B), np.nan) for m in MEASURES}
    for b, ok, s, c, bt in results:
        success[b] = ok
        logs["strength"][:, b] = s
        logs["closeness"][:, b] = c
        logs["betweenness"][:, b] = bt

    if not success.any():
        raise NumericalError("all bootstrap iterations failed")
    failures = int(config.B - success.sum())
    if failures:
        warnings.warn(f"{failures} of {config.B} bootstrap iterations failed")
    return summarize_iterations(
        raw.variable_names, logs, success, keep_log=config.keep_iterations
    )


def centrality_rank_stability(
    summary: BootstrapSummary, original: CentralitySummary, top_k: int = 5
) -> dict:
    """Compare bootstrap distributions against the original point estimates.

    For each node and measure: absolute deviation of the bootstrap mean from
    the original value, bootstrap SD, and the fraction of successful
    iterations in which the node ranks in the top k for that measure.
    """
    if summary.per_iteration_log is None:
        raise ValidationError("summary lacks per-iteration log; rerun with keep_iterations")
    p = len(summary.node_labels)
    originals = {
        "strength": original.strength,
        "closeness": original.closeness,
        "betweenness": original.betweenness,
    }
    if any(v.shape[0] != p for v in originals.values()):
        raise ValidationError("node count mismatch between summary and original")
    success = summary.success_mask
    report = {"top_k": top_k, "measures": {}}
    for m in MEASURES:
        mat = summary.per_iteration_log[m][:, success]
        n_ok = mat.shape[1]
        # A node is top-k in an iteration when at most k-1 nodes strictly beat it.
        beats = (mat[None, :, :] > mat[:, None, :]).sum(axis=1)
        top_frac = (beats <= top_k - 1).sum(axis=1) / n_ok
        report["measures"][m] = {
            "abs_mean_deviation": [
                float(v) for v in np.abs(summary.stats[m]["mean"] - originals[m])
            ],
            "bootstrap_sd": [float(v) for v in summary.stats[m]["sd"]],
            "top_k_fraction": [float(v) for v in top_frac],
        }
    return report
