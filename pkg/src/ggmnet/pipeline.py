"""End-to-end orchestration: data -> fit -> network -> communities -> bootstrap.

Every artifact embeds the fully resolved configuration and the tool
version, carries a schema_version field, and contains no timestamps, so
identical configurations produce byte-identical outputs.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_centrality, centrality_rank_stability
from .community import walktrap
from .cv import CvConfig, cross_validate
from .data import load_csv, ridge_condition, sample_covariance, standardize
from .errors import ValidationError
from .estimator import adaptive_glasso_fit, adaptive_weights, glasso_fit
from .netgraph import (
    centrality_summary,
    centrality_to_csv,
    network_to_dot,
    network_to_json,
    precision_to_adjacency,
)

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    output_dir: str
    domains_path: Optional[str] = None
    divisor: str = "n_minus_1"
    kappa_max: float = 1e6
    cv: CvConfig = field(default_factory=CvConfig)
    delta: float = 0.2
    zero_tol: float = 1e-8
    walk_steps: int = 4
    seed: int = 0
    paper_literal: bool = False
    re_cv_adaptive: bool = False
    with_bootstrap: bool = False
    bootstrap_iterations: int = 1000
    bootstrap_fix_lambda: bool = False
    bootstrap_parallelism: int = 1
    top_k: int = 5
    dump_iterations_dir: Optional[str] = None

    def validate(self) -> None:
        if self.kappa_max < 1:
            raise ValidationError("kappa_max must be >= 1")
        if self.delta <= 0:
            raise ValidationError("delta must be positive")
        if self.walk_steps < 1:
            raise ValidationError("walk_steps must be >= 1")
        if self.zero_tol < 0:
            raise ValidationError("zero_tol must be nonnegative")
        if self.with_bootstrap and self.bootstrap_iterations < 1:
            raise ValidationError("bootstrap_iterations must be >= 1")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d


def _write_json(path: Path, payload: dict, config: PipelineConfig) -> None:
    body = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": config.to_dict(),
    }
    body.update(payload)
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_pipeline(
    config: PipelineConfig,
    stages: tuple[str, ...] = ("fit", "communities", "centrality"),
) -> dict:
    """Run the estimation pipeline and write artifacts to output_dir.

    `stages` controls which post-fit analyses run ("fit" is always
    implied); the bootstrap additionally requires config.with_bootstrap.
    Returns a dict with the key fitted objects for callers that want to
    keep going in-process.
    """
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    raw = load_csv(config.input_path, domains_path=config.domains_path)
    config.cv.validate(raw.n)

    std = standardize(raw, divisor=config.divisor)
    _write_json(
        out / "standardization.json",
        {
            "n": raw.n,
            "p": raw.p,
            "variables": raw.variable_names,
            "column_means": [float(v) for v in std.column_means],
            "column_sds": [float(v) for v in std.column_sds],
        },
        config,
    )

    cov0 = sample_covariance(std)
    cov = ridge_condition(cov0, config.kappa_max)
    _write_json(
        out / "covariance.json",
        {
            "ridge_epsilon": float(cov.ridge_epsilon),
            "condition_number": float(cov.condition_number),
            "condition_number_pre_ridge": float(cov0.condition_number)
            if np.isfinite(cov0.condition_number)
            else None,
            "S": [float(v) for v in cov.S.ravel()],
        },
        config,
    )

    cv_res = cross_validate(
        raw,
        config.cv,
        divisor=config.divisor,
        kappa_max=config.kappa_max,
        paper_literal=config.paper_literal,
    )
    _write_json(out / "cv_curve.json", cv_res.to_dict(), config)
    curve_csv = ["lambda,cv_loss"] + [
        f"{lam!r},{loss!r}" for lam, loss in zip(cv_res.lambda_grid, cv_res.cv_curve)
    ]
    (out / "cv_curve.csv").write_text("\n".join(curve_csv) + "\n", encoding="utf-8")

    lam = cv_res.lambda_star
    init = glasso_fit(cov, lam)
    _write_json(out / "precision_initial.json", init.to_dict(), config)

    w = adaptive_weights(init.theta, config.delta)
    if config.re_cv_adaptive:
        cv_adaptive = cross_validate(
            raw,
            config.cv,
            divisor=config.divisor,
            kappa_max=config.kappa_max,
            paper_literal=config.paper_literal,
            weights=w,
        )
        lam = cv_adaptive.lambda_star
        _write_json(out / "cv_curve_adaptive.json", cv_adaptive.to_dict(), config)
    fit = adaptive_glasso_fit(cov, lam, w)
    _write_json(out / "precision_adaptive.json", fit.to_dict(), config)

    net = precision_to_adjacency(
        fit,
        zero_tol=config.zero_tol,
        node_labels=raw.variable_names,
        node_domains=raw.domain_labels,
    )
    _write_json(out / "network.json", network_to_json(net), config)
    (out / "network.dot").write_text(network_to_dot(net), encoding="utf-8")

    partition = None
    if "communities" in stages:
        partition = walktrap(net, t=config.walk_steps)
        _write_json(out / "partition.json", partition.to_dict(), config)
        part_csv = ["node,community"] + [
            f"{name},{int(c)}" for name, c in zip(raw.variable_names, partition.labels)
        ]
        (out / "partition.csv").write_text("\n".join(part_csv) + "\n", encoding="utf-8")

    cent = None
    if "centrality" in stages or config.with_bootstrap:
        cent = centrality_summary(net)
        (out / "centrality.csv").write_text(
            centrality_to_csv(cent, raw.variable_names), encoding="utf-8"
        )

    result = {
        "raw": raw,
        "covariance": cov,
        "cv": cv_res,
        "initial": init,
        "adaptive": fit,
        "network": net,
        "partition": partition,
        "centrality": cent,
        "bootstrap": None,
    }

    if config.with_bootstrap:
        bconfig = BootstrapConfig(
            B=config.bootstrap_iterations,
            seed=config.seed,
            cv=config.cv,
            delta=config.delta,
            parallelism=config.bootstrap_parallelism,
            fix_lambda=cv_res.lambda_star if config.bootstrap_fix_lambda else None,
            divisor=config.divisor,
            kappa_max=config.kappa_max,
            zero_tol=config.zero_tol,
        )
        summary = bootstrap_centrality(raw, bconfig)
        _write_json(out / "bootstrap_summary.json", summary.to_dict(), config)
        stability = centrality_rank_stability(summary, cent, top_k=config.top_k)
        _write_json(out / "bootstrap_stability.json", stability, config)
        rows = ["node,measure,mean,sd,median,q025,q975"]
        for m, s in summary.stats.items():
            for i, name in enumerate(summary.node_labels):
                rows.append(
                    f"{name},{m},{s['mean'][i]!r},{s['sd'][i]!r},"
                    f"{s['median'][i]!r},{s['q025'][i]!r},{s['q975'][i]!r}"
                )
        (out / "bootstrap_nodes.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        if config.dump_iterations_dir:
            dump = Path(config.dump_iterations_dir)
            dump.mkdir(parents=True, exist_ok=True)
            for m, mat in summary.per_iteration_log.items():
                np.savetxt(dump / f"{m}.csv", mat, delimiter=",")
            np.savetxt(
                dump / "success_mask.csv",
                summary.success_mask.astype(int)[None, :],
                fmt="%d",
                delimiter=",",
            )
        result["bootstrap"] = summary

    return result
