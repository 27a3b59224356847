"""Command-line interface: fit, communities, centrality, bootstrap, simulate, pipeline.

Exit codes: 0 success, 2 validation error, 3 numerical failure,
4 bootstrap completed with partial failures.
"""

from __future__ import annotations

import json
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from . import __version__
from .community import walktrap
from .cv import CvConfig
from .errors import NumericalError, ValidationError
from .netgraph import centrality_summary, centrality_to_csv, network_from_json
from .pipeline import PipelineConfig, run_pipeline
from .simulate import SyntheticSpec, simulate

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL_BOOTSTRAP = 4


def _read_config_file(path: str) -> dict:
    """Parse a flat TOML-style 'key = value' config file.

    Values are interpreted as bool, int, float, or string (optionally
    quoted); keys use the same names as the CLI flags with underscores.
    """
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip().strip('"').strip("'")
        if value.lower() in ("true", "false"):
            parsed = value.lower() == "true"
        else:
            try:
                parsed = int(value)
            except ValueError:
                try:
                    parsed = float(value)
                except ValueError:
                    parsed = value
        overrides[key] = parsed
    return overrides


def _build_config(input_path, output_dir, config_file, **kw) -> PipelineConfig:
    if config_file:
        file_values = _read_config_file(config_file)
        for key, value in file_values.items():
            if key in kw and kw[key] is None:
                kw[key] = value
    defaults = PipelineConfig(input_path="", output_dir="")
    cv_defaults = CvConfig()

    def pick(name, default):
        return kw.get(name) if kw.get(name) is not None else default

    cv = CvConfig(
        K=pick("cv_folds", cv_defaults.K),
        num_lambda=pick("num_lambda", cv_defaults.num_lambda),
        lam_min_ratio=pick("lam_min_ratio", cv_defaults.lam_min_ratio),
        seed=pick("seed", cv_defaults.seed),
        delta=pick("delta", cv_defaults.delta),
    )
    return PipelineConfig(
        input_path=str(input_path),
        output_dir=str(output_dir),
        domains_path=kw.get("domains"),
        divisor=pick("divisor", defaults.divisor),
        kappa_max=pick("kappa_max", defaults.kappa_max),
        cv=cv,
        delta=pick("delta", defaults.delta),
        zero_tol=pick("zero_tol", defaults.zero_tol),
        walk_steps=pick("walk_steps", defaults.walk_steps),
        seed=pick("seed", defaults.seed),
        paper_literal=bool(pick("paper_literal", False)),
        re_cv_adaptive=bool(pick("re_cv_adaptive", False)),
        with_bootstrap=bool(pick("with_bootstrap", False)),
        bootstrap_iterations=pick("iterations", defaults.bootstrap_iterations),
        bootstrap_fix_lambda=bool(pick("fix_lambda", False)),
        bootstrap_parallelism=pick("parallelism", defaults.bootstrap_parallelism),
        top_k=pick("top_k", defaults.top_k),
        dump_iterations_dir=kw.get("dump_iterations"),
    )


def _run(config: PipelineConfig, stages) -> int:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = run_pipeline(config, stages=stages)
        for w in caught:
            click.echo(f"warning: {w.message}", err=True)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        return EXIT_VALIDATION
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERICAL
    if result["bootstrap"] is not None and result["bootstrap"].failure_count > 0:
        click.echo(
            f"bootstrap: {result['bootstrap'].failure_count} of "
            f"{result['bootstrap'].B} iterations failed",
            err=True,
        )
        return EXIT_PARTIAL_BOOTSTRAP
    return 0


_fit_options = [
    click.option("--domains", type=click.Path(exists=True), default=None,
                 help="Sidecar file mapping variable -> domain."),
    click.option("--divisor", type=click.Choice(["n-1", "n"]), default=None,
                 help="Variance divisor convention (default n-1)."),
    click.option("--kappa-max", type=float, default=None,
                 help="Condition-number bound for the ridge (default 1e6)."),
    click.option("--cv-folds", type=int, default=None, help="CV fold count (default 5)."),
    click.option("--num-lambda", type=int, default=None, help="Lambda grid size (default 10)."),
    click.option("--lam-min-ratio", type=float, default=None,
                 help="lambda_min / lambda_max (default 0.01)."),
    click.option("--seed", type=int, default=None, help="Master RNG seed (default 0)."),
    click.option("--delta", type=float, default=None,
                 help="Adaptive-weight offset (default 0.2)."),
    click.option("--zero-tol", type=float, default=None,
                 help="Structural-zero threshold for edges (default 1e-8)."),
    click.option("--walk-steps", type=int, default=None,
                 help="Random-walk length for community detection (default 4)."),
    click.option("--paper-literal", is_flag=True, default=None,
                 help="Standardize once globally before CV splitting."),
    click.option("--re-cv-adaptive", is_flag=True, default=None,
                 help="Re-run CV with adaptive weights for the second stage."),
    click.option("--config", "config_file", type=click.Path(exists=True), default=None,
                 help="Flat key = value config file; flags override it."),
]


def _apply_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


def _normalize_divisor(kw):
    if kw.get("divisor") is not None:
        kw["divisor"] = {"n-1": "n_minus_1", "n": "n"}[kw["divisor"]]
    return kw


@click.group()
@click.version_option(version=__version__)
def main():
    """Sparse symptom-network estimation and analysis."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@_apply_options(_fit_options)
def fit(input_path, output_dir, config_file, **kw):
    """Estimate the precision matrix and export the weighted network."""
    config = _build_config(input_path, output_dir, config_file, **_normalize_divisor(kw))
    sys.exit(_run(config, stages=("fit",)))


@main.command()
@click.argument("network_json", type=click.Path(exists=True))
@click.option("--out", "output_path", required=True, type=click.Path())
@click.option("--walk-steps", type=int, default=4, show_default=True)
def communities(network_json, output_path, walk_steps):
    """Detect communities in an exported network."""
    try:
        payload = json.loads(Path(network_json).read_text(encoding="utf-8"))
        net = network_from_json(payload)
        partition = walktrap(net, t=walk_steps)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    Path(output_path).write_text(
        json.dumps(partition.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


@main.command()
@click.argument("network_json", type=click.Path(exists=True))
@click.option("--out", "output_path", required=True, type=click.Path())
def centrality(network_json, output_path):
    """Compute strength, closeness, and betweenness for an exported network."""
    try:
        payload = json.loads(Path(network_json).read_text(encoding="utf-8"))
        net = network_from_json(payload)
        summary = centrality_summary(net)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    Path(output_path).write_text(
        centrality_to_csv(summary, net.node_labels), encoding="utf-8"
    )


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option("--iterations", type=int, default=None, help="Bootstrap iterations (default 1000).")
@click.option("--fix-lambda", is_flag=True, default=None,
              help="Reuse the original lambda* instead of per-iteration CV.")
@click.option("--parallelism", type=int, default=None, help="Worker count (default 1).")
@click.option("--top-k", type=int, default=None, help="Top-k rank threshold (default 5).")
@click.option("--dump-iterations", type=click.Path(), default=None,
              help="Directory for raw per-iteration centrality matrices.")
@_apply_options(_fit_options)
def bootstrap(input_path, output_dir, config_file, **kw):
    """Bootstrap the pipeline to assess centrality stability."""
    kw["with_bootstrap"] = True
    config = _build_config(input_path, output_dir, config_file, **_normalize_divisor(kw))
    sys.exit(_run(config, stages=("fit", "centrality")))


@main.command()
@click.option("--p", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--pattern", type=click.Choice(["chain", "hub", "random", "two_block"]),
              default="chain", show_default=True)
@click.option("--magnitude", type=float, default=0.4, show_default=True)
@click.option("--edge-prob", type=float, default=0.2, show_default=True)
@click.option("--block-strength", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "output_dir", required=True, type=click.Path())
def simulate_cmd(p, n, pattern, magnitude, edge_prob, block_strength, seed, output_dir):
    """Generate synthetic Gaussian data from a known sparse precision matrix."""
    try:
        spec = SyntheticSpec(
            p=p, n=n, graph_pattern=pattern, magnitude=magnitude,
            edge_prob=edge_prob, block_strength=block_strength, seed=seed,
        )
        raw, theta = simulate(spec)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [",".join(raw.variable_names)]
    for row in raw.values:
        lines.append(",".join(repr(float(v)) for v in row))
    (out / "data.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "theta_true.json").write_text(
        json.dumps(
            {
                "p": p,
                "pattern": pattern,
                "seed": seed,
                "theta": [float(v) for v in np.asarray(theta).ravel()],
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )


# Click command names can't contain the trailing _cmd.
simulate_cmd.name = "simulate"


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option("--with-bootstrap", is_flag=True, default=None)
@click.option("--iterations", type=int, default=None)
@click.option("--fix-lambda", is_flag=True, default=None)
@click.option("--parallelism", type=int, default=None)
@click.option("--top-k", type=int, default=None)
@click.option("--dump-iterations", type=click.Path(), default=None)
@_apply_options(_fit_options)
def pipeline(input_path, output_dir, config_file, **kw):
    """Run the full pipeline: fit, communities, centrality, optional bootstrap."""
    config = _build_config(input_path, output_dir, config_file, **_normalize_divisor(kw))
    sys.exit(_run(config, stages=("fit", "communities", "centrality")))


if __name__ == "__main__":
    main()
