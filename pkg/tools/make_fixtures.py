"""Regenerate the bundled CSV fixtures (deterministic; run from repo root).

table1_synthetic.csv: 19 rows x 41 symptom variables whose per-column
sample moments match the published descriptive statistics, with a domain
row as second header. Values are synthetic Gaussians rescaled to the
target mean/SD, correlated within domains so the fitted network is
non-trivial.

bootstrap_synthetic.csv: 50 rows x 10 variables drawn from a known sparse
precision matrix, used by the bootstrap acceptance test.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ggmnet.simulate import SyntheticSpec, simulate  # noqa: E402

TABLE1 = [
    ("Som1", "Somatic", 1.68, 0.75), ("Som2", "Somatic", 1.58, 0.84),
    ("Som3", "Somatic", 1.11, 0.74), ("Som4", "Somatic", 1.74, 0.73),
    ("Som5", "Somatic", 1.00, 0.67), ("Som6", "Somatic", 1.05, 0.62),
    ("Som7", "Somatic", 1.95, 0.91),
    ("Anx1", "Anxiety", 1.37, 0.83), ("Anx2", "Anxiety", 2.68, 1.10),
    ("Anx3", "Anxiety", 2.53, 1.07), ("Anx4", "Anxiety", 3.00, 0.94),
    ("Anx5", "Anxiety", 1.32, 0.58), ("Anx6", "Anxiety", 3.16, 0.96),
    ("Anx7", "Anxiety", 2.74, 0.99),
    ("Dep1", "Depression", 1.37, 0.68), ("Dep2", "Depression", 1.95, 0.96),
    ("Dep3", "Depression", 2.05, 0.97), ("Dep4", "Depression", 2.03, 1.01),
    ("Dep5", "Depression", 1.26, 0.73), ("Dep6", "Depression", 1.42, 0.51),
    ("Dep7", "Depression", 2.11, 0.99), ("Dep8", "Depression", 1.63, 0.68),
    ("PTSD1", "PTSD", 1.26, 0.65), ("PTSD2", "PTSD", 1.89, 0.81),
    ("PTSD3", "PTSD", 3.00, 0.82), ("PTSD4", "PTSD", 2.74, 0.99),
    ("PTSD5", "PTSD", 2.26, 1.15), ("PTSD6", "PTSD", 2.63, 1.02),
    ("PTSD7", "PTSD", 2.53, 1.02), ("PTSD8", "PTSD", 2.26, 1.05),
    ("PTSD9", "PTSD", 2.42, 1.07), ("PTSD10", "PTSD", 2.53, 1.12),
    ("PTSD11", "PTSD", 2.68, 0.95), ("PTSD12", "PTSD", 3.00, 1.15),
    ("PTSD13", "PTSD", 2.58, 1.02), ("PTSD14", "PTSD", 3.16, 1.01),
    ("PTSD15", "PTSD", 3.26, 1.45), ("PTSD16", "PTSD", 2.89, 1.10),
    ("PTSD17", "PTSD", 3.00, 1.05), ("PTSD18", "PTSD", 2.53, 0.96),
    ("PTSD19", "PTSD", 2.68, 0.82),
]


def make_table1(out_path: Path) -> None:
    n = 19
    p = len(TABLE1)
    rng = np.random.default_rng(20240201)
    domains = [d for _, d, _, _ in TABLE1]
    # Within-domain correlation 0.45, across 0.10; keeps the fitted network
    # sparse but connected.
    corr = np.full((p, p), 0.10)
    for i in range(p):
        for j in range(p):
            if domains[i] == domains[j]:
                corr[i, j] = 0.45
    np.fill_diagonal(corr, 1.0)
    eigvals, eigvecs = np.linalg.eigh(corr)
    L = eigvecs @ np.diag(np.sqrt(np.maximum(eigvals, 1e-10)))
    Z = rng.standard_normal((n, p)) @ L.T
    # Rescale each column to hit the published mean/SD exactly (ddof=1).
    Z = (Z - Z.mean(axis=0)) / Z.std(axis=0, ddof=1)
    for j, (_, _, mean, sd) in enumerate(TABLE1):
        Z[:, j] = Z[:, j] * sd + mean

    lines = [",".join(name for name, _, _, _ in TABLE1)]
    lines.append(",".join(domains))
    for row in Z:
        lines.append(",".join(f"{v:.6f}" for v in row))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_bootstrap_fixture(out_path: Path) -> None:
    spec = SyntheticSpec(p=10, n=50, graph_pattern="random", edge_prob=0.25,
                         magnitude=0.4, seed=7)
    raw, _ = simulate(spec)
    lines = [",".join(raw.variable_names)]
    for row in raw.values:
        lines.append(",".join(f"{v:.6f}" for v in row))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    fixtures = Path(__file__).resolve().parents[1] / "src" / "ggmnet" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    make_table1(fixtures / "table1_synthetic.csv")
    make_bootstrap_fixture(fixtures / "bootstrap_synthetic.csv")
    print("fixtures written to", fixtures)
