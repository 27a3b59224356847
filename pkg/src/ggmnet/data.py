"""Data ingestion, z-score standardization, and covariance conditioning.

The estimation pipeline starts from an n x p table of finite scores. We
standardize each column, form the sample covariance (a correlation matrix
once columns are z-scored), and add the smallest ridge term that brings the
condition number under a user-chosen bound so the matrix is safely invertible
when n < p.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import NumericalError, ValidationError

DIVISOR_CONVENTIONS = ("n_minus_1", "n")


@dataclass(frozen=True)
class RawDataset:
    """An n x p score matrix with column names and optional domain labels."""

    values: np.ndarray
    variable_names: list[str]
    domain_labels: Optional[list[str]] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValidationError("values must be a 2-D matrix")
        n, p = values.shape
        if n < 2:
            raise ValidationError(f"need at least 2 rows, got {n}")
        if p < 2:
            raise ValidationError(f"need at least 2 columns, got {p}")
        if len(self.variable_names) != p:
            raise ValidationError("variable_names length does not match column count")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValidationError(
                f"non-finite value at row {bad[0] + 1}, column "
                f"{self.variable_names[bad[1]]!r}"
            )
        if len(set(self.variable_names)) != p:
            seen = set()
            dup = next(v for v in self.variable_names if v in seen or seen.add(v))
            raise ValidationError(f"duplicate variable name {dup!r}")
        if self.domain_labels is not None and len(self.domain_labels) != p:
            raise ValidationError("domain_labels length does not match column count")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class StandardizedMatrix:
    """Z-scored data with the per-column moments used to produce it."""

    X: np.ndarray
    column_means: np.ndarray
    column_sds: np.ndarray
    divisor: str = "n_minus_1"

    def __post_init__(self):
        if np.any(self.column_sds <= 0):
            raise ValidationError("column_sds must be strictly positive")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric p x p covariance with ridge/conditioning metadata."""

    S: np.ndarray
    ridge_epsilon: float = 0.0
    condition_number: float = field(default=np.inf)
    divisor_convention: str = "n_minus_1"

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ValidationError("S must be square")
        if np.max(np.abs(S - S.T)) > 1e-12:
            raise ValidationError("S must be symmetric to 1e-12")
        if self.divisor_convention not in DIVISOR_CONVENTIONS:
            raise ValidationError(f"unknown divisor convention {self.divisor_convention!r}")

    @property
    def p(self) -> int:
        return self.S.shape[0]


def _parse_domain_sidecar(path: Path) -> dict[str, str]:
    """Read a variable -> domain mapping from a JSON object or two-column CSV."""
    text = path.read_text(encoding="utf-8")
    try:
        mapping = json.loads(text)
        if not isinstance(mapping, dict):
            raise ValidationError(f"domain sidecar {path} must be a JSON object")
        return {str(k): str(v) for k, v in mapping.items()}
    except json.JSONDecodeError:
        mapping = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            parts = [c.strip() for c in line.split(",")]
            if len(parts) != 2:
                raise ValidationError(
                    f"domain sidecar {path}: expected 'variable,domain' lines"
                )
            mapping[parts[0]] = parts[1]
        return mapping


def load_csv(
    path,
    delimiter: str = ",",
    header: bool = True,
    domains_path=None,
) -> RawDataset:
    """Load a numeric CSV into a RawDataset.

    The first row is the header by default. If the second row contains no
    numeric cells it is treated as a domain-label row. A sidecar file
    (JSON object or two-column CSV mapping variable to domain) overrides
    inline domains.
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise ValidationError(f"{path}: empty file")

    if header:
        names = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        names = [f"V{i + 1}" for i in range(len(rows[0]))]
        body = rows

    domain_labels = None

    def _numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    if body and not any(_numeric(c) for c in body[0]):
        domain_labels = [c.strip() for c in body[0]]
        body = body[1:]

    p = len(names)
    values = np.empty((len(body), p))
    for i, row in enumerate(body):
        if len(row) != p:
            raise ValidationError(
                f"{path}: row {i + 1} has {len(row)} cells, expected {p}"
            )
        for j, cell in enumerate(row):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise ValidationError(
                    f"{path}: cannot parse cell at row {i + 1}, "
                    f"column {names[j]!r}: {cell!r}"
                ) from None

    if domains_path is not None:
        mapping = _parse_domain_sidecar(Path(domains_path))
        missing = [v for v in names if v not in mapping]
        if missing:
            raise ValidationError(f"domain sidecar lacks entries for {missing}")
        domain_labels = [mapping[v] for v in names]

    return RawDataset(values=values, variable_names=names, domain_labels=domain_labels)


def _column_sds(values: np.ndarray, divisor: str) -> np.ndarray:
    ddof = 1 if divisor == "n_minus_1" else 0
    return values.std(axis=0, ddof=ddof)


def standardize(raw: RawDataset, divisor: str = "n_minus_1") -> StandardizedMatrix:
    """Z-score each column; zero-variance columns are a hard error."""
    if divisor not in DIVISOR_CONVENTIONS:
        raise ValidationError(f"unknown divisor convention {divisor!r}")
    means = raw.values.mean(axis=0)
    sds = _column_sds(raw.values, divisor)
    zero = np.flatnonzero(sds == 0)
    if zero.size:
        raise NumericalError(
            f"zero-variance column {raw.variable_names[zero[0]]!r}: cannot standardize"
        )
    X = (raw.values - means) / sds
    return StandardizedMatrix(X=X, column_means=means, column_sds=sds, divisor=divisor)


def sample_covariance(std: StandardizedMatrix, divisor: Optional[str] = None) -> CovarianceMatrix:
    """Sample covariance of standardized data (a correlation matrix of the raw scores)."""
    divisor = divisor or std.divisor
    denom = std.n - 1 if divisor == "n_minus_1" else std.n
    S = std.X.T @ std.X / denom
    S = (S + S.T) / 2.0
    eigvals = np.linalg.eigvalsh(S)
    lo, hi = eigvals[0], eigvals[-1]
    cond = hi / lo if lo > 0 else np.inf
    return CovarianceMatrix(
        S=S, ridge_epsilon=0.0, condition_number=cond, divisor_convention=divisor
    )


def ridge_condition(cov: CovarianceMatrix, kappa_max: float = 1e6) -> CovarianceMatrix:
    """Add the smallest diagonal ridge that bounds the condition number.

    The minimal epsilon is located by bisection over the eigenvalue shift to
    relative tolerance 1e-6; epsilon stays 0 when the matrix already meets
    the bound.
    """
    if kappa_max < 1:
        raise ValidationError(f"kappa_max must be >= 1, got {kappa_max}")
    eigvals = np.linalg.eigvalsh(cov.S)
    lo, hi = float(eigvals[0]), float(eigvals[-1])
    if lo < -1e-8 * max(1.0, abs(hi)):
        raise NumericalError(f"matrix is not PSD (min eigenvalue {lo:.3e})")
    lo = max(lo, 0.0)

    def cond(eps: float) -> float:
        denom = lo + eps
        return np.inf if denom <= 0 else (hi + eps) / denom

    if cond(0.0) <= kappa_max:
        eps = 0.0
    else:
        # Feasible upper bound: (hi + e) / (lo + e) <= kappa_max for e >= this.
        upper = max((hi - kappa_max * lo) / (kappa_max - 1), 1e-300) if kappa_max > 1 else hi
        upper *= 1.0 + 1e-3
        lower = 0.0
        while cond(upper) > kappa_max:
            upper *= 2.0
        while (upper - lower) > 1e-6 * upper:
            mid = (upper + lower) / 2.0
            if cond(mid) <= kappa_max:
                upper = mid
            else:
                lower = mid
        eps = upper

    S_ridged = cov.S + eps * np.eye(cov.p)
    return CovarianceMatrix(
        S=(S_ridged + S_ridged.T) / 2.0,
        ridge_epsilon=eps,
        condition_number=cond(eps),
        divisor_convention=cov.divisor_convention,
    )
