"""K-fold cross-validation for the graphical lasso penalty parameter.

The grid is logarithmic between the largest off-diagonal covariance entry
and lam_min_ratio times it. Each fold's loss is the held-out Gaussian
negative log-likelihood tr(S_val Theta_train) - log det Theta_train; the
selected lambda minimizes the mean loss, with ties broken toward the
sparser (larger) lambda.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .data import CovarianceMatrix, RawDataset, ridge_condition, sample_covariance, standardize
from .errors import NumericalError, ValidationError
from .estimator import PenaltyWeights, _logdet_spd, adaptive_glasso_fit, glasso_fit

FOLD_STREAM = 11


@dataclass(frozen=True)
class CvConfig:
    K: int = 5
    num_lambda: int = 10
    lam_min_ratio: float = 0.01
    seed: int = 0
    delta: float = 0.2

    def validate(self, n: int) -> None:
        if not 2 <= self.K <= n:
            raise ValidationError(f"K must be in [2, n={n}], got {self.K}")
        if self.num_lambda < 2:
            raise ValidationError("num_lambda must be >= 2")
        if not 0 < self.lam_min_ratio < 1:
            raise ValidationError("lam_min_ratio must be in (0, 1)")
        if self.delta <= 0:
            raise ValidationError("delta must be positive")


@dataclass(frozen=True)
class CvResult:
    lambda_grid: np.ndarray
    fold_losses: np.ndarray
    cv_curve: np.ndarray
    lambda_star: float
    fold_assignments: np.ndarray
    warnings_log: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def _num(v: float):
            return float(v) if np.isfinite(v) else None

        return {
            "lambda_grid": [float(v) for v in self.lambda_grid],
            "fold_losses": [[_num(v) for v in row] for row in self.fold_losses],
            "cv_curve": [_num(v) for v in self.cv_curve],
            "lambda_star": float(self.lambda_star),
            "fold_assignments": [int(v) for v in self.fold_assignments],
            "warnings": list(self.warnings_log),
        }


def make_folds(n: int, K: int, seed: int) -> np.ndarray:
    """Random disjoint folds of size floor(n/K) or ceil(n/K); deterministic per seed."""
    if K > n:
        raise ValidationError(f"K={K} exceeds n={n}")
    rng = np.random.default_rng([seed, FOLD_STREAM])
    perm = rng.permutation(n)
    assignments = np.empty(n, dtype=int)
    for k, chunk in enumerate(np.array_split(perm, K)):
        assignments[chunk] = k
    return assignments


def lambda_grid(cov, num: int = 10, lam_min_ratio: float = 0.01) -> np.ndarray:
    """Descending log-spaced grid from max off-diagonal |S_ij| down to its ratio."""
    S = cov.S if hasattr(cov, "S") else np.asarray(cov, dtype=float)
    off = S[~np.eye(S.shape[0], dtype=bool)]
    lam_max = float(np.max(np.abs(off))) if off.size else 0.0
    if lam_max == 0.0:
        warnings.warn("all off-diagonal covariances are zero; degenerate grid {0}")
        return np.array([0.0])
    return np.geomspace(lam_max, lam_min_ratio * lam_max, num)


def fold_loss(S_val, theta_train: np.ndarray) -> float:
    """Held-out negative log-likelihood tr(S_val Theta) - log det Theta."""
    Smat = S_val.S if hasattr(S_val, "S") else np.asarray(S_val, dtype=float)
    theta = np.asarray(theta_train, dtype=float)
    return float(np.sum(Smat * theta)) - _logdet_spd(theta)


def _validation_covariance(X_val: np.ndarray) -> np.ndarray:
    # Rows already centered by the training (or global) standardization, so
    # the second moment about zero is the natural estimate; a single row
    # degenerates to its outer product.
    n_val = X_val.shape[0]
    S = X_val.T @ X_val / n_val
    return (S + S.T) / 2.0


def cross_validate(
    raw: RawDataset,
    config: CvConfig,
    divisor: str = "n_minus_1",
    kappa_max: float = 1e6,
    paper_literal: bool = False,
    tol: float = 1e-5,
    max_iter: int = 500,
    weights: "PenaltyWeights | None" = None,
) -> CvResult:
    """Grid-search lambda by K-fold CV over the full fit pipeline.

    By default each training split is standardized on its own rows and the
    held-out rows are transformed with the training moments; paper_literal
    standardizes once globally before splitting.
    """
    config.validate(raw.n)
    folds = make_folds(raw.n, config.K, config.seed)
    sizes = np.bincount(folds, minlength=config.K)
    if config.K != raw.n and np.any(sizes < 2):
        raise ValidationError(
            f"fold sizes {sorted(sizes.tolist())} include a singleton fold; "
            "use K=n for leave-one-out"
        )

    full_std = standardize(raw, divisor=divisor)
    full_cov = sample_covariance(full_std)
    grid = lambda_grid(full_cov, config.num_lambda, config.lam_min_ratio)

    global_std = full_std if paper_literal else None
    n_lam = grid.size
    fold_losses = np.full((config.K, n_lam), np.inf)
    warn_log: list[str] = []

    for k in range(config.K):
        train_mask = folds != k
        try:
            if paper_literal:
                X_tr = global_std.X[train_mask]
                X_val = global_std.X[~train_mask]
            else:
                sub = RawDataset(
                    values=raw.values[train_mask],
                    variable_names=raw.variable_names,
                    domain_labels=raw.domain_labels,
                )
                std_tr = standardize(sub, divisor=divisor)
                X_tr = std_tr.X
                X_val = (raw.values[~train_mask] - std_tr.column_means) / std_tr.column_sds
            denom = X_tr.shape[0] - 1 if divisor == "n_minus_1" else X_tr.shape[0]
            S_tr = X_tr.T @ X_tr / denom
            S_tr = (S_tr + S_tr.T) / 2.0
            cov_tr = ridge_condition(
                CovarianceMatrix(S=S_tr, divisor_convention=divisor), kappa_max
            )
            S_val = _validation_covariance(X_val)
        except (NumericalError, ValidationError) as exc:
            warn_log.append(f"fold {k}: training split failed ({exc}); losses set to +inf")
            continue

        for j, lam in enumerate(grid):
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    if weights is None:
                        est = glasso_fit(cov_tr, float(lam), tol=tol, max_iter=max_iter)
                    else:
                        est = adaptive_glasso_fit(
                            cov_tr, float(lam), weights, tol=tol, max_iter=max_iter
                        )
                if not est.converged:
                    warn_log.append(
                        f"fold {k}, lambda={lam:.6g}: fit did not converge"
                    )
                fold_losses[k, j] = fold_loss(S_val, est.theta)
            except NumericalError as exc:
                warn_log.append(
                    f"fold {k}, lambda={lam:.6g}: fit failed ({exc}); loss +inf"
                )

    cv_curve = fold_losses.mean(axis=0)
    if not np.any(np.isfinite(cv_curve)):
        raise NumericalError("cross-validation failed on every fold")
    best = float(np.min(cv_curve))
    # Grid is descending, so the first minimizer is the largest (sparsest) lambda.
    star_idx = int(np.flatnonzero(cv_curve == best)[0])
    return CvResult(
        lambda_grid=grid,
        fold_losses=fold_losses,
        cv_curve=cv_curve,
        lambda_star=float(grid[star_idx]),
        fold_assignments=folds,
        warnings_log=warn_log,
    )
