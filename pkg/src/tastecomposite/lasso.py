"""Lasso regression via cyclic coordinate descent with soft-thresholding.

Objective (1/2n convention, intercept unpenalized):

    (1/2n) * sum_i (y_i - b0 - x_i . b)^2 + alpha * sum_k |b_k|

Features are standardized inside ``fit`` using training-data statistics only;
zero-variance columns get scale 1 and shrink to a zero coefficient. The
estimator follows the sklearn fit/predict/get_params conventions so it
composes with the wider ecosystem.
"""

from __future__ import annotations

import warnings

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, RegressorMixin

from .errors import InsufficientData, NonFiniteInput

DEFAULT_ALPHA_GRID = np.logspace(-3.0, 1.0, 30)


def soft_threshold(z: float, threshold: float) -> float:
    return np.sign(z) * max(abs(z) - threshold, 0.0)


@njit(cache=True)
def _cd_kernel(XsT, y_centered, coef, col_nsq, alpha, tol, max_sweeps,
               objective_path):
    """Cyclic coordinate descent on pre-standardized features (XsT is the
    p x n transposed design, so each coordinate's column is contiguous).

    Mutates coef in place; objective_path[s] holds the objective after sweep
    s (index 0 = starting point). Returns (sweeps_run, converged)."""
    p, n = XsT.shape
    r = y_centered - XsT.T @ coef
    objective_path[0] = (r @ r) / (2 * n) + alpha * np.abs(coef).sum()
    for sweep in range(1, max_sweeps + 1):
        max_delta = 0.0
        for k in range(p):
            if col_nsq[k] == 0.0:
                continue
            old = coef[k]
            rho = (XsT[k] @ r) / n + col_nsq[k] * old
            mag = abs(rho) - alpha
            new = np.sign(rho) * mag / col_nsq[k] if mag > 0.0 else 0.0
            if new != old:
                r -= (new - old) * XsT[k]
                coef[k] = new
                delta = abs(new - old)
                if delta > max_delta:
                    max_delta = delta
        objective_path[sweep] = (r @ r) / (2 * n) + alpha * np.abs(coef).sum()
        if max_delta < tol:
            return sweep, True
    return max_sweeps, False


def standardize_columns(X: np.ndarray):
    """Column means and stds (ddof=0); zero-variance columns get std 1."""
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


class ConvergenceWarning(UserWarning):
    pass


class CoordinateDescentLasso(BaseEstimator, RegressorMixin):
    """Lasso fit by cyclic coordinate descent on standardized features.

    Parameters
    ----------
    alpha : L1 penalty weight (>= 0).
    tol : stop when the largest coefficient change in a sweep falls below it.
    max_sweeps : hard cap on full coordinate sweeps.
    warm_start : reuse the previous ``coef_`` as the starting point.
    """

    def __init__(self, alpha=1.0, tol=1e-6, max_sweeps=10_000, warm_start=False):
        self.alpha = alpha
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.warm_start = warm_start

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError(f"shape mismatch: X {X.shape}, y {y.shape}")
        if X.shape[0] < 2:
            raise InsufficientData("need at least 2 rows")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise NonFiniteInput("design matrix or targets contain NaN/inf")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")

        n, p = X.shape
        self.feature_mean_, self.feature_scale_ = standardize_columns(X)
        Xs = (X - self.feature_mean_) / self.feature_scale_
        # column squared norms / n; exactly 0 for constant columns
        col_nsq = (Xs * Xs).sum(axis=0) / n

        y_mean = y.mean()
        if self.warm_start and getattr(self, "coef_", None) is not None:
            coef = self.coef_.copy()
        else:
            coef = np.zeros(p)

        objective_path = np.empty(self.max_sweeps + 1)
        sweeps, converged = _cd_kernel(
            np.ascontiguousarray(Xs.T), y - y_mean, coef, col_nsq,
            float(self.alpha), float(self.tol), int(self.max_sweeps),
            objective_path,
        )
        objective_path = objective_path[: sweeps + 1]
        if not converged:
            warnings.warn(
                f"coordinate descent did not converge in {sweeps} sweeps",
                ConvergenceWarning,
            )

        self.coef_ = coef  # standardized-feature scale
        self.intercept_ = float(y_mean)
        self.n_sweeps_ = int(sweeps)
        self.converged_ = bool(converged)
        self.objective_path_ = objective_path
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        Xs = (X - self.feature_mean_) / self.feature_scale_
        return self.intercept_ + Xs @ self.coef_

    @property
    def coef_original_(self):
        """Coefficients expressed on the unstandardized feature scale."""
        return self.coef_ / self.feature_scale_


def loocv_mse(X, y, alpha, tol=1e-6, max_sweeps=10_000) -> float:
    """Leave-one-out MSE of the lasso at a fixed alpha.

    Standardization happens inside each training fold (no leakage into the
    held-out row).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if n < 3:
        raise InsufficientData("LOOCV needs at least 3 rows")
    model = CoordinateDescentLasso(
        alpha=alpha, tol=tol, max_sweeps=max_sweeps, warm_start=True
    )
    errors = np.empty(n)
    for i in range(n):
        mask = np.arange(n) != i
        model.fit(X[mask], y[mask])
        errors[i] = model.predict(X[i : i + 1])[0] - y[i]
    return float(np.mean(errors**2))


def select_alpha(X, y, grid=None) -> float:
    """Alpha from the grid minimizing LOOCV MSE; ties go to the larger alpha."""
    if grid is None:
        grid = DEFAULT_ALPHA_GRID
    grid = sorted(set(float(a) for a in np.asarray(grid, dtype=float)), reverse=True)
    best_alpha = None
    best_mse = np.inf
    for alpha in grid:  # descending, so ties keep the larger alpha
        mse = loocv_mse(X, y, alpha)
        if mse < best_mse:
            best_mse = mse
            best_alpha = alpha
    return best_alpha
