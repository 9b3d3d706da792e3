"""Evaluation protocol: bound coverage, LOOCV metrics, k-fold stability,
confidence stratification, and machine-readable report tables.

LOOCV protocol for the learned models: for each candidate alpha, every
held-out recipe is predicted by a model fit (and standardized) on the other
n-1 recipes; the alpha minimizing LOOCV MSE per dimension is selected and its
held-out predictions are the reported ones. Alpha selection is shared across
folds (non-nested), ties break toward the larger alpha.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .bounds import BoundsConfig, recipe_bounds, sweep_d
from .chemistry import DEFAULT_LEXICON
from .dataset import DIMENSIONS, Corpus
from .errors import InsufficientData, NoGroundTruth
from .hybrid import HYBRID, LASSO_5D, LASSO_115, FeatureTable, TasteRegressor
from .lasso import DEFAULT_ALPHA_GRID, CoordinateDescentLasso

HS_MIDPOINT = "hs_midpoint"
RV_VOIGT = "rv_voigt"

EVAL_MODEL_KINDS = (HS_MIDPOINT, RV_VOIGT, LASSO_5D, HYBRID, LASSO_115)
LEARNED_KINDS = (LASSO_5D, HYBRID, LASSO_115)

AVG_4D = "AVG_4D"
AVG_4D_DIMS = ("sweet", "sour", "umami", "salt")  # bitterness floor effect

BELOW, IN, ABOVE = "BELOW", "IN", "ABOVE"
_COVERAGE_TOL = 1e-9


@dataclass(frozen=True)
class CoverageRecord:
    recipe_id: str
    dimension: str
    actual: float
    hs_lower: float
    hs_upper: float
    classification: str


@dataclass(frozen=True)
class MetricRow:
    model_name: str
    dimension: str
    mae: float
    rmse: float
    pcc: Optional[float]  # None when undefined (zero-variance inputs)
    bias: float  # mean(predicted - actual)
    r2: Optional[float]
    n: int


def pearson(x, y) -> Optional[float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or np.std(x) == 0.0 or np.std(y) == 0.0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def metric_row(model_name, dimension, predicted, actual) -> MetricRow:
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    residual = predicted - actual
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    r2 = 1.0 - float(np.sum(residual**2)) / ss_tot if ss_tot > 0 else None
    return MetricRow(
        model_name=model_name,
        dimension=dimension,
        mae=float(np.mean(np.abs(residual))),
        rmse=float(np.sqrt(np.mean(residual**2))),
        pcc=pearson(predicted, actual),
        bias=float(np.mean(residual)),
        r2=r2,
        n=len(actual),
    )


def average_4d_row(model_name, rows) -> MetricRow:
    """Mean of the per-dimension metrics over sweet/sour/umami/salt."""
    picked = [r for r in rows if r.dimension in AVG_4D_DIMS]
    pccs = [r.pcc for r in picked if r.pcc is not None]
    return MetricRow(
        model_name=model_name,
        dimension=AVG_4D,
        mae=float(np.mean([r.mae for r in picked])),
        rmse=float(np.mean([r.rmse for r in picked])),
        pcc=float(np.mean(pccs)) if pccs else None,
        bias=float(np.mean([r.bias for r in picked])),
        r2=None,
        n=picked[0].n if picked else 0,
    )


# -- bound coverage --------------------------------------------------------


def coverage_records(corpus: Corpus, cfg: BoundsConfig = BoundsConfig()):
    recipes = corpus.with_ground_truth()
    if not recipes:
        raise NoGroundTruth("coverage requires ground-truth recipes")
    records = []
    for recipe in recipes:
        result = recipe_bounds(recipe, corpus, cfg)
        for dim in DIMENSIONS:
            b = result.dimension(dim)
            actual = getattr(recipe.ground_truth, dim)
            if actual < b.hs_lower - _COVERAGE_TOL:
                cls = BELOW
            elif actual > b.hs_upper + _COVERAGE_TOL:
                cls = ABOVE
            else:
                cls = IN
            records.append(
                CoverageRecord(recipe.recipe_id, dim, actual,
                               b.hs_lower, b.hs_upper, cls)
            )
    return records


def coverage_table(corpus: Corpus, cfg: BoundsConfig = BoundsConfig()) -> dict:
    """Percent BELOW/IN/ABOVE per dimension plus the pooled overall row."""
    records = coverage_records(corpus, cfg)
    table = {}
    for scope in [*DIMENSIONS, "overall"]:
        subset = [r for r in records if scope == "overall" or r.dimension == scope]
        n = len(subset)
        table[scope] = {
            "below_pct": 100.0 * sum(r.classification == BELOW for r in subset) / n,
            "in_pct": 100.0 * sum(r.classification == IN for r in subset) / n,
            "above_pct": 100.0 * sum(r.classification == ABOVE for r in subset) / n,
            "n": n,
        }
    return table


# -- cross-validated predictions ------------------------------------------


def _cv_path_predict(X, y, fold_of, n_folds, grid):
    """Cross-validated predictions per alpha; returns (alpha, predictions).

    fold_of[i] gives row i's fold. For each alpha the held-out rows of every
    fold are predicted by a model fit on the remaining folds only. The alpha
    minimizing CV MSE wins, ties toward the larger alpha.
    """
    grid = sorted(set(float(a) for a in np.asarray(grid, dtype=float)), reverse=True)
    n = len(y)
    preds = np.empty((len(grid), n))
    for fold in range(n_folds):
        held = fold_of == fold
        model = CoordinateDescentLasso(warm_start=True)
        for a_idx, alpha in enumerate(grid):
            model.alpha = alpha
            model.fit(X[~held], y[~held])
            preds[a_idx, held] = model.predict(X[held])
    mse = np.mean((preds - y) ** 2, axis=1)
    best = int(np.argmin(mse))  # first minimum = largest alpha on ties
    return grid[best], preds[best]


def cv_predictions(corpus: Corpus, model_kind: str, fold_of=None, n_folds=None,
                   cfg: BoundsConfig = BoundsConfig(), lexicon=DEFAULT_LEXICON,
                   alpha_grid=None) -> dict:
    """Held-out predictions for every ground-truth recipe.

    Default folds are leave-one-out. HS/RV need no training and ignore folds.
    Returns {"recipes", "predicted" (n x 5), "actual" (n x 5), "alphas"}.
    """
    recipes = corpus.with_ground_truth()
    n = len(recipes)
    if n < 3:
        raise InsufficientData(f"evaluation needs >= 3 ground-truth recipes, got {n}")
    if alpha_grid is None:
        alpha_grid = DEFAULT_ALPHA_GRID
    table = FeatureTable(corpus, recipes, cfg, lexicon)
    actual = table.actual
    if model_kind == HS_MIDPOINT:
        return {"recipes": recipes, "predicted": table.hs_mid.copy(),
                "actual": actual, "alphas": None}
    if model_kind == RV_VOIGT:
        return {"recipes": recipes, "predicted": table.voigt.copy(),
                "actual": actual, "alphas": None}
    if model_kind not in LEARNED_KINDS:
        raise ValueError(f"unknown model kind {model_kind!r}")

    if fold_of is None:
        fold_of = np.arange(n)
        n_folds = n
    template = TasteRegressor(kind=model_kind, epsilon=cfg.epsilon, d=cfg.d,
                              lexicon=lexicon)
    union = corpus.ingredient_union()
    predicted = np.empty((n, 5))
    alphas = {}
    for j, dim in enumerate(DIMENSIONS):
        X, y = template.design_for(table, j, union)
        offset = template.prediction_offset(table, j)
        alpha, preds = _cv_path_predict(X, y, fold_of, n_folds, alpha_grid)
        predicted[:, j] = preds + offset
        alphas[dim] = alpha
    return {"recipes": recipes, "predicted": predicted, "actual": actual,
            "alphas": alphas}


def loocv_evaluate(corpus: Corpus, model_kind: str,
                   cfg: BoundsConfig = BoundsConfig(),
                   lexicon=DEFAULT_LEXICON, alpha_grid=None) -> list[MetricRow]:
    """Per-dimension MetricRows plus the AVG_4D summary row."""
    out = cv_predictions(corpus, model_kind, cfg=cfg, lexicon=lexicon,
                         alpha_grid=alpha_grid)
    rows = [
        metric_row(model_kind, dim, out["predicted"][:, j], out["actual"][:, j])
        for j, dim in enumerate(DIMENSIONS)
    ]
    rows.append(average_4d_row(model_kind, rows))
    return rows


def kfold_evaluate(corpus: Corpus, model_kind: str, k: int = 10,
                   n_repeats: int = 5, seed: int = 42,
                   cfg: BoundsConfig = BoundsConfig(),
                   lexicon=DEFAULT_LEXICON, alpha_grid=None) -> dict:
    """Mean and standard deviation of the avg(4D) MAE over repeated random
    k-fold splits (stratification-free, seeded)."""
    recipes = corpus.with_ground_truth()
    n = len(recipes)
    if n < k:
        raise InsufficientData(f"{n} recipes < k={k}")
    rng = np.random.default_rng(seed)
    maes = []
    for _ in range(n_repeats):
        fold_of = np.repeat(np.arange(k), -(-n // k))[:n]
        rng.shuffle(fold_of)
        out = cv_predictions(corpus, model_kind, fold_of=fold_of, n_folds=k,
                             cfg=cfg, lexicon=lexicon, alpha_grid=alpha_grid)
        rows = [
            metric_row(model_kind, dim, out["predicted"][:, j], out["actual"][:, j])
            for j, dim in enumerate(DIMENSIONS)
        ]
        maes.append(average_4d_row(model_kind, rows).mae)
    return {"model_name": model_kind, "k": k, "n_repeats": n_repeats,
            "seed": seed, "mae_mean": float(np.mean(maes)),
            "mae_sd": float(np.std(maes)), "mae_per_repeat": maes}


def stratify_by_confidence(corpus: Corpus, model_kind: str,
                           cfg: BoundsConfig = BoundsConfig(),
                           lexicon=DEFAULT_LEXICON, alpha_grid=None) -> list[MetricRow]:
    """AVG_4D LOOCV metrics grouped by recipe confidence tier; empty tiers
    are reported with n=0."""
    out = cv_predictions(corpus, model_kind, cfg=cfg, lexicon=lexicon,
                         alpha_grid=alpha_grid)
    rows = []
    for tier in ("HIGH", "MODERATE", "LOW"):
        idx = [i for i, r in enumerate(out["recipes"]) if r.confidence.value == tier]
        if not idx:
            rows.append(MetricRow(model_kind, f"{tier}/{AVG_4D}", float("nan"),
                                  float("nan"), None, float("nan"), None, 0))
            continue
        dim_rows = [
            metric_row(model_kind, dim,
                       out["predicted"][idx, j], out["actual"][idx, j])
            for j, dim in enumerate(DIMENSIONS)
        ]
        avg = average_4d_row(model_kind, dim_rows)
        rows.append(MetricRow(model_kind, f"{tier}/{AVG_4D}", avg.mae, avg.rmse,
                              avg.pcc, avg.bias, None, len(idx)))
    return rows


def constant_baseline(corpus: Corpus, dimension: str, c: float) -> float:
    """MAE of the constant predictor c on one dimension."""
    recipes = corpus.with_ground_truth()
    if not recipes:
        raise NoGroundTruth("constant baseline requires ground truth")
    actual = np.array([getattr(r.ground_truth, dimension) for r in recipes])
    return float(np.mean(np.abs(actual - c)))


# -- report assembly -------------------------------------------------------


def _round(value, places):
    return None if value is None else round(value, places)


def rendered_metric(row: MetricRow) -> dict:
    """Paper-style rounding for display; raw values stay in the JSON."""
    return {
        "model_name": row.model_name,
        "dimension": row.dimension,
        "mae": _round(row.mae, 1),
        "pcc": "n/a" if row.pcc is None else round(row.pcc, 2),
        "bias": _round(row.bias, 1),
        "n": row.n,
    }


def build_report(corpus: Corpus, models=EVAL_MODEL_KINDS,
                 cfg: BoundsConfig = BoundsConfig(), lexicon=DEFAULT_LEXICON,
                 seed: int = 42, d_values=(2, 3, 5, 10, 50),
                 alpha_grid=None, kfold: bool = False) -> dict:
    """Single JSON document with coverage, metric, stratification, and sweep
    tables."""
    metrics = []
    stratified = []
    for kind in models:
        metrics.extend(loocv_evaluate(corpus, kind, cfg, lexicon, alpha_grid))
        stratified.extend(stratify_by_confidence(corpus, kind, cfg, lexicon,
                                                 alpha_grid))
    report = {
        "seed": seed,
        "bounds_config": {"epsilon": cfg.epsilon, "d": cfg.d},
        "n_recipes": len(corpus.recipes),
        "n_ground_truth": len(corpus.with_ground_truth()),
        "n_skipped_no_ground_truth":
            len(corpus.recipes) - len(corpus.with_ground_truth()),
        "coverage": coverage_table(corpus, cfg),
        "metrics": [asdict(r) for r in metrics],
        "metrics_rendered": [rendered_metric(r) for r in metrics],
        "stratified": [asdict(r) for r in stratified],
        "d_sweep": sweep_d(corpus, d_values, cfg),
        "constant_bitter_baseline_mae": constant_baseline(corpus, "bitter", 2.0),
    }
    if kfold:
        report["kfold"] = [
            kfold_evaluate(corpus, kind, seed=seed, cfg=cfg, lexicon=lexicon,
                           alpha_grid=alpha_grid)
            for kind in models if kind in LEARNED_KINDS
        ]
    return report


def report_to_json_bytes(report: dict) -> bytes:
    return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode()


def write_report(report: dict, out_dir) -> None:
    """report.json plus CSV mirrors of the metric and coverage tables."""
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(report_to_json_bytes(report))
    with open(out / "metrics.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=[
            "model_name", "dimension", "mae", "rmse", "pcc", "bias", "r2", "n"])
        writer.writeheader()
        writer.writerows(report["metrics"])
    with open(out / "coverage.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["dimension", "below_pct", "in_pct", "above_pct", "n"])
        for scope, row in report["coverage"].items():
            writer.writerow([scope, row["below_pct"], row["in_pct"],
                             row["above_pct"], row["n"]])
    with open(out / "d_sweep.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["d", "fraction_above_upper"])
        for row in report["d_sweep"]:
            writer.writerow([row["d"], row["fraction_above_upper"]])
