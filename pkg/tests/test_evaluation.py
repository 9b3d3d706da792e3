import json

import numpy as np
import pytest

from tastecomposite.bounds import recipe_bounds
from tastecomposite.dataset import DIMENSIONS, Confidence, TasteVector
from tastecomposite.errors import InsufficientData, NoGroundTruth
from tastecomposite.evaluation import (
    AVG_4D,
    HS_MIDPOINT,
    HYBRID,
    RV_VOIGT,
    average_4d_row,
    build_report,
    constant_baseline,
    coverage_records,
    coverage_table,
    cv_predictions,
    kfold_evaluate,
    loocv_evaluate,
    metric_row,
    pearson,
    rendered_metric,
    report_to_json_bytes,
    stratify_by_confidence,
    write_report,
)
from tastecomposite.synthetic import synthetic_corpus

from conftest import make_corpus, make_ingredient, make_recipe

SMALL_GRID = [0.01, 0.1, 1.0]


def test_pearson():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert pearson([1, 1, 1], [1, 2, 3]) is None
    assert pearson([2], [5]) is None


def test_metric_row_values():
    row = metric_row("m", "sweet", [1.0, 3.0], [2.0, 2.0])
    assert row.mae == pytest.approx(1.0)
    assert row.rmse == pytest.approx(1.0)
    assert row.bias == pytest.approx(0.0)
    assert row.n == 2


def test_metric_row_perfect_prediction():
    row = metric_row("m", "salt", [1.0, 2.0, 4.0], [1.0, 2.0, 4.0])
    assert row.mae == 0.0
    assert row.pcc == pytest.approx(1.0)
    assert row.r2 == pytest.approx(1.0)


def test_average_4d_excludes_bitter():
    rows = [metric_row("m", d, [float(i)], [0.0])
            for i, d in enumerate(DIMENSIONS)]
    avg = average_4d_row("m", rows)
    assert avg.dimension == AVG_4D
    # bitter (index 2) is excluded: mean of 0, 1, 3, 4
    assert avg.mae == pytest.approx(2.0)


def _bracket_corpus():
    """Three two-ingredient recipes with ground truth placed below, inside,
    and above the HS bracket for every dimension."""
    a = make_ingredient("alpha", sweet=10, sour=20, bitter=5, umami=40, salt=6)
    b = make_ingredient("beta", sweet=30, sour=10, bitter=15, umami=20, salt=12)
    probe = make_recipe("P", [("alpha", 0.5), ("beta", 0.5)])
    result = recipe_bounds(probe, make_corpus([a, b], [probe]))

    def vec(pick):
        return TasteVector(**{d: pick(result.dimension(d)) for d in DIMENSIONS})

    recipes = [
        make_recipe("R-below", [("alpha", 0.5), ("beta", 0.5)],
                    ground_truth=vec(lambda x: max(x.hs_lower - 1, 0.0))),
        make_recipe("R-in", [("alpha", 0.5), ("beta", 0.5)],
                    ground_truth=vec(lambda x: x.hs_midpoint)),
        make_recipe("R-above", [("alpha", 0.5), ("beta", 0.5)],
                    ground_truth=vec(lambda x: x.hs_upper + 1)),
    ]
    return make_corpus([a, b], recipes)


def test_coverage_classification():
    corpus = _bracket_corpus()
    records = coverage_records(corpus)
    by_recipe = {}
    for record in records:
        by_recipe.setdefault(record.recipe_id, set()).add(record.classification)
    assert by_recipe["R-below"] == {"BELOW"}
    assert by_recipe["R-in"] == {"IN"}
    assert by_recipe["R-above"] == {"ABOVE"}


def test_coverage_boundary_counts_as_in():
    a = make_ingredient("alpha", sweet=10, sour=20, bitter=5, umami=40, salt=6)
    b = make_ingredient("beta", sweet=30, sour=10, bitter=15, umami=20, salt=12)
    probe = make_recipe("P", [("alpha", 0.5), ("beta", 0.5)])
    result = recipe_bounds(probe, make_corpus([a, b], [probe]))
    gt = TasteVector(**{d: result.dimension(d).hs_upper for d in DIMENSIONS})
    corpus = make_corpus(
        [a, b], [make_recipe("R", [("alpha", 0.5), ("beta", 0.5)],
                             ground_truth=gt)]
    )
    assert all(r.classification == "IN" for r in coverage_records(corpus))


def test_coverage_table_percentages():
    table = coverage_table(_bracket_corpus())
    overall = table["overall"]
    assert overall["n"] == 15
    assert overall["below_pct"] + overall["in_pct"] + overall["above_pct"] \
        == pytest.approx(100.0)
    assert table["sweet"]["n"] == 3
    assert table["sweet"]["in_pct"] == pytest.approx(100 / 3)


def test_coverage_requires_ground_truth():
    water = make_ingredient("water")
    corpus = make_corpus([water], [make_recipe("R", [("water", 1.0)])])
    with pytest.raises(NoGroundTruth):
        coverage_records(corpus)


def _voigt_truth_corpus(n=10, seed=30):
    """Ground truth equal to the Voigt average: RV_VOIGT is a zero-error
    oracle there."""
    base = synthetic_corpus(n_recipes=n, seed=seed, noise_sd=0.0,
                            include_case_fixtures=False)
    recipes = []
    for recipe in base.recipes:
        result = recipe_bounds(recipe, base)
        gt = TasteVector(**{d: result.dimension(d).voigt for d in DIMENSIONS})
        recipes.append(make_recipe(recipe.recipe_id, recipe.components,
                                   ground_truth=gt))
    return make_corpus(base.ingredients.values(), recipes)


def test_rv_voigt_self_oracle():
    corpus = _voigt_truth_corpus()
    rows = loocv_evaluate(corpus, RV_VOIGT)
    for row in rows:
        assert row.mae == pytest.approx(0.0, abs=1e-9)


def test_hs_midpoint_predictions_match_bounds(small_corpus):
    out = cv_predictions(small_corpus, HS_MIDPOINT)
    recipe = out["recipes"][0]
    result = recipe_bounds(recipe, small_corpus)
    for j, dim in enumerate(DIMENSIONS):
        assert out["predicted"][0, j] == pytest.approx(
            result.dimension(dim).hs_midpoint
        )


def test_loocv_hybrid_beats_constant_on_synthetic(small_corpus):
    rows = loocv_evaluate(small_corpus, HYBRID, alpha_grid=SMALL_GRID)
    avg = [r for r in rows if r.dimension == AVG_4D][0]
    assert avg.n == len(small_corpus.with_ground_truth())
    assert np.isfinite(avg.mae)
    assert avg.mae < 10


def test_cv_predictions_deterministic(small_corpus):
    a = cv_predictions(small_corpus, HYBRID, alpha_grid=SMALL_GRID)
    b = cv_predictions(small_corpus, HYBRID, alpha_grid=SMALL_GRID)
    assert np.array_equal(a["predicted"], b["predicted"])
    assert a["alphas"] == b["alphas"]


def test_kfold_with_k_equal_n_matches_loocv(small_corpus):
    n = len(small_corpus.with_ground_truth())
    loocv = loocv_evaluate(small_corpus, HYBRID, alpha_grid=SMALL_GRID)
    loocv_avg = [r for r in loocv if r.dimension == AVG_4D][0]
    out = kfold_evaluate(small_corpus, HYBRID, k=n, n_repeats=1, seed=0,
                         alpha_grid=SMALL_GRID)
    # with k = n every fold holds out exactly one recipe; the shuffle only
    # relabels folds, so the held-out predictions coincide with LOOCV
    assert out["mae_mean"] == pytest.approx(loocv_avg.mae, abs=1e-9)


def test_kfold_reproducible_by_seed(small_corpus):
    a = kfold_evaluate(small_corpus, HYBRID, k=5, n_repeats=2, seed=7,
                       alpha_grid=SMALL_GRID)
    b = kfold_evaluate(small_corpus, HYBRID, k=5, n_repeats=2, seed=7,
                       alpha_grid=SMALL_GRID)
    assert a["mae_per_repeat"] == b["mae_per_repeat"]
    c = kfold_evaluate(small_corpus, HYBRID, k=5, n_repeats=2, seed=8,
                       alpha_grid=SMALL_GRID)
    assert a["mae_per_repeat"] != c["mae_per_repeat"]


def test_kfold_requires_enough_recipes(small_corpus):
    with pytest.raises(InsufficientData):
        kfold_evaluate(small_corpus, HYBRID, k=1000)


def test_stratification_covers_all_tiers(small_corpus):
    rows = stratify_by_confidence(small_corpus, HS_MIDPOINT)
    tiers = {row.dimension.split("/")[0] for row in rows}
    assert tiers == {"HIGH", "MODERATE", "LOW"}
    total = sum(row.n for row in rows)
    assert total == len(small_corpus.with_ground_truth())


def test_stratification_empty_tier_has_zero_n():
    corpus = _voigt_truth_corpus(n=6, seed=31)
    # all recipes default to HIGH confidence
    rows = stratify_by_confidence(corpus, RV_VOIGT)
    by_tier = {row.dimension.split("/")[0]: row for row in rows}
    assert by_tier["HIGH"].n == 6
    assert by_tier["LOW"].n == 0
    assert np.isnan(by_tier["LOW"].mae)


def test_constant_baseline():
    a = make_ingredient("alpha")
    gts = [TasteVector(sweet=0, sour=0, bitter=b, umami=0, salt=0)
           for b in (0.0, 10.0)]
    corpus = make_corpus([a], [
        make_recipe(f"R{i}", [("alpha", 1.0)], ground_truth=gt)
        for i, gt in enumerate(gts)
    ])
    assert constant_baseline(corpus, "bitter", 5.0) == pytest.approx(5.0)
    assert constant_baseline(corpus, "bitter", 0.0) == pytest.approx(5.0)


def test_rendered_metric_rounding():
    row = metric_row("m", "sweet", [1.04, 2.0], [0.0, 0.0])
    rendered = rendered_metric(row)
    assert rendered["mae"] == round(row.mae, 1)
    assert rendered["bias"] == round(row.bias, 1)
    degenerate = metric_row("m", "salt", [1.0, 1.0], [0.0, 2.0])
    assert rendered_metric(degenerate)["pcc"] == "n/a"


def test_build_and_write_report(tmp_path, small_corpus):
    report = build_report(small_corpus, models=(HS_MIDPOINT, RV_VOIGT, HYBRID),
                          alpha_grid=SMALL_GRID)
    assert report["n_ground_truth"] == len(small_corpus.with_ground_truth())
    assert {row["model_name"] for row in report["metrics"]} \
        == {HS_MIDPOINT, RV_VOIGT, HYBRID}
    assert len(report["d_sweep"]) == 5

    write_report(report, tmp_path)
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk == json.loads(report_to_json_bytes(report))
    header = (tmp_path / "metrics.csv").read_text().splitlines()[0]
    assert header == "model_name,dimension,mae,rmse,pcc,bias,r2,n"
    assert (tmp_path / "coverage.csv").exists()
    assert (tmp_path / "d_sweep.csv").exists()


def test_report_bytes_stable(small_corpus):
    report = build_report(small_corpus, models=(HS_MIDPOINT,))
    assert report_to_json_bytes(report) == report_to_json_bytes(report)
    assert report_to_json_bytes(report).endswith(b"\n")
