import json

import pytest

from tastecomposite.dataset import (
    Confidence,
    TasteVector,
    corpus_from_json,
    corpus_to_json,
    load_corpus,
    renormalize,
    save_corpus,
    slugify,
)
from tastecomposite.errors import (
    DegenerateInput,
    ParseError,
    UnknownIngredient,
    ValidationError,
)
from tastecomposite.synthetic import synthetic_corpus

from conftest import make_corpus, make_ingredient, make_recipe

INGREDIENT_HEADER = "ingredient_id,display_name,sweet,sour,bitter,umami,salt,source_tier"
RECIPE_HEADER = ("recipe_id,recipe_name,confidence,ingredient_id,mass_fraction,"
                 "gt_sweet,gt_sour,gt_bitter,gt_umami,gt_salt")


def write_corpus_files(tmp_path, ingredient_rows, recipe_rows):
    ing = tmp_path / "ingredients.csv"
    rec = tmp_path / "recipes.csv"
    ing.write_text("\n".join([INGREDIENT_HEADER, *ingredient_rows]) + "\n")
    rec.write_text("\n".join([RECIPE_HEADER, *recipe_rows]) + "\n")
    return ing, rec


def test_single_ingredient_identity_load(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED"],
        ["R1,Plain water,HIGH,water,1.0,,,,,"],
    )
    corpus = load_corpus(ing, rec)
    assert len(corpus.recipes) == 1
    recipe = corpus.recipes[0]
    assert recipe.components == (("water", 1.0),)
    assert recipe.ground_truth is None
    assert recipe.confidence is Confidence.HIGH


def test_fraction_sum_outside_tolerance_names_recipe(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED", "salt,Salt,0,0,0,0,95,ESTIMATED"],
        [
            "R9,Bad soup,HIGH,water,0.5,,,,,",
            "R9,Bad soup,HIGH,salt,0.45,,,,,",
        ],
    )
    with pytest.raises(ValidationError, match="R9"):
        load_corpus(ing, rec)


def test_ketchup_fixture_tomato_fraction(tmp_path):
    rows = [
        "RP68,Ketchup,HIGH,tomato,0.60,28,22,2,22,32",
        "RP68,Ketchup,HIGH,sugar,0.15,28,22,2,22,32",
        "RP68,Ketchup,HIGH,water,0.10,28,22,2,22,32",
        "RP68,Ketchup,HIGH,vinegar,0.06,28,22,2,22,32",
        "RP68,Ketchup,HIGH,starch,0.05,28,22,2,22,32",
        "RP68,Ketchup,HIGH,salt,0.02,28,22,2,22,32",
        "RP68,Ketchup,HIGH,spices,0.02,28,22,2,22,32",
    ]
    ingredients = [
        f"{i},{i.title()},0,0,0,0,0,PUBLISHED"
        for i in ["tomato", "sugar", "water", "vinegar", "starch", "salt", "spices"]
    ]
    ing, rec = write_corpus_files(tmp_path, ingredients, rows)
    corpus = load_corpus(ing, rec)
    recipe = corpus.recipe("RP68")
    assert len(recipe.components) == 7
    assert dict(recipe.components)["tomato"] == pytest.approx(0.60, abs=1e-12)
    assert recipe.ground_truth.umami == 22


def test_unknown_ingredient_rejected(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED"],
        ["R1,Mystery,HIGH,kryptonite,1.0,,,,,"],
    )
    with pytest.raises(UnknownIngredient, match="kryptonite"):
        load_corpus(ing, rec)


def test_score_out_of_range_names_ingredient(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path, ["sugar,Sugar,120,0,0,0,0,ESTIMATED"], []
    )
    with pytest.raises(ValidationError, match="sugar"):
        load_corpus(ing, rec)


def test_non_numeric_fraction_reports_line(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED"],
        ["R1,Water,HIGH,water,lots,,,,,"],
    )
    with pytest.raises(ParseError, match="line 2"):
        load_corpus(ing, rec)


def test_disagreeing_ground_truth_rows_rejected(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED", "salt,Salt,0,0,0,0,95,ESTIMATED"],
        [
            "R2,Brine,HIGH,water,0.9,1,0,0,0,20",
            "R2,Brine,HIGH,salt,0.1,1,0,0,0,25",
        ],
    )
    with pytest.raises(ValidationError, match="R2"):
        load_corpus(ing, rec)


def test_tolerated_sum_is_silently_renormalized(tmp_path):
    ing, rec = write_corpus_files(
        tmp_path,
        ["water,Water,0,0,0,0,0,ESTIMATED", "salt,Salt,0,0,0,0,95,ESTIMATED"],
        [
            "R3,Brine,HIGH,water,0.9,,,,,",
            "R3,Brine,HIGH,salt,0.0995,,,,,",
        ],
    )
    corpus = load_corpus(ing, rec)
    assert sum(corpus.recipes[0].fractions) == pytest.approx(1.0, abs=1e-12)


def test_csv_round_trip(tmp_path):
    corpus = synthetic_corpus(n_recipes=8, seed=3)
    save_corpus(corpus, tmp_path / "i.csv", tmp_path / "r.csv")
    reloaded = load_corpus(tmp_path / "i.csv", tmp_path / "r.csv")
    assert reloaded.ingredients == corpus.ingredients
    assert reloaded.recipes == corpus.recipes


def test_json_round_trip():
    corpus = synthetic_corpus(n_recipes=6, seed=4)
    blob = json.dumps(corpus_to_json(corpus))
    reloaded = corpus_from_json(json.loads(blob))
    assert reloaded.ingredients == corpus.ingredients
    assert reloaded.recipes == corpus.recipes


def test_slugify():
    assert slugify("  Soy  Sauce ") == "soy-sauce"
    assert slugify("stock_cube") == "stock-cube"


def test_renormalize_examples():
    assert renormalize([0.5, 0.5]) == [0.5, 0.5]
    assert renormalize([2, 2]) == [0.5, 0.5]
    out = renormalize([0.3, 0.1, 0.1])
    assert out == pytest.approx([0.6, 0.2, 0.2], abs=1e-12)


def test_renormalize_idempotent():
    import numpy as np

    rng = np.random.default_rng(5)
    for _ in range(50):
        x = rng.uniform(0, 10, size=rng.integers(1, 9)).tolist()
        once = renormalize(x)
        twice = renormalize(once)
        assert max(abs(a - b) for a, b in zip(once, twice)) < 1e-12
        assert abs(sum(once) - 1.0) < 1e-12


def test_renormalize_degenerate():
    with pytest.raises(DegenerateInput):
        renormalize([0.0, 0.0])


def test_taste_vector_rejects_non_finite():
    with pytest.raises(ValidationError):
        TasteVector(sweet=float("nan"), sour=0, bitter=0, umami=0, salt=0)


def test_corpus_requires_referential_integrity():
    water = make_ingredient("water")
    recipe = make_recipe("R1", [("water", 0.5), ("ghost", 0.5)])
    with pytest.raises(UnknownIngredient):
        make_corpus([water], [recipe])
