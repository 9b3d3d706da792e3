import numpy as np
import pytest

from tastecomposite.bounds import recipe_bounds
from tastecomposite.chemistry import features
from tastecomposite.dataset import DIMENSIONS
from tastecomposite.synthetic import planted_corpus, synthetic_corpus


def test_case_fixtures_present_by_default():
    corpus = synthetic_corpus(n_recipes=70, seed=42)
    assert len(corpus.recipes) == 70
    for recipe_id in ("RP14", "RP55", "RP68"):
        recipe = corpus.recipe(recipe_id)
        assert recipe.ground_truth is not None
        assert sum(recipe.fractions) == pytest.approx(1.0, abs=1e-9)


def test_case_fixture_compositions():
    corpus = synthetic_corpus(n_recipes=10, seed=0)
    soup = dict(corpus.recipe("RP14").components)
    assert soup["green-peas"] == pytest.approx(0.24)
    spread = dict(corpus.recipe("RP55").components)
    assert spread["sugar"] == pytest.approx(0.50)
    ketchup = dict(corpus.recipe("RP68").components)
    assert ketchup["tomato"] == pytest.approx(0.60)


def test_fixtures_can_be_excluded():
    corpus = synthetic_corpus(n_recipes=12, seed=1, include_case_fixtures=False)
    assert len(corpus.recipes) == 12
    with pytest.raises(KeyError):
        corpus.recipe("RP14")


def test_seed_reproducibility():
    a = synthetic_corpus(n_recipes=15, seed=9)
    b = synthetic_corpus(n_recipes=15, seed=9)
    assert a.recipes == b.recipes
    c = synthetic_corpus(n_recipes=15, seed=10)
    assert a.recipes != c.recipes


def test_ground_truth_in_score_range():
    corpus = synthetic_corpus(n_recipes=40, seed=2, noise_sd=5.0)
    for recipe in corpus.with_ground_truth():
        for dim in DIMENSIONS:
            assert 0.0 <= getattr(recipe.ground_truth, dim) <= 100.0


def test_planted_corpus_is_exact():
    corpus = planted_corpus(n_recipes=10, seed=3, coefficient=5.0)
    for recipe in corpus.recipes:
        result = recipe_bounds(recipe, corpus)
        phi_salt = features(recipe, corpus).phi_salt
        for dim in DIMENSIONS:
            expected = result.dimension(dim).hs_midpoint + 5.0 * phi_salt
            assert getattr(recipe.ground_truth, dim) == pytest.approx(
                expected, abs=1e-9
            )


def test_planted_corpus_has_salt_variation():
    corpus = planted_corpus(n_recipes=30, seed=4)
    phi = [features(r, corpus).phi_salt for r in corpus.recipes]
    assert np.std(phi) > 0.01
