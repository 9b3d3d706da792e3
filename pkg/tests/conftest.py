import numpy as np
import pytest

from tastecomposite.dataset import (
    Confidence,
    Corpus,
    IngredientTasteProfile,
    RecipeComposition,
    SourceTier,
    TasteVector,
)
from tastecomposite.hybrid import TasteRegressor
from tastecomposite.synthetic import planted_corpus, synthetic_corpus


def make_ingredient(ingredient_id, sweet=0, sour=0, bitter=0, umami=0, salt=0,
                    name=None):
    return IngredientTasteProfile(
        ingredient_id=ingredient_id,
        display_name=name or ingredient_id.replace("-", " ").title(),
        taste=TasteVector(sweet=sweet, sour=sour, bitter=bitter,
                          umami=umami, salt=salt),
        source_tier=SourceTier.ESTIMATED,
    )


def make_recipe(recipe_id, components, ground_truth=None,
                confidence=Confidence.HIGH, name=None):
    return RecipeComposition(
        recipe_id=recipe_id,
        name=name or recipe_id,
        components=tuple(components),
        confidence=confidence,
        ground_truth=ground_truth,
    )


def make_corpus(ingredients, recipes):
    return Corpus(
        ingredients={i.ingredient_id: i for i in ingredients},
        recipes=tuple(recipes),
    )


def random_mixture(rng, n_min=2, n_max=12, score_max=100.0):
    n = int(rng.integers(n_min, n_max + 1))
    T = rng.uniform(0.0, score_max, size=n)
    v = rng.dirichlet(np.ones(n))
    return T, v


@pytest.fixture(scope="session")
def small_corpus():
    return synthetic_corpus(n_recipes=20, seed=11, noise_sd=1.5)


@pytest.fixture(scope="session")
def fitted_hybrid(small_corpus):
    return TasteRegressor(kind="hybrid").fit(small_corpus)


@pytest.fixture(scope="session")
def planted():
    return planted_corpus(n_recipes=40, seed=0, coefficient=5.0)
