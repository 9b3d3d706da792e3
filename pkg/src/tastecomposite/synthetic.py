"""Synthetic corpus generator.

The reference corpus behind the published evaluation numbers is not
redistributable, so this module builds structurally faithful stand-ins: a
fixed pool of plausible ingredients, randomized multi-component recipes with
ground truth generated as bound midpoint plus chemistry-driven amplification
plus noise, and the three named reformulation fixtures (RP14 pea soup, RP55
chocolate spread, RP68 ketchup).
"""

from __future__ import annotations

import numpy as np

from .bounds import BoundsConfig, recipe_bounds
from .chemistry import DEFAULT_LEXICON, features
from .dataset import (
    DIMENSIONS,
    Confidence,
    Corpus,
    IngredientTasteProfile,
    RecipeComposition,
    SourceTier,
    TasteVector,
    renormalize,
)

# (id, display name, sweet, sour, bitter, umami, salt)
_POOL = [
    ("water", "Water", 0, 0, 0, 0, 0),
    ("salt", "Salt", 0, 0, 0, 0, 95),
    ("sugar", "Sugar", 95, 0, 0, 0, 0),
    ("honey", "Honey", 85, 3, 0, 0, 0),
    ("tomato", "Tomato", 15, 20, 2, 25, 3),
    ("onion", "Onion", 18, 4, 3, 10, 1),
    ("garlic", "Garlic", 6, 2, 8, 14, 1),
    ("leek", "Leek", 10, 2, 4, 8, 1),
    ("pork", "Pork", 2, 1, 2, 22, 8),
    ("beef", "Beef", 1, 1, 3, 26, 7),
    ("chicken", "Chicken", 2, 1, 1, 18, 5),
    ("fish", "Fish", 1, 2, 1, 24, 9),
    ("green-peas", "Green peas", 12, 2, 3, 10, 2),
    ("lentils", "Lentils", 4, 2, 4, 9, 1),
    ("potato", "Potato", 4, 1, 2, 6, 1),
    ("carrot", "Carrot", 22, 3, 2, 5, 1),
    ("celery", "Celery", 5, 3, 6, 7, 4),
    ("milk-powder", "Milk powder", 28, 2, 1, 6, 3),
    ("cheese", "Cheese", 4, 10, 3, 35, 30),
    ("yoghurt", "Yoghurt", 12, 25, 1, 4, 2),
    ("hazelnut", "Hazelnut", 8, 1, 6, 5, 0),
    ("cocoa", "Cocoa", 2, 3, 55, 4, 0),
    ("sunflower-oil", "Sunflower oil", 0, 0, 1, 0, 0),
    ("butter", "Butter", 4, 1, 1, 3, 6),
    ("vinegar", "Vinegar", 1, 75, 1, 1, 1),
    ("mustard", "Mustard", 4, 30, 8, 6, 25),
    ("soy-sauce", "Soy sauce", 4, 8, 4, 55, 70),
    ("starch", "Starch", 1, 0, 0, 0, 0),
    ("spices", "Spices", 3, 2, 12, 4, 1),
    ("bouillon", "Bouillon", 2, 1, 2, 30, 45),
    ("wine", "Wine", 6, 25, 4, 3, 0),
    ("stock", "Stock", 2, 1, 1, 12, 10),
]

# Chemistry amplification used to fabricate ground truth, loosely shaped like
# the reported correction structure (salt amplified by salt fraction and
# concentration, umami by water/allium, sweetness by sugar fraction).
_AMPLIFICATION = {
    "sweet": lambda phi, voigt: 0.55 * voigt["sweet"] + 18.0 * phi.phi_sugar
    + 1.5 * phi.phi_concentration,
    "sour": lambda phi, voigt: 0.45 * voigt["sour"] + 9.0 * phi.phi_fermented
    + 0.8 * phi.phi_concentration,
    "bitter": lambda phi, voigt: 0.05 * voigt["bitter"],
    "umami": lambda phi, voigt: 0.5 * voigt["umami"] + 9.0 * phi.phi_water
    + 14.0 * phi.phi_allium + 6.0 * phi.phi_protein,
    "salt": lambda phi, voigt: 0.7 * voigt["salt"] + 30.0 * phi.phi_salt
    + 4.0 * phi.phi_concentration + 8.0 * phi.phi_fermented,
}

_CASE_FIXTURES = [
    # (recipe_id, name, components, ground truth)
    (
        "RP14", "Pea soup",
        [("water", 0.545), ("green-peas", 0.24), ("pork", 0.09),
         ("carrot", 0.03), ("onion", 0.02), ("potato", 0.02),
         ("celery", 0.01), ("leek", 0.01), ("salt", 0.01),
         ("sunflower-oil", 0.01), ("bouillon", 0.005), ("spices", 0.01)],
        TasteVector(sweet=8, sour=4, bitter=2, umami=21, salt=44),
    ),
    (
        "RP55", "Chocolate-hazelnut spread",
        [("sugar", 0.50), ("sunflower-oil", 0.18), ("hazelnut", 0.13),
         ("milk-powder", 0.09), ("cocoa", 0.07), ("butter", 0.02),
         ("spices", 0.01)],
        TasteVector(sweet=63, sour=2, bitter=5, umami=4, salt=6),
    ),
    (
        "RP68", "Tomato ketchup",
        [("tomato", 0.60), ("sugar", 0.15), ("water", 0.10),
         ("vinegar", 0.06), ("starch", 0.05), ("salt", 0.02),
         ("spices", 0.02)],
        TasteVector(sweet=28, sour=22, bitter=2, umami=22, salt=32),
    ),
]


def ingredient_pool() -> dict[str, IngredientTasteProfile]:
    pool = {}
    for ingredient_id, name, *scores in _POOL:
        pool[ingredient_id] = IngredientTasteProfile(
            ingredient_id=ingredient_id,
            display_name=name,
            taste=TasteVector(*[float(s) for s in scores]),
            source_tier=SourceTier.ESTIMATED,
        )
    return pool


def _ground_truth(recipe, corpus, rng, noise_sd):
    result = recipe_bounds(recipe, corpus, BoundsConfig())
    phi = features(recipe, corpus, DEFAULT_LEXICON)
    voigt = {dim: result.dimension(dim).voigt for dim in DIMENSIONS}
    scores = {}
    for dim in DIMENSIONS:
        base = result.dimension(dim).hs_midpoint
        value = base + _AMPLIFICATION[dim](phi, voigt)
        if noise_sd > 0:
            value += rng.normal(0.0, noise_sd)
        scores[dim] = float(np.clip(value, 0.0, 100.0))
    return TasteVector(**scores)


def synthetic_corpus(n_recipes: int = 70, seed: int = 42, noise_sd: float = 2.0,
                     include_case_fixtures: bool = True) -> Corpus:
    """Randomized corpus with fabricated but structured ground truth."""
    rng = np.random.default_rng(seed)
    ingredients = ingredient_pool()
    base = Corpus(ingredients=ingredients)
    pool_ids = list(ingredients)

    recipes = []
    if include_case_fixtures:
        for recipe_id, name, components, gt in _CASE_FIXTURES:
            recipes.append(RecipeComposition(
                recipe_id=recipe_id,
                name=name,
                components=tuple(components),
                confidence=Confidence.HIGH,
                ground_truth=gt,
            ))

    tiers = [Confidence.HIGH, Confidence.MODERATE, Confidence.LOW]
    tier_p = [0.31, 0.60, 0.09]  # roughly the published 22/42/6 split
    index = len(recipes)
    while len(recipes) < n_recipes:
        k = int(rng.integers(3, 10))
        chosen = rng.choice(pool_ids, size=k, replace=False)
        fractions = renormalize(rng.dirichlet(np.full(k, 1.2)))
        recipe = RecipeComposition(
            recipe_id=f"SR{index:03d}",
            name=f"Synthetic recipe {index}",
            components=tuple(zip((str(c) for c in chosen), fractions)),
            confidence=tiers[int(rng.choice(3, p=tier_p))],
            ground_truth=None,
        )
        recipe = RecipeComposition(
            recipe_id=recipe.recipe_id,
            name=recipe.name,
            components=recipe.components,
            confidence=recipe.confidence,
            ground_truth=_ground_truth(recipe, base, rng, noise_sd),
        )
        recipes.append(recipe)
        index += 1
    return Corpus(ingredients=ingredients, recipes=tuple(recipes))


def planted_corpus(n_recipes: int = 40, seed: int = 0,
                   coefficient: float = 5.0) -> Corpus:
    """Noiseless corpus where actual = hs_midpoint + coefficient * phi_salt.

    Used for coefficient-recovery checks of the hybrid training path.
    """
    rng = np.random.default_rng(seed)
    ingredients = ingredient_pool()
    base = Corpus(ingredients=ingredients)
    pool_ids = list(ingredients)
    recipes = []
    for index in range(n_recipes):
        k = int(rng.integers(3, 8))
        chosen = rng.choice(pool_ids, size=k, replace=False)
        fractions = renormalize(rng.dirichlet(np.full(k, 1.2)))
        recipe = RecipeComposition(
            recipe_id=f"PL{index:03d}",
            name=f"Planted recipe {index}",
            components=tuple(zip((str(c) for c in chosen), fractions)),
            confidence=Confidence.HIGH,
            ground_truth=None,
        )
        result = recipe_bounds(recipe, base, BoundsConfig())
        phi = features(recipe, base, DEFAULT_LEXICON)
        scores = {
            dim: float(np.clip(
                result.dimension(dim).hs_midpoint + coefficient * phi.phi_salt,
                0.0, 100.0,
            ))
            for dim in DIMENSIONS
        }
        recipes.append(RecipeComposition(
            recipe_id=recipe.recipe_id,
            name=recipe.name,
            components=recipe.components,
            confidence=recipe.confidence,
            ground_truth=TasteVector(**scores),
        ))
    return Corpus(ingredients=ingredients, recipes=tuple(recipes))
