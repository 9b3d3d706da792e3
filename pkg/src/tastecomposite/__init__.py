"""Taste prediction and inverse formulation via composite-material bounds."""

from .bounds import BoundsConfig, BoundsResult, hs_bounds, recipe_bounds
from .chemistry import CategoryLexicon, ChemistryFeatures, classify, features
from .dataset import (
    Corpus,
    IngredientTasteProfile,
    RecipeComposition,
    TasteVector,
    load_corpus,
    renormalize,
)
from .hybrid import TasteRegressor
from .inverse import DEConfig, DesignProblem, DesignResult, design, repair

__version__ = "0.1.0"

__all__ = [
    "BoundsConfig", "BoundsResult", "CategoryLexicon", "ChemistryFeatures",
    "Corpus", "DEConfig", "DesignProblem", "DesignResult",
    "IngredientTasteProfile", "RecipeComposition", "TasteRegressor",
    "TasteVector", "classify", "design", "features", "hs_bounds",
    "load_corpus", "recipe_bounds", "renormalize", "repair",
]
