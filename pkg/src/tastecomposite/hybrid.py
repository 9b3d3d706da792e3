"""Per-dimension taste models: the chemistry-corrected hybrid and two Lasso
baselines.

The hybrid model predicts hs_midpoint + correction, where the correction is a
lasso-learned linear function of the Voigt bound and the eight chemistry
proxies (fit in residual form: target = actual - hs_midpoint). The baselines
regress the actual score directly on either the five RV-weighted taste scores
or the per-ingredient mass fractions over the corpus-wide ingredient union.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np
from sklearn.base import BaseEstimator

from .bounds import BoundsConfig, recipe_bounds
from .chemistry import DEFAULT_LEXICON, FEATURE_NAMES, CategoryLexicon, features
from .dataset import DIMENSIONS, Corpus, RecipeComposition, corpus_to_json
from .errors import InsufficientData
from .lasso import CoordinateDescentLasso, select_alpha

HYBRID = "hybrid"
LASSO_5D = "lasso_5d"
LASSO_115 = "lasso_115"

MODEL_KINDS = (HYBRID, LASSO_5D, LASSO_115)


def corpus_fingerprint(corpus: Corpus) -> str:
    blob = json.dumps(corpus_to_json(corpus), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class FeatureTable:
    """Cached forward features for a list of recipes: bound values per
    dimension plus the chemistry proxies."""

    def __init__(self, corpus, recipes, bounds_cfg, lexicon):
        n = len(recipes)
        self.recipes = list(recipes)
        self.hs_mid = np.empty((n, 5))
        self.voigt = np.empty((n, 5))
        self.phi = np.empty((n, 8))
        self.actual = np.full((n, 5), np.nan)
        for row, recipe in enumerate(recipes):
            result = recipe_bounds(recipe, corpus, bounds_cfg)
            for j, dim in enumerate(DIMENSIONS):
                b = result.dimension(dim)
                self.hs_mid[row, j] = b.hs_midpoint
                self.voigt[row, j] = b.voigt
                if recipe.ground_truth is not None:
                    self.actual[row, j] = getattr(recipe.ground_truth, dim)
            self.phi[row] = features(recipe, corpus, lexicon).as_tuple()


def fraction_matrix(recipes, ingredient_union) -> np.ndarray:
    """Per-ingredient mass-fraction design over a fixed ingredient ordering."""
    index = {ingredient: k for k, ingredient in enumerate(ingredient_union)}
    X = np.zeros((len(recipes), len(ingredient_union)))
    for row, recipe in enumerate(recipes):
        for ingredient_id, fraction in recipe.components:
            col = index.get(ingredient_id)
            if col is not None:
                X[row, col] += fraction
    return X


class TasteRegressor(BaseEstimator):
    """Five per-dimension lasso fits behind one fit/predict surface.

    Parameters
    ----------
    kind : "hybrid", "lasso_5d", or "lasso_115".
    epsilon, d : bound-computation knobs (see BoundsConfig).
    lexicon : chemistry keyword lexicon; default reconstruction used if None.
    alpha_grid : candidate alphas for per-dimension LOOCV selection; None uses
        the 30-value log grid.
    midpoint_as_feature : hybrid only; learn the HS-midpoint coefficient
        instead of fitting the residual form.
    clip : clamp predictions into [0, 100].
    """

    def __init__(self, kind=HYBRID, epsilon=0.01, d=3.0, lexicon=None,
                 alpha_grid=None, midpoint_as_feature=False, clip=False):
        self.kind = kind
        self.epsilon = epsilon
        self.d = d
        self.lexicon = lexicon
        self.alpha_grid = alpha_grid
        self.midpoint_as_feature = midpoint_as_feature
        self.clip = clip

    # -- design assembly ---------------------------------------------------

    def _bounds_cfg(self):
        return BoundsConfig(epsilon=self.epsilon, d=self.d)

    def _lexicon(self):
        return self.lexicon if self.lexicon is not None else DEFAULT_LEXICON

    def _feature_names(self, dim, ingredient_union):
        if self.kind == HYBRID:
            names = [f"voigt_{dim}", *FEATURE_NAMES]
            if self.midpoint_as_feature:
                names.insert(0, f"hs_midpoint_{dim}")
            return names
        if self.kind == LASSO_5D:
            return [f"voigt_{d}" for d in DIMENSIONS]
        return list(ingredient_union)

    def design_for(self, table: FeatureTable, dim_index: int,
                   ingredient_union=None):
        """Design matrix X and regression target y for one dimension.

        y rows are NaN for recipes without ground truth; callers mask them.
        """
        actual = table.actual[:, dim_index]
        if self.kind == HYBRID:
            X = np.column_stack([table.voigt[:, dim_index], table.phi])
            if self.midpoint_as_feature:
                X = np.column_stack([table.hs_mid[:, dim_index], X])
                y = actual
            else:
                y = actual - table.hs_mid[:, dim_index]
        elif self.kind == LASSO_5D:
            X = table.voigt
            y = actual
        else:
            X = fraction_matrix(table.recipes, ingredient_union)
            y = actual
        return X, y

    def prediction_offset(self, table: FeatureTable, dim_index: int):
        """Value added to the lasso output to form the final prediction."""
        if self.kind == HYBRID and not self.midpoint_as_feature:
            return table.hs_mid[:, dim_index]
        return np.zeros(len(table.recipes))

    # -- training ----------------------------------------------------------

    def fit(self, corpus: Corpus, recipes=None):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if recipes is None:
            recipes = corpus.with_ground_truth()
        recipes = [r for r in recipes if r.ground_truth is not None]
        if len(recipes) < 3:
            raise InsufficientData(
                f"training needs >= 3 ground-truth recipes, got {len(recipes)}"
            )
        self.ingredient_union_ = corpus.ingredient_union()
        table = FeatureTable(corpus, recipes, self._bounds_cfg(), self._lexicon())
        self.models_ = []
        self.alphas_ = []
        self.feature_names_ = []
        for j, dim in enumerate(DIMENSIONS):
            X, y = self.design_for(table, j, self.ingredient_union_)
            alpha = select_alpha(X, y, self.alpha_grid)
            model = CoordinateDescentLasso(alpha=alpha).fit(X, y)
            self.models_.append(model)
            self.alphas_.append(alpha)
            self.feature_names_.append(self._feature_names(dim, self.ingredient_union_))
        self.lexicon_hash_ = self._lexicon().fingerprint()
        self.corpus_fingerprint_ = corpus_fingerprint(corpus)
        self.n_training_recipes_ = len(recipes)
        return self

    # -- prediction --------------------------------------------------------

    def predict_recipe(self, recipe: RecipeComposition, corpus: Corpus) -> dict:
        """Predicted taste scores for one recipe, keyed by dimension."""
        table = FeatureTable(corpus, [recipe], self._bounds_cfg(), self._lexicon())
        out = {}
        for j, dim in enumerate(DIMENSIONS):
            X, _ = self.design_for(table, j, self.ingredient_union_)
            value = self.models_[j].predict(X)[0] + self.prediction_offset(table, j)[0]
            if self.clip:
                value = min(max(value, 0.0), 100.0)
            out[dim] = float(value)
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        per_dim = []
        for j, dim in enumerate(DIMENSIONS):
            model = self.models_[j]
            per_dim.append({
                "dimension": dim,
                "alpha": self.alphas_[j],
                "intercept": model.intercept_,
                "coefficients": model.coef_.tolist(),
                "feature_mean": model.feature_mean_.tolist(),
                "feature_scale": model.feature_scale_.tolist(),
                "feature_names": self.feature_names_[j],
            })
        return {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "d": self.d,
            "midpoint_as_feature": self.midpoint_as_feature,
            "clip": self.clip,
            "ingredient_union": list(self.ingredient_union_),
            "lexicon_hash": self.lexicon_hash_,
            "corpus_fingerprint": self.corpus_fingerprint_,
            "n_training_recipes": self.n_training_recipes_,
            "dimensions": per_dim,
        }

    @classmethod
    def from_json(cls, data: dict, lexicon=None) -> "TasteRegressor":
        estimator = cls(
            kind=data["kind"], epsilon=data["epsilon"], d=data["d"],
            lexicon=lexicon, midpoint_as_feature=data["midpoint_as_feature"],
            clip=data["clip"],
        )
        estimator.ingredient_union_ = tuple(data["ingredient_union"])
        estimator.lexicon_hash_ = data["lexicon_hash"]
        estimator.corpus_fingerprint_ = data["corpus_fingerprint"]
        estimator.n_training_recipes_ = data["n_training_recipes"]
        estimator.models_ = []
        estimator.alphas_ = []
        estimator.feature_names_ = []
        for entry in data["dimensions"]:
            model = CoordinateDescentLasso(alpha=entry["alpha"])
            model.coef_ = np.asarray(entry["coefficients"])
            model.intercept_ = entry["intercept"]
            model.feature_mean_ = np.asarray(entry["feature_mean"])
            model.feature_scale_ = np.asarray(entry["feature_scale"])
            estimator.models_.append(model)
            estimator.alphas_.append(entry["alpha"])
            estimator.feature_names_.append(entry["feature_names"])
        return estimator

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json(), handle, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path, lexicon=None) -> "TasteRegressor":
        with open(path, encoding="utf-8") as handle:
            return cls.from_json(json.load(handle), lexicon=lexicon)
