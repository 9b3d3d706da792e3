"""Corpus ingestion: ingredient taste references and recipe decompositions.

Two UTF-8 CSV files (or an equivalent single JSON document) define a corpus:

    ingredients.csv: ingredient_id,display_name,sweet,sour,bitter,umami,salt,source_tier
    recipes.csv:     recipe_id,recipe_name,confidence,ingredient_id,mass_fraction,
                     gt_sweet,gt_sour,gt_bitter,gt_umami,gt_salt

recipes.csv carries one row per recipe component; the ground-truth columns are
repeated on every row of a recipe and must agree (empty = no ground truth).
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import DegenerateInput, ParseError, UnknownIngredient, ValidationError

DIMENSIONS = ("sweet", "sour", "bitter", "umami", "salt")

FRACTION_SUM_TOL = 0.001

_slug_re = re.compile(r"[\s_]+")


def slugify(name: str) -> str:
    """Normalize an ingredient key: trim, lowercase, whitespace -> '-'."""
    return _slug_re.sub("-", name.strip().lower())


class SourceTier(str, Enum):
    SVT_PANEL = "SVT_PANEL"
    PUBLISHED = "PUBLISHED"
    ESTIMATED = "ESTIMATED"


class Confidence(str, Enum):
    HIGH = "HIGH"
    MODERATE = "MODERATE"
    LOW = "LOW"


@dataclass(frozen=True)
class TasteVector:
    """Scores on the five taste dimensions, 0-100 Spectrum scale."""

    sweet: float
    sour: float
    bitter: float
    umami: float
    salt: float

    def __post_init__(self):
        for dim in DIMENSIONS:
            value = getattr(self, dim)
            if not math.isfinite(value) or not 0.0 <= value <= 100.0:
                raise ValidationError(f"{dim} score {value!r} outside [0, 100]")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, dim) for dim in DIMENSIONS)

    def as_dict(self) -> dict[str, float]:
        return {dim: getattr(self, dim) for dim in DIMENSIONS}

    @classmethod
    def from_dict(cls, data) -> "TasteVector":
        return cls(**{dim: float(data[dim]) for dim in DIMENSIONS})


@dataclass(frozen=True)
class IngredientTasteProfile:
    ingredient_id: str
    display_name: str
    taste: TasteVector
    source_tier: SourceTier


@dataclass(frozen=True)
class RecipeComposition:
    recipe_id: str
    name: str
    components: tuple[tuple[str, float], ...]
    confidence: Confidence
    ground_truth: Optional[TasteVector] = None

    def __post_init__(self):
        for ingredient_id, fraction in self.components:
            if not 0.0 <= fraction <= 1.0:
                raise ValidationError(
                    f"recipe {self.recipe_id}: fraction {fraction!r} for "
                    f"{ingredient_id} outside [0, 1]"
                )
        total = sum(f for _, f in self.components)
        if abs(total - 1.0) > FRACTION_SUM_TOL:
            raise ValidationError(
                f"recipe {self.recipe_id}: fractions sum to {total:.4f}, "
                f"outside [0.999, 1.001]"
            )

    @property
    def fractions(self) -> tuple[float, ...]:
        return tuple(f for _, f in self.components)

    @property
    def ingredient_ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.components)

    def normalized(self) -> "RecipeComposition":
        """Same recipe with fractions renormalized to sum exactly 1."""
        fracs = renormalize(self.fractions)
        return RecipeComposition(
            recipe_id=self.recipe_id,
            name=self.name,
            components=tuple(zip(self.ingredient_ids, fracs)),
            confidence=self.confidence,
            ground_truth=self.ground_truth,
        )


@dataclass(frozen=True)
class Corpus:
    """Immutable ingredient reference table plus recipe list."""

    ingredients: dict[str, IngredientTasteProfile] = field(default_factory=dict)
    recipes: tuple[RecipeComposition, ...] = ()

    def __post_init__(self):
        for recipe in self.recipes:
            for ingredient_id in recipe.ingredient_ids:
                if ingredient_id not in self.ingredients:
                    raise UnknownIngredient(
                        f"recipe {recipe.recipe_id}: unknown ingredient "
                        f"{ingredient_id!r}"
                    )

    def recipe(self, recipe_id: str) -> RecipeComposition:
        for recipe in self.recipes:
            if recipe.recipe_id == recipe_id:
                return recipe
        raise KeyError(recipe_id)

    def with_ground_truth(self) -> tuple[RecipeComposition, ...]:
        return tuple(r for r in self.recipes if r.ground_truth is not None)

    def ingredient_union(self) -> tuple[str, ...]:
        """Sorted union of ingredient ids used by any recipe."""
        used = {i for r in self.recipes for i in r.ingredient_ids}
        return tuple(sorted(used))


def renormalize(fractions: Sequence[float]) -> list[float]:
    """Scale nonnegative fractions so they sum to 1."""
    if any(f < 0 for f in fractions):
        raise ValidationError("fractions must be nonnegative")
    total = sum(fractions)
    if total <= 0.0:
        raise DegenerateInput("all fractions are zero")
    if abs(total - 1.0) <= 1e-12:
        # already on the simplex; dividing would only churn the last bits
        return [float(f) for f in fractions]
    return [f / total for f in fractions]


def _parse_score(raw: str, what: str, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"non-numeric {what}: {raw!r}", line=line) from None
    return value


def load_ingredients(path) -> dict[str, IngredientTasteProfile]:
    ingredients: dict[str, IngredientTasteProfile] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        expected = ["ingredient_id", "display_name", *DIMENSIONS, "source_tier"]
        if reader.fieldnames != expected:
            raise ParseError(
                f"{path}: expected header {','.join(expected)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            line = reader.line_num
            if any(row[k] is None for k in expected):
                raise ParseError("short row", line=line)
            ingredient_id = slugify(row["ingredient_id"])
            if ingredient_id in ingredients:
                raise ValidationError(
                    f"duplicate ingredient_id {ingredient_id!r} (line {line})"
                )
            try:
                taste = TasteVector(
                    **{d: _parse_score(row[d], d, line) for d in DIMENSIONS}
                )
            except ValidationError as exc:
                raise ValidationError(f"ingredient {ingredient_id}: {exc}") from None
            try:
                tier = SourceTier(row["source_tier"])
            except ValueError:
                raise ParseError(
                    f"unknown source_tier {row['source_tier']!r}", line=line
                ) from None
            ingredients[ingredient_id] = IngredientTasteProfile(
                ingredient_id=ingredient_id,
                display_name=row["display_name"],
                taste=taste,
                source_tier=tier,
            )
    return ingredients


def load_recipes(path) -> list[RecipeComposition]:
    groups: dict[str, dict] = {}
    order: list[str] = []
    gt_cols = [f"gt_{d}" for d in DIMENSIONS]
    expected = [
        "recipe_id", "recipe_name", "confidence", "ingredient_id",
        "mass_fraction", *gt_cols,
    ]
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != expected:
            raise ParseError(
                f"{path}: expected header {','.join(expected)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            line = reader.line_num
            if any(row[k] is None for k in expected):
                raise ParseError("short row", line=line)
            recipe_id = row["recipe_id"].strip()
            gt_raw = [row[c].strip() for c in gt_cols]
            if all(v == "" for v in gt_raw):
                gt = None
            elif any(v == "" for v in gt_raw):
                raise ParseError(
                    f"recipe {recipe_id}: partial ground-truth row", line=line
                )
            else:
                gt = tuple(_parse_score(v, "ground truth", line) for v in gt_raw)
            try:
                confidence = Confidence(row["confidence"])
            except ValueError:
                raise ParseError(
                    f"unknown confidence {row['confidence']!r}", line=line
                ) from None
            entry = groups.get(recipe_id)
            if entry is None:
                entry = {
                    "name": row["recipe_name"],
                    "confidence": confidence,
                    "gt": gt,
                    "components": [],
                }
                groups[recipe_id] = entry
                order.append(recipe_id)
            else:
                if entry["gt"] != gt or entry["confidence"] != confidence:
                    raise ValidationError(
                        f"recipe {recipe_id}: rows disagree on ground truth "
                        f"or confidence (line {line})"
                    )
            entry["components"].append(
                (slugify(row["ingredient_id"]),
                 _parse_score(row["mass_fraction"], "mass_fraction", line))
            )

    recipes = []
    for recipe_id in order:
        entry = groups[recipe_id]
        gt = entry["gt"]
        recipes.append(
            RecipeComposition(
                recipe_id=recipe_id,
                name=entry["name"],
                components=tuple(entry["components"]),
                confidence=entry["confidence"],
                ground_truth=TasteVector(*gt) if gt is not None else None,
            )
        )
    return recipes


def load_corpus(ingredients_path, recipes_path) -> Corpus:
    """Load and validate a corpus from the two CSV files.

    Recipes are renormalized to an exact unit fraction sum after the
    +-0.001 tolerance check.
    """
    ingredients = load_ingredients(ingredients_path)
    recipes = [r.normalized() for r in load_recipes(recipes_path)]
    return Corpus(ingredients=ingredients, recipes=tuple(recipes))


def save_corpus(corpus: Corpus, ingredients_path, recipes_path) -> None:
    """Serialize a corpus back to the canonical CSV schemas."""
    with open(ingredients_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["ingredient_id", "display_name", *DIMENSIONS, "source_tier"])
        for ing in corpus.ingredients.values():
            writer.writerow(
                [ing.ingredient_id, ing.display_name,
                 *(repr(float(v)) for v in ing.taste.as_tuple()), ing.source_tier.value]
            )
    with open(recipes_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["recipe_id", "recipe_name", "confidence", "ingredient_id",
             "mass_fraction", *(f"gt_{d}" for d in DIMENSIONS)]
        )
        for recipe in corpus.recipes:
            gt = (
                [repr(float(v)) for v in recipe.ground_truth.as_tuple()]
                if recipe.ground_truth is not None
                else [""] * 5
            )
            for ingredient_id, fraction in recipe.components:
                writer.writerow(
                    [recipe.recipe_id, recipe.name, recipe.confidence.value,
                     ingredient_id, repr(float(fraction)), *gt]
                )


def corpus_to_json(corpus: Corpus) -> dict:
    """JSON mirror of the CSV schemas."""
    return {
        "ingredients": [
            {
                "ingredient_id": ing.ingredient_id,
                "display_name": ing.display_name,
                **ing.taste.as_dict(),
                "source_tier": ing.source_tier.value,
            }
            for ing in corpus.ingredients.values()
        ],
        "recipes": [
            {
                "recipe_id": r.recipe_id,
                "recipe_name": r.name,
                "confidence": r.confidence.value,
                "components": [
                    {"ingredient_id": i, "mass_fraction": f}
                    for i, f in r.components
                ],
                "ground_truth": (
                    r.ground_truth.as_dict() if r.ground_truth is not None else None
                ),
            }
            for r in corpus.recipes
        ],
    }


def corpus_from_json(data: dict) -> Corpus:
    ingredients = {}
    for entry in data["ingredients"]:
        ingredient_id = slugify(entry["ingredient_id"])
        if ingredient_id in ingredients:
            raise ValidationError(f"duplicate ingredient_id {ingredient_id!r}")
        ingredients[ingredient_id] = IngredientTasteProfile(
            ingredient_id=ingredient_id,
            display_name=entry["display_name"],
            taste=TasteVector.from_dict(entry),
            source_tier=SourceTier(entry["source_tier"]),
        )
    recipes = []
    for entry in data["recipes"]:
        gt = entry.get("ground_truth")
        recipes.append(
            RecipeComposition(
                recipe_id=entry["recipe_id"],
                name=entry["recipe_name"],
                components=tuple(
                    (slugify(c["ingredient_id"]), float(c["mass_fraction"]))
                    for c in entry["components"]
                ),
                confidence=Confidence(entry["confidence"]),
                ground_truth=TasteVector.from_dict(gt) if gt else None,
            ).normalized()
        )
    return Corpus(ingredients=ingredients, recipes=tuple(recipes))


def load_corpus_json(path) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        return corpus_from_json(json.load(handle))
