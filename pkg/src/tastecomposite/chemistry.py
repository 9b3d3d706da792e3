"""Chemistry-proxy features computed from the ingredient list alone.

Eight recipe-level features encode the potential for processing chemistry
(Maillard reactions, caramelization, evaporative concentration, protein
hydrolysis, fermentation acids) without any process parameters. Category
membership is keyword-based: an ingredient belongs to every category whose
keyword list has a substring match against its id or display name, so
overlaps (soy sauce -> SALT and FERMENTED) are allowed and category
fractions may sum past 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dataset import Corpus, IngredientTasteProfile, RecipeComposition, slugify

CATEGORIES = ("PROTEIN", "SUGAR", "SALT", "WATER", "ALLIUM", "FERMENTED")

# Reconstruction of the category keyword lists; user-overridable via JSON.
DEFAULT_KEYWORDS = {
    "PROTEIN": ["pork", "beef", "chicken", "fish", "egg", "bean", "pea",
                "lentil", "milk", "cheese", "yoghurt", "nut", "hazelnut", "soy"],
    "SUGAR": ["sugar", "honey", "syrup", "sucrose", "glucose", "fructose"],
    "SALT": ["salt", "nacl", "bouillon", "stock-cube", "soy-sauce"],
    "WATER": ["water", "stock", "broth"],
    "ALLIUM": ["onion", "garlic", "leek", "shallot", "chive"],
    "FERMENTED": ["soy-sauce", "cheese", "vinegar", "mustard", "yoghurt",
                  "sauerkraut", "wine", "beer"],
}

WATER_CLAMP = 0.99

FEATURE_NAMES = (
    "phi_protein", "phi_sugar", "phi_maillard", "phi_salt",
    "phi_water", "phi_concentration", "phi_allium", "phi_fermented",
)


@dataclass(frozen=True)
class CategoryLexicon:
    keywords: dict[str, tuple[str, ...]] = field(
        default_factory=lambda: {k: tuple(v) for k, v in DEFAULT_KEYWORDS.items()}
    )

    def __post_init__(self):
        for category in CATEGORIES:
            words = self.keywords.get(category)
            if not words:
                raise ValueError(f"category {category} has no keywords")
            if any(w != w.lower() for w in words):
                raise ValueError(f"category {category} keywords must be lowercase")

    @classmethod
    def from_json(cls, path) -> "CategoryLexicon":
        """Load an override lexicon: {"protein": [...], "sugar": [...], ...}."""
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        return cls(
            keywords={c: tuple(slugify(w) for w in data[c.lower()]) for c in CATEGORIES}
        )

    def fingerprint(self) -> str:
        import hashlib

        blob = json.dumps(
            {c: sorted(self.keywords[c]) for c in CATEGORIES}, sort_keys=True
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


DEFAULT_LEXICON = CategoryLexicon()


@dataclass(frozen=True)
class ChemistryFeatures:
    phi_protein: float
    phi_sugar: float
    phi_maillard: float
    phi_salt: float
    phi_water: float
    phi_concentration: float
    phi_allium: float
    phi_fermented: float

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in FEATURE_NAMES}


def classify(
    ingredient: IngredientTasteProfile, lexicon: CategoryLexicon = DEFAULT_LEXICON
) -> set[str]:
    """Categories whose keywords substring-match the id or display name."""
    haystacks = (ingredient.ingredient_id, slugify(ingredient.display_name))
    return {
        category
        for category in CATEGORIES
        if any(word in hay for word in lexicon.keywords[category] for hay in haystacks)
    }


def features(
    recipe: RecipeComposition,
    corpus: Corpus,
    lexicon: CategoryLexicon = DEFAULT_LEXICON,
) -> ChemistryFeatures:
    """Category mass fractions plus the derived Maillard and concentration
    features for one recipe."""
    fractions = {category: 0.0 for category in CATEGORIES}
    for ingredient_id, fraction in recipe.components:
        for category in classify(corpus.ingredients[ingredient_id], lexicon):
            fractions[category] += fraction
    # float accumulation can nudge a full-coverage category past 1
    for category in CATEGORIES:
        fractions[category] = min(fractions[category], 1.0)
    water = fractions["WATER"]
    concentration = 1.0 / (1.0 - min(water, WATER_CLAMP))
    return ChemistryFeatures(
        phi_protein=fractions["PROTEIN"],
        phi_sugar=fractions["SUGAR"],
        phi_maillard=fractions["PROTEIN"] * fractions["SUGAR"],
        phi_salt=fractions["SALT"],
        phi_water=water,
        phi_concentration=concentration,
        phi_allium=fractions["ALLIUM"],
        phi_fermented=fractions["FERMENTED"],
    )
