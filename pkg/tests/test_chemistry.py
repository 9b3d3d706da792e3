import json

import pytest

from tastecomposite.chemistry import (
    CATEGORIES,
    FEATURE_NAMES,
    CategoryLexicon,
    classify,
    features,
)

from conftest import make_corpus, make_ingredient, make_recipe


def _corpus(components, extra=()):
    ids = {name for name, _ in components} | set(extra)
    ingredients = [make_ingredient(i) for i in sorted(ids)]
    return make_corpus(ingredients, [make_recipe("R1", components)])


def test_classify_overlapping_categories():
    corpus = _corpus([("soy-sauce", 1.0)])
    got = classify(corpus.ingredients["soy-sauce"])
    assert got == {"PROTEIN", "SALT", "FERMENTED"}


def test_classify_matches_display_name():
    ing = make_ingredient("x17", name="Brown Sugar")
    assert classify(ing) == {"SUGAR"}


def test_classify_unmatched_is_empty():
    assert classify(make_ingredient("sunflower-oil")) == set()


def test_simple_brine_features():
    corpus = _corpus([("water", 0.9), ("salt", 0.1)])
    phi = features(corpus.recipes[0], corpus)
    assert phi.phi_water == pytest.approx(0.9)
    assert phi.phi_salt == pytest.approx(0.1)
    assert phi.phi_concentration == pytest.approx(10.0)
    assert phi.phi_protein == 0
    assert phi.phi_maillard == 0


def test_maillard_is_protein_times_sugar():
    corpus = _corpus([("pork", 0.4), ("sugar", 0.25), ("starch", 0.35)])
    phi = features(corpus.recipes[0], corpus)
    assert phi.phi_protein == pytest.approx(0.4)
    assert phi.phi_sugar == pytest.approx(0.25)
    assert phi.phi_maillard == pytest.approx(0.1)


def test_concentration_clamp_for_pure_water():
    corpus = _corpus([("water", 1.0)])
    phi = features(corpus.recipes[0], corpus)
    assert phi.phi_water == pytest.approx(1.0)
    assert phi.phi_concentration == pytest.approx(100.0)


def test_category_fraction_capped_at_one():
    # soy-sauce lands in three categories at once; each category fraction is
    # still a plain mass sum capped at 1
    corpus = _corpus([("soy-sauce", 0.6), ("cheese", 0.4)])
    phi = features(corpus.recipes[0], corpus)
    assert phi.phi_fermented == pytest.approx(1.0)
    assert phi.phi_protein == pytest.approx(1.0)
    assert phi.phi_salt == pytest.approx(0.6)


def test_feature_tuple_ordering():
    corpus = _corpus([("water", 0.5), ("onion", 0.5)])
    phi = features(corpus.recipes[0], corpus)
    assert phi.as_tuple() == tuple(phi.as_dict()[n] for n in FEATURE_NAMES)
    assert phi.as_dict()["phi_allium"] == pytest.approx(0.5)


def test_lexicon_override_from_json(tmp_path):
    data = {c.lower(): ["zzz"] for c in CATEGORIES}
    data["allium"] = ["turnip"]
    path = tmp_path / "lexicon.json"
    path.write_text(json.dumps(data))
    lexicon = CategoryLexicon.from_json(path)
    corpus = _corpus([("turnip", 0.7), ("water", 0.3)])
    phi = features(corpus.recipes[0], corpus, lexicon)
    assert phi.phi_allium == pytest.approx(0.7)
    assert phi.phi_water == 0.0
    assert lexicon.fingerprint() != CategoryLexicon().fingerprint()


def test_lexicon_rejects_empty_category():
    with pytest.raises(ValueError):
        CategoryLexicon(keywords={c: () for c in CATEGORIES})


def test_fingerprint_ignores_keyword_order():
    a = CategoryLexicon()
    shuffled = {c: tuple(reversed(a.keywords[c])) for c in CATEGORIES}
    assert CategoryLexicon(keywords=shuffled).fingerprint() == a.fingerprint()
