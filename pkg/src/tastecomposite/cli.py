"""Command-line pipeline: train, predict, evaluate, design, sweep-d, serve.

Exit codes: 0 success, 2 validation/user error, 3 internal error. All
randomness flows from --seed (default 42), which is recorded in outputs.
The TASTE_COMPOSITE_DATA environment variable names a default corpus
directory containing ingredients.csv and recipes.csv.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from .bounds import BoundsConfig, sweep_d
from .chemistry import DEFAULT_LEXICON, CategoryLexicon
from .dataset import DIMENSIONS, load_corpus, save_corpus
from .errors import TasteCompositeError
from .evaluation import EVAL_MODEL_KINDS, build_report, write_report
from .hybrid import MODEL_KINDS, TasteRegressor
from .inverse import DEConfig, design, hybrid_forward, problem_from_scenario
from .service import forward_payload, validate_components
from .synthetic import synthetic_corpus

MODEL_ALIASES = {
    "hs": "hs_midpoint",
    "rv": "rv_voigt",
    "lasso5": "lasso_5d",
    "hybrid": "hybrid",
    "lasso115": "lasso_115",
}


def fail(message: str, code: int = 2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TasteCompositeError as exc:
            fail(str(exc), 2)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            fail(str(exc), 2)
        except SystemExit:
            raise
        except Exception as exc:  # internal error contract
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def corpus_options(func):
    @click.option("--ingredients", "ingredients_path", type=click.Path(),
                  default=None, help="ingredients.csv path")
    @click.option("--recipes", "recipes_path", type=click.Path(), default=None,
                  help="recipes.csv path")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def resolve_corpus(ingredients_path, recipes_path):
    if ingredients_path is None or recipes_path is None:
        data_dir = os.environ.get("TASTE_COMPOSITE_DATA")
        if data_dir is None:
            fail("no corpus given: pass --ingredients/--recipes or set "
                 "TASTE_COMPOSITE_DATA")
        ingredients_path = ingredients_path or Path(data_dir) / "ingredients.csv"
        recipes_path = recipes_path or Path(data_dir) / "recipes.csv"
    return load_corpus(ingredients_path, recipes_path)


def resolve_lexicon(lexicon_path):
    return CategoryLexicon.from_json(lexicon_path) if lexicon_path else DEFAULT_LEXICON


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


@click.group()
def main():
    """Taste prediction and inverse formulation from recipe composition."""


@main.command()
@corpus_options
@click.option("--kind", type=click.Choice(MODEL_KINDS), default="hybrid")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--epsilon", type=float, default=0.01)
@click.option("-d", "--d", "d_param", type=float, default=3.0)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="model bundle output path")
@handle_errors
def train(ingredients_path, recipes_path, kind, lexicon_path, epsilon, d_param,
          out_path):
    """Fit a model on the corpus and write the JSON bundle."""
    corpus = resolve_corpus(ingredients_path, recipes_path)
    model = TasteRegressor(kind=kind, epsilon=epsilon, d=d_param,
                           lexicon=resolve_lexicon(lexicon_path))
    model.fit(corpus)
    model.save(out_path)
    click.echo(f"wrote {out_path} (kind={kind}, "
               f"n={model.n_training_recipes_} recipes)")


@main.command()
@corpus_options
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--recipe-id", default=None, help="recipe from the corpus")
@click.option("--recipe-file", type=click.Path(exists=True), default=None,
              help="JSON file with a components list")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--json", "as_json", is_flag=True, help="emit the service schema")
@click.option("--clip", is_flag=True, help="clamp predictions into [0, 100]")
@handle_errors
def predict(ingredients_path, recipes_path, model_path, recipe_id, recipe_file,
            lexicon_path, as_json, clip):
    """Bounds plus hybrid prediction for one recipe."""
    corpus = resolve_corpus(ingredients_path, recipes_path)
    lexicon = resolve_lexicon(lexicon_path)
    model = TasteRegressor.load(model_path, lexicon=lexicon)
    model.clip = clip
    if (recipe_id is None) == (recipe_file is None):
        fail("pass exactly one of --recipe-id / --recipe-file")
    if recipe_id is not None:
        try:
            recipe = corpus.recipe(recipe_id)
        except KeyError:
            fail(f"unknown recipe_id {recipe_id!r}")
    else:
        with open(recipe_file, encoding="utf-8") as handle:
            body = json.load(handle)
        recipe = validate_components(body.get("components"), corpus)
    payload = forward_payload(corpus, model, recipe, lexicon=lexicon)
    if as_json:
        click.echo(dump_json(payload))
        return
    click.echo(f"recipe: {recipe.recipe_id}")
    header = f"{'dimension':<10}{'reuss':>8}{'hs_lo':>8}{'hs_mid':>8}" \
             f"{'hs_up':>8}{'voigt':>8}{'hybrid':>8}"
    click.echo(header)
    for dim in DIMENSIONS:
        b = payload["bounds"][dim]
        click.echo(
            f"{dim:<10}{b['reuss']:>8.2f}{b['hs_lower']:>8.2f}"
            f"{b['hs_midpoint']:>8.2f}{b['hs_upper']:>8.2f}{b['voigt']:>8.2f}"
            f"{payload['hybrid_prediction'][dim]:>8.2f}"
        )


@main.command()
@corpus_options
@click.option("--models", default="hs,rv,lasso5,hybrid,lasso115",
              help="comma-separated subset of hs,rv,lasso5,hybrid,lasso115")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--epsilon", type=float, default=0.01)
@click.option("-d", "--d", "d_param", type=float, default=3.0)
@click.option("--seed", type=int, default=42)
@click.option("--kfold", is_flag=True, help="include the k-fold stability check")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@handle_errors
def evaluate(ingredients_path, recipes_path, models, lexicon_path, epsilon,
             d_param, seed, kfold, out_dir):
    """LOOCV metrics, coverage, stratification, and d-sweep tables."""
    corpus = resolve_corpus(ingredients_path, recipes_path)
    kinds = []
    for alias in models.split(","):
        alias = alias.strip()
        if alias not in MODEL_ALIASES:
            fail(f"unknown model {alias!r}; choose from {sorted(MODEL_ALIASES)}")
        kinds.append(MODEL_ALIASES[alias])
    report = build_report(
        corpus, models=kinds, cfg=BoundsConfig(epsilon=epsilon, d=d_param),
        lexicon=resolve_lexicon(lexicon_path), seed=seed, kfold=kfold,
    )
    write_report(report, out_dir)
    click.echo(f"wrote {Path(out_dir) / 'report.json'}")
    for row in report["metrics_rendered"]:
        if row["dimension"] == "AVG_4D":
            click.echo(f"{row['model_name']:<12} avg(4D) MAE={row['mae']} "
                       f"PCC={row['pcc']} bias={row['bias']}")


@main.command()
@corpus_options
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--scenario", "scenario_path", type=click.Path(exists=True),
              required=True)
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=42)
@click.option("--out", "out_path", type=click.Path(), default=None)
@handle_errors
def design_cmd(ingredients_path, recipes_path, model_path, scenario_path,
               lexicon_path, seed, out_path):
    """Run inverse design for a scenario file."""
    corpus = resolve_corpus(ingredients_path, recipes_path)
    lexicon = resolve_lexicon(lexicon_path)
    model = TasteRegressor.load(model_path, lexicon=lexicon)
    with open(scenario_path, encoding="utf-8") as handle:
        scenario = json.load(handle)
    try:
        recipe = corpus.recipe(scenario["recipe_id"])
    except KeyError:
        fail(f"unknown recipe_id {scenario.get('recipe_id')!r}")
    baseline = model.predict_recipe(recipe, corpus)
    problem = problem_from_scenario(scenario, corpus, baseline)
    cfg = DEConfig(seed=int(scenario.get("seed", seed)))
    result = design(problem, hybrid_forward(recipe, corpus, model), cfg)
    payload = {
        "recipe_id": recipe.recipe_id,
        "seed": cfg.seed,
        "target": problem.target,
        "weights": problem.weights,
        "result": result.as_dict(),
    }
    text = dump_json(payload)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text)


main.add_command(design_cmd, name="design")


@main.command(name="sweep-d")
@corpus_options
@click.option("--d-values", default="2,3,5,10,50", help="comma-separated d values")
@click.option("--epsilon", type=float, default=0.01)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def sweep_d_cmd(ingredients_path, recipes_path, d_values, epsilon, as_json):
    """Exceedance fraction (actual above hs_upper) for each d."""
    corpus = resolve_corpus(ingredients_path, recipes_path)
    values = [float(x) for x in d_values.split(",")]
    rows = sweep_d(corpus, values, BoundsConfig(epsilon=epsilon))
    if as_json:
        click.echo(dump_json(rows))
        return
    click.echo(f"{'d':>8}  fraction_above_upper")
    for row in rows:
        click.echo(f"{row['d']:>8.1f}  {row['fraction_above_upper']:.4f}")


@main.command()
@click.option("--n", "n_recipes", type=int, default=70)
@click.option("--seed", type=int, default=42)
@click.option("--noise-sd", type=float, default=2.0)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@handle_errors
def synth(n_recipes, seed, noise_sd, out_dir):
    """Generate the synthetic fixture corpus as CSV files."""
    corpus = synthetic_corpus(n_recipes=n_recipes, seed=seed, noise_sd=noise_sd)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out / "ingredients.csv", out / "recipes.csv")
    click.echo(f"wrote {out / 'ingredients.csv'} and {out / 'recipes.csv'} "
               f"({n_recipes} recipes, seed {seed})")


@main.command()
@corpus_options
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="report.json served at /api/report")
@click.option("--bind", default="127.0.0.1")
@click.option("--port", type=int, default=8080)
@click.option("--cors-origin", "cors_origins", multiple=True, default=("*",))
@handle_errors
def serve(ingredients_path, recipes_path, model_path, lexicon_path, report_path,
          bind, port, cors_origins):
    """Start the JSON-over-HTTP API (and static UI when built)."""
    import uvicorn

    from .service import ApiSession, create_app

    corpus = resolve_corpus(ingredients_path, recipes_path)
    lexicon = resolve_lexicon(lexicon_path)
    session = ApiSession(
        corpus=corpus,
        model=TasteRegressor.load(model_path, lexicon=lexicon),
        lexicon=lexicon,
        report_path=Path(report_path) if report_path else None,
        cors_origins=tuple(cors_origins),
    )
    uvicorn.run(create_app(session), host=bind, port=port)


if __name__ == "__main__":
    main()
