"""JSON-over-HTTP API for forward prediction and inverse design.

The session (corpus, trained model bundle, lexicon) is loaded before serving
and immutable afterwards; all endpoints are read-only against it. Error
bodies share one schema: {"error": {"code", "message", "field"?}}.
"""

from __future__ import annotations

import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .bounds import BoundsConfig, recipe_bounds
from .chemistry import DEFAULT_LEXICON, classify, features
from .dataset import (
    DIMENSIONS,
    FRACTION_SUM_TOL,
    Confidence,
    Corpus,
    RecipeComposition,
    slugify,
)
from .errors import InfeasibleBounds, MissingFixture, TasteCompositeError
from .hybrid import TasteRegressor
from .inverse import DEConfig, design, hybrid_forward, problem_from_scenario


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field_name=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field_name = field_name

    def body(self) -> dict:
        error = {"code": self.code, "message": self.message}
        if self.field_name is not None:
            error["field"] = self.field_name
        return {"error": error}


def validate_components(raw, corpus: Corpus) -> RecipeComposition:
    """Turn a request component list into an ad-hoc recipe, 422 on violation."""
    if not isinstance(raw, list) or not raw:
        raise ApiError(422, "invalid_components",
                       "components must be a non-empty list", "components")
    components = []
    total = 0.0
    for idx, entry in enumerate(raw):
        ingredient_id = slugify(str(entry.get("ingredient_id", "")))
        try:
            fraction = float(entry.get("mass_fraction"))
        except (TypeError, ValueError):
            raise ApiError(422, "invalid_fraction",
                           f"component {idx}: mass_fraction must be a number",
                           f"components[{idx}].mass_fraction") from None
        if ingredient_id not in corpus.ingredients:
            raise ApiError(422, "unknown_ingredient",
                           f"unknown ingredient {ingredient_id!r}",
                           f"components[{idx}].ingredient_id")
        if not 0.0 <= fraction <= 1.0:
            raise ApiError(422, "invalid_fraction",
                           f"component {idx}: fraction {fraction} outside [0, 1]",
                           f"components[{idx}].mass_fraction")
        components.append((ingredient_id, fraction))
        total += fraction
    if abs(total - 1.0) > FRACTION_SUM_TOL:
        raise ApiError(422, "fraction_sum",
                       f"fractions sum to {total:.4f}, outside [0.999, 1.001]",
                       "components")
    recipe = RecipeComposition(
        recipe_id="adhoc", name="ad-hoc request", components=tuple(components),
        confidence=Confidence.HIGH, ground_truth=None,
    )
    return recipe.normalized()


def forward_payload(corpus: Corpus, model: TasteRegressor,
                    recipe: RecipeComposition,
                    cfg: Optional[BoundsConfig] = None,
                    lexicon=DEFAULT_LEXICON) -> dict:
    """Shared forward-result schema used by both the CLI and the service."""
    if cfg is None:
        cfg = BoundsConfig(epsilon=model.epsilon, d=model.d)
    bounds = recipe_bounds(recipe, corpus, cfg)
    return {
        "components": [
            {"ingredient_id": i, "mass_fraction": f} for i, f in recipe.components
        ],
        "bounds": bounds.as_dict(),
        "chemistry_features": features(recipe, corpus, lexicon).as_dict(),
        "hybrid_prediction": model.predict_recipe(recipe, corpus),
    }


PREDICT_REQUEST_SCHEMA = {
    "type": "object",
    "required": ["components"],
    "properties": {
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["ingredient_id", "mass_fraction"],
                "properties": {
                    "ingredient_id": {"type": "string"},
                    "mass_fraction": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
    },
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["recipe_id"],
    "properties": {
        "recipe_id": {"type": "string"},
        "target": {"type": "object"},
        "weights": {"type": "object"},
        "bounds": {"type": "object"},
        "seed": {"type": "integer"},
    },
}

ERROR_SCHEMA = {
    "type": "object",
    "required": ["error"],
    "properties": {
        "error": {
            "type": "object",
            "required": ["code", "message"],
            "properties": {
                "code": {"type": "string"},
                "message": {"type": "string"},
                "field": {"type": "string"},
            },
        },
    },
}


@dataclass
class ApiSession:
    corpus: Corpus
    model: TasteRegressor
    lexicon: object = DEFAULT_LEXICON
    report_path: Optional[Path] = None
    cors_origins: tuple = ("*",)
    sync_generation_budget: int = 500  # scenarios above run as async jobs
    job_capacity: int = 32
    jobs: OrderedDict = field(default_factory=OrderedDict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _run_design(session: ApiSession, scenario: dict) -> dict:
    corpus = session.corpus
    try:
        recipe = corpus.recipe(scenario["recipe_id"])
    except KeyError:
        raise ApiError(422, "unknown_recipe",
                       f"unknown recipe_id {scenario['recipe_id']!r}",
                       "recipe_id") from None
    baseline = session.model.predict_recipe(recipe, corpus)
    try:
        problem = problem_from_scenario(scenario, corpus, baseline)
        cfg = DEConfig(seed=int(scenario.get("seed", 42)),
                       max_iterations=int(scenario.get("max_iterations", 500)))
        result = design(problem, hybrid_forward(recipe, corpus, session.model), cfg)
    except (InfeasibleBounds, MissingFixture, ValueError) as exc:
        raise ApiError(422, "infeasible_scenario", str(exc)) from None
    return {
        "recipe_id": recipe.recipe_id,
        "seed": cfg.seed,
        "target": problem.target,
        "weights": problem.weights,
        "result": result.as_dict(),
    }


def create_app(session: ApiSession) -> FastAPI:
    app = FastAPI(title="tastecomposite", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=list(session.cors_origins),
        allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(TasteCompositeError)
    async def domain_error_handler(request: Request, exc: TasteCompositeError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": type(exc).__name__, "message": str(exc)}},
        )

    @app.get("/api/ingredients")
    async def list_ingredients(category: Optional[str] = None):
        out = []
        for ing in session.corpus.ingredients.values():
            categories = sorted(classify(ing, session.lexicon))
            if category is not None and category.upper() not in categories:
                continue
            out.append({
                "ingredient_id": ing.ingredient_id,
                "display_name": ing.display_name,
                "taste": ing.taste.as_dict(),
                "source_tier": ing.source_tier.value,
                "categories": categories,
            })
        return out

    @app.get("/api/recipes")
    async def list_recipes():
        return [
            {
                "recipe_id": r.recipe_id,
                "name": r.name,
                "confidence": r.confidence.value,
                "components": [
                    {"ingredient_id": i, "mass_fraction": f}
                    for i, f in r.components
                ],
                "has_ground_truth": r.ground_truth is not None,
            }
            for r in session.corpus.recipes
        ]

    @app.post("/api/predict")
    async def predict(request: Request):
        body = await request.json()
        recipe = validate_components(body.get("components"), session.corpus)
        return forward_payload(session.corpus, session.model, recipe,
                               lexicon=session.lexicon)

    @app.post("/api/design")
    async def design_endpoint(request: Request):
        scenario = await request.json()
        if not isinstance(scenario, dict) or "recipe_id" not in scenario:
            raise ApiError(422, "invalid_scenario", "scenario needs a recipe_id",
                           "recipe_id")
        budget = int(scenario.get("max_iterations", 500))
        if budget <= session.sync_generation_budget:
            return _run_design(session, scenario)
        job_id = uuid.uuid4().hex
        with session.lock:
            session.jobs[job_id] = {"status": "running", "result": None}
            while len(session.jobs) > session.job_capacity:
                session.jobs.popitem(last=False)

        def worker():
            try:
                result = _run_design(session, scenario)
                payload = {"status": "done", "result": result}
            except ApiError as exc:
                payload = {"status": "error", "result": exc.body()}
            with session.lock:
                if job_id in session.jobs:
                    session.jobs[job_id] = payload

        threading.Thread(target=worker, daemon=True).start()
        return JSONResponse(status_code=202, content={"job_id": job_id})

    @app.get("/api/design/{job_id}")
    async def poll_design(job_id: str):
        with session.lock:
            job = session.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "unknown_job", f"no design job {job_id!r}")
        return job

    @app.get("/api/report")
    async def report():
        path = session.report_path
        if path is None or not Path(path).exists():
            raise ApiError(404, "no_report", "no evaluation report available")
        return Response(content=Path(path).read_bytes(),
                        media_type="application/json")

    @app.get("/api/schema")
    async def schema():
        return {
            "predict_request": PREDICT_REQUEST_SCHEMA,
            "design_scenario": SCENARIO_SCHEMA,
            "error": ERROR_SCHEMA,
        }

    static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
