"""Inverse formulation: find mass fractions matching a target taste profile.

A best1bin Differential Evolution loop minimizes the weighted relative error
between the forward model's prediction and the target, with every candidate
projected onto the feasible set (box bounds intersected with the unit
simplex) before evaluation, so Table-style before/after deltas always refer
to valid formulations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dataset import DIMENSIONS, Corpus, RecipeComposition
from .errors import InfeasibleBounds, MissingFixture
from .hybrid import TasteRegressor

# Guard on Eq-style relative error: denominators below this are clamped so
# near-floor dimensions (bitter) cannot blow up a single term.
DENOMINATOR_FLOOR = 1.0

SIMPLEX_TOL = 1e-6
_REPAIR_TOL = 1e-9


@dataclass(frozen=True)
class DesignProblem:
    recipe: RecipeComposition
    target: dict[str, float]  # desired score per dimension
    weights: dict[str, float]  # importance weight per dimension, >= 0
    lower: tuple[float, ...]  # per-ingredient minimum fractions
    upper: tuple[float, ...]  # per-ingredient maximum fractions

    def __post_init__(self):
        n = len(self.recipe.components)
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("bounds length must match ingredient count")
        for lo, hi in zip(self.lower, self.upper):
            if not (0.0 <= lo <= hi <= 1.0):
                raise InfeasibleBounds(f"invalid bound pair [{lo}, {hi}]")
        if sum(self.lower) > 1.0 + SIMPLEX_TOL or sum(self.upper) < 1.0 - SIMPLEX_TOL:
            raise InfeasibleBounds(
                "box bounds do not intersect the unit simplex"
            )
        for dim, w in self.weights.items():
            if w < 0:
                raise ValueError(f"negative weight for {dim}")

    @property
    def weight_vector(self) -> np.ndarray:
        return np.array([self.weights.get(dim, 0.0) for dim in DIMENSIONS])

    @property
    def target_vector(self) -> np.ndarray:
        return np.array([self.target[dim] for dim in DIMENSIONS])


@dataclass(frozen=True)
class DEConfig:
    population_size: int = 15
    crossover_probability: float = 0.8
    mutation_range: tuple[float, float] = (0.5, 1.0)  # F dithered per generation
    max_iterations: int = 500
    seed: int = 42
    std_tolerance: float = 0.01  # converged when population objective std < tol

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("best1bin needs population_size >= 4")


@dataclass(frozen=True)
class DesignResult:
    fractions: tuple[float, ...]
    predicted_before: dict[str, float]
    predicted_after: dict[str, float]
    objective_value: float
    deltas: dict[str, float]  # ingredient_id -> optimized - initial fraction
    iterations: int
    converged: bool
    trace: tuple[float, ...] = field(default=())  # best objective per generation

    def as_dict(self) -> dict:
        return {
            "fractions": list(self.fractions),
            "predicted_before": self.predicted_before,
            "predicted_after": self.predicted_after,
            "objective_value": self.objective_value,
            "deltas": self.deltas,
            "iterations": self.iterations,
            "converged": self.converged,
            "trace": list(self.trace),
        }


def repair(v_raw, problem: DesignProblem) -> np.ndarray:
    """Project a raw candidate onto box bounds intersected with the simplex.

    The Euclidean projection has the water-filling form clip(v_raw - tau,
    lower, upper) for the shift tau closing the simplex constraint; the sum is
    continuous and nonincreasing in tau, so bisection finds it. A final
    redistribution over non-saturated coordinates absorbs the last bits.
    """
    lower = np.asarray(problem.lower)
    upper = np.asarray(problem.upper)
    x = np.asarray(v_raw, dtype=float)
    if ((lower <= x).all() and (x <= upper).all()
            and abs(x.sum() - 1.0) <= _REPAIR_TOL):
        return x.copy()
    tau_lo = float(np.min(x - upper)) - 1.0  # sum(upper) >= 1 here
    tau_hi = float(np.max(x - lower)) + 1.0  # sum(lower) <= 1 here
    for _ in range(100):
        tau = 0.5 * (tau_lo + tau_hi)
        if np.clip(x - tau, lower, upper).sum() > 1.0:
            tau_lo = tau
        else:
            tau_hi = tau
    v = np.clip(x - 0.5 * (tau_lo + tau_hi), lower, upper)
    gap = 1.0 - v.sum()
    if abs(gap) > _REPAIR_TOL:
        free = (v < upper - _REPAIR_TOL) if gap > 0 else (v > lower + _REPAIR_TOL)
        if not free.any():
            raise InfeasibleBounds("no adjustable coordinate during repair")
        v[free] += gap / free.sum()
        v = np.clip(v, lower, upper)
    if abs(1.0 - v.sum()) > _REPAIR_TOL:
        raise InfeasibleBounds("repair failed to close the simplex constraint")
    return v


ForwardFn = Callable[[np.ndarray], np.ndarray]


def objective(v, problem: DesignProblem, forward: ForwardFn) -> float:
    """Weighted relative error sum between target and forward prediction.

    Denominator is the candidate's own prediction, floored at 1.0.
    """
    v = np.asarray(v, dtype=float)
    lower = np.asarray(problem.lower)
    upper = np.asarray(problem.upper)
    assert abs(v.sum() - 1.0) <= SIMPLEX_TOL, "candidate escaped the simplex"
    assert (v >= lower - SIMPLEX_TOL).all() and (v <= upper + SIMPLEX_TOL).all(), \
        "candidate escaped the box bounds"
    predicted = np.asarray(forward(v), dtype=float)
    weights = problem.weight_vector
    denom = np.maximum(np.abs(predicted), DENOMINATOR_FLOOR)
    return float(np.sum(weights * np.abs(problem.target_vector - predicted) / denom))


def _latin_hypercube(rng, n_points, lower, upper):
    n_dims = len(lower)
    sample = np.empty((n_points, n_dims))
    for k in range(n_dims):
        cells = (rng.permutation(n_points) + rng.random(n_points)) / n_points
        sample[:, k] = lower[k] + cells * (upper[k] - lower[k])
    return sample


def design(problem: DesignProblem, forward: ForwardFn,
           cfg: DEConfig = DEConfig()) -> DesignResult:
    """best1bin DE over the feasible simplex; the initial recipe is injected
    into the population so the result can only improve on it."""
    rng = np.random.default_rng(cfg.seed)
    lower = np.asarray(problem.lower)
    upper = np.asarray(problem.upper)
    n_dims = len(lower)
    initial = repair(np.asarray(problem.recipe.fractions), problem)

    population = _latin_hypercube(rng, cfg.population_size, lower, upper)
    population = np.array([repair(member, problem) for member in population])
    population[0] = initial
    scores = np.array([objective(m, problem, forward) for m in population])

    predicted_before = np.asarray(forward(initial), dtype=float)
    trace = []
    converged = False
    generation = 0
    f_lo, f_hi = cfg.mutation_range
    for generation in range(1, cfg.max_iterations + 1):
        F = rng.uniform(f_lo, f_hi)
        best_idx = int(np.argmin(scores))
        best = population[best_idx]
        for i in range(cfg.population_size):
            candidates = [j for j in range(cfg.population_size) if j != i]
            a, b = rng.choice(candidates, size=2, replace=False)
            mutant = best + F * (population[a] - population[b])
            cross = rng.random(n_dims) < cfg.crossover_probability
            cross[rng.integers(n_dims)] = True  # guarantee one crossed coord
            trial = np.where(cross, mutant, population[i])
            trial = repair(trial, problem)
            score = objective(trial, problem, forward)
            if score < scores[i]:
                population[i] = trial
                scores[i] = score
        trace.append(float(scores.min()))
        if np.std(scores) < cfg.std_tolerance:
            converged = True
            break

    best_idx = int(np.argmin(scores))
    best = population[best_idx]
    predicted_after = np.asarray(forward(best), dtype=float)
    return DesignResult(
        fractions=tuple(float(x) for x in best),
        predicted_before={d: float(p) for d, p in zip(DIMENSIONS, predicted_before)},
        predicted_after={d: float(p) for d, p in zip(DIMENSIONS, predicted_after)},
        objective_value=float(scores[best_idx]),
        deltas={
            ingredient: float(opt - init)
            for (ingredient, init), opt
            in zip(problem.recipe.components, best)
        },
        iterations=generation,
        converged=converged,
        trace=tuple(trace),
    )


def hybrid_forward(recipe: RecipeComposition, corpus: Corpus,
                   model: TasteRegressor) -> ForwardFn:
    """Forward function over the recipe's ingredient slots: fractions in, the
    model's five predicted scores out."""
    ingredient_ids = recipe.ingredient_ids

    def forward(v: np.ndarray) -> np.ndarray:
        candidate = RecipeComposition(
            recipe_id=recipe.recipe_id,
            name=recipe.name,
            components=tuple(zip(ingredient_ids, (float(x) for x in v))),
            confidence=recipe.confidence,
            ground_truth=None,
        )
        predicted = model.predict_recipe(candidate, corpus)
        return np.array([predicted[dim] for dim in DIMENSIONS])

    return forward


def problem_from_scenario(scenario: dict, corpus: Corpus,
                          baseline: Optional[dict] = None) -> DesignProblem:
    """Build a DesignProblem from the scenario JSON schema.

    Targets may be absolute scores or {"delta": x} entries relative to the
    supplied baseline prediction. Unlisted dimensions default to the baseline
    (hold-constant targets) with weight 0.25; listed ones default to weight 1.
    """
    try:
        recipe = corpus.recipe(scenario["recipe_id"])
    except KeyError:
        raise MissingFixture(
            f"recipe {scenario['recipe_id']!r} not in corpus"
        ) from None
    raw_target = scenario.get("target", {})
    target = {}
    weights = dict(scenario.get("weights", {}))
    for dim in DIMENSIONS:
        entry = raw_target.get(dim)
        if entry is None:
            if baseline is None:
                raise ValueError(f"no target or baseline for {dim}")
            target[dim] = baseline[dim]
            weights.setdefault(dim, 0.25)
        elif isinstance(entry, dict):
            if baseline is None:
                raise ValueError("delta target requires a baseline prediction")
            target[dim] = baseline[dim] + float(entry["delta"])
            weights.setdefault(dim, 1.0)
        else:
            target[dim] = float(entry)
            weights.setdefault(dim, 1.0)
    bounds = scenario.get("bounds", {})
    lower, upper = [], []
    for ingredient_id, _ in recipe.components:
        lo, hi = bounds.get(ingredient_id, (0.0, 1.0))
        lower.append(float(lo))
        upper.append(float(hi))
    return DesignProblem(recipe=recipe, target=target, weights=weights,
                         lower=tuple(lower), upper=tuple(upper))


# The three reformulation scenarios (pea soup / chocolate spread / ketchup).
CASE_STUDIES = (
    {
        "name": "case1_salt_reduction",
        "recipe_id": "RP14",
        "target": {"salt": {"delta": -5.0}},
        "hold": ["umami"],
        "constraints": {"salt": (0.0, 0.003)},
    },
    {
        "name": "case2_sugar_reduction",
        "recipe_id": "RP55",
        "target": {"sweet": {"delta": 0.0}},
        "hold": [],
        "constraints": {"sugar": (0.0, 0.35)},
    },
    {
        "name": "case3_umami_boost",
        "recipe_id": "RP68",
        "target": {"umami": {"delta": 3.0}, "sweet": {"delta": -3.0}},
        "hold": [],
        "constraints": {"sugar": (0.0, 0.05)},
    },
)


def case_studies(corpus: Corpus, model: TasteRegressor,
                 cfg: DEConfig = DEConfig()) -> list[dict]:
    """Run the three configured reformulation scenarios."""
    results = []
    for case in CASE_STUDIES:
        try:
            recipe = corpus.recipe(case["recipe_id"])
        except KeyError:
            raise MissingFixture(
                f"case study recipe {case['recipe_id']!r} not in corpus"
            ) from None
        baseline = model.predict_recipe(recipe, corpus)
        weights = {dim: 1.0 for dim in case["hold"]}
        scenario = {
            "recipe_id": case["recipe_id"],
            "target": case["target"],
            "weights": weights,
            "bounds": {
                ingredient: list(bound)
                for ingredient, bound in case["constraints"].items()
            },
        }
        problem = problem_from_scenario(scenario, corpus, baseline)
        result = design(problem, hybrid_forward(recipe, corpus, model), cfg)
        results.append({
            "name": case["name"],
            "recipe_id": case["recipe_id"],
            "scenario": scenario,
            "target": problem.target,
            "weights": problem.weights,
            "result": result.as_dict(),
        })
    return results
