"""Composite-material bounds on recipe taste: Reuss, Voigt, Hashin-Shtrikman.

Each taste dimension is treated independently. A recipe is an N-phase mixture
with ingredient scores T_i and mass fractions v_i on the unit simplex. Scores
are regularized with a small floor epsilon before any harmonic average so that
zero-score phases (sugar has sour = 0) stay well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import DIMENSIONS, Corpus, RecipeComposition
from .errors import DimensionMismatch, NoGroundTruth, NumericalError


@dataclass(frozen=True)
class BoundsConfig:
    """epsilon: zero-regularization floor; d: shape parameter, (d-1) scales
    the auxiliary shift (d=3 recovers the spherical-inclusion factor 2)."""

    epsilon: float = 0.01
    d: float = 3.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.d <= 1:
            raise ValueError("d must be > 1")


@dataclass(frozen=True)
class DimensionBounds:
    reuss: float
    voigt: float
    hs_lower: float
    hs_upper: float

    @property
    def hs_midpoint(self) -> float:
        return (self.hs_lower + self.hs_upper) / 2.0


@dataclass(frozen=True)
class BoundsResult:
    """Per-dimension bound bracket for one recipe."""

    sweet: DimensionBounds
    sour: DimensionBounds
    bitter: DimensionBounds
    umami: DimensionBounds
    salt: DimensionBounds

    def dimension(self, name: str) -> DimensionBounds:
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {
            dim: {
                "reuss": b.reuss,
                "voigt": b.voigt,
                "hs_lower": b.hs_lower,
                "hs_upper": b.hs_upper,
                "hs_midpoint": b.hs_midpoint,
            }
            for dim in DIMENSIONS
            for b in [self.dimension(dim)]
        }


def _check_pair(T, v):
    T = np.asarray(T, dtype=float)
    v = np.asarray(v, dtype=float)
    if T.shape != v.shape or T.ndim != 1:
        raise DimensionMismatch(f"scores {T.shape} vs weights {v.shape}")
    return T, v


def voigt(T, v) -> float:
    """Arithmetic weighted average (upper envelope)."""
    T, v = _check_pair(T, v)
    return float(np.dot(v, T))


def reuss(T, v, cfg: BoundsConfig = BoundsConfig()) -> float:
    """Harmonic weighted average of the epsilon-regularized scores."""
    T, v = _check_pair(T, v)
    Tr = np.maximum(T, cfg.epsilon)
    return float(1.0 / np.sum(v / Tr))


def hs_auxiliary(T, v, T0: float, cfg: BoundsConfig = BoundsConfig()) -> float:
    """Auxiliary function A(T0) = [sum v_i/(T_i + (d-1) T0)]^-1 - (d-1) T0."""
    T, v = _check_pair(T, v)
    if T0 < 0:
        raise ValueError("T0 must be >= 0")
    shift = (cfg.d - 1.0) * T0
    denom = np.maximum(T, cfg.epsilon) + shift
    if np.any(denom <= 0):
        raise NumericalError("non-positive denominator in auxiliary function")
    return float(1.0 / np.sum(v / denom) - shift)


def hs_bounds(T, v, cfg: BoundsConfig = BoundsConfig()) -> tuple[float, float]:
    """Multi-phase Hashin-Shtrikman bracket: (A(T_min), A(T_max)).

    Extremes are taken over the regularized scores, matching the auxiliary
    function's inputs.
    """
    T, v = _check_pair(T, v)
    Tr = np.maximum(T, cfg.epsilon)
    lower = hs_auxiliary(T, v, float(np.min(Tr)), cfg)
    upper = hs_auxiliary(T, v, float(np.max(Tr)), cfg)
    return lower, upper


def recipe_bounds(
    recipe: RecipeComposition, corpus: Corpus, cfg: BoundsConfig = BoundsConfig()
) -> BoundsResult:
    """All five dimension brackets for one recipe."""
    v = np.asarray(recipe.fractions, dtype=float)
    per_dim = {}
    for dim in DIMENSIONS:
        T = np.array(
            [getattr(corpus.ingredients[i].taste, dim) for i in recipe.ingredient_ids]
        )
        lower, upper = hs_bounds(T, v, cfg)
        per_dim[dim] = DimensionBounds(
            reuss=reuss(T, v, cfg),
            voigt=voigt(T, v),
            hs_lower=lower,
            hs_upper=upper,
        )
    return BoundsResult(**per_dim)


def two_phase_hs(T1: float, T2: float, v1: float, cfg: BoundsConfig = BoundsConfig()):
    """Classical two-phase HS bracket in closed form (test oracle for N=2).

    With Tlo <= Thi: lower = Tlo + v_hi / (1/(Thi-Tlo) + v_lo/(d Tlo)) and
    symmetrically for the upper bound.
    """
    a = max(T1, cfg.epsilon)
    b = max(T2, cfg.epsilon)
    va, vb = v1, 1.0 - v1
    if a > b:
        a, b = b, a
        va, vb = vb, va
    if a == b:
        return a, a
    lower = a + vb / (1.0 / (b - a) + va / (cfg.d * a))
    upper = b + va / (1.0 / (a - b) + vb / (cfg.d * b))
    return lower, upper


def sweep_d(
    corpus: Corpus, d_values, cfg: BoundsConfig = BoundsConfig()
) -> list[dict]:
    """Exceedance fraction (actual > hs_upper) per d over all recipe-dimension
    pairs with ground truth."""
    recipes = corpus.with_ground_truth()
    if not recipes:
        raise NoGroundTruth("sweep requires ground-truth recipes")
    rows = []
    for d in d_values:
        d_cfg = BoundsConfig(epsilon=cfg.epsilon, d=float(d))
        above = 0
        total = 0
        for recipe in recipes:
            result = recipe_bounds(recipe, corpus, d_cfg)
            for dim in DIMENSIONS:
                actual = getattr(recipe.ground_truth, dim)
                if actual > result.dimension(dim).hs_upper:
                    above += 1
                total += 1
        rows.append({"d": float(d), "fraction_above_upper": above / total})
    return rows
