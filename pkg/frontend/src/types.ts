// Shapes mirroring the service's published JSON schemas (/api/schema).

export const DIMENSIONS = ['sweet', 'sour', 'bitter', 'umami', 'salt'] as const;
export type Dimension = (typeof DIMENSIONS)[number];

export type TasteProfile = Record<Dimension, number>;

export interface Component {
  ingredient_id: string;
  mass_fraction: number;
}

export interface IngredientInfo {
  ingredient_id: string;
  display_name: string;
  taste: TasteProfile;
  source_tier: string;
  categories: string[];
}

export interface RecipeInfo {
  recipe_id: string;
  name: string;
  confidence: string;
  components: Component[];
  has_ground_truth: boolean;
}

export interface DimensionBounds {
  reuss: number;
  voigt: number;
  hs_lower: number;
  hs_upper: number;
  hs_midpoint: number;
}

export interface ForwardResult {
  components: Component[];
  bounds: Record<Dimension, DimensionBounds>;
  chemistry_features: Record<string, number>;
  hybrid_prediction: TasteProfile;
}

export interface Scenario {
  recipe_id: string;
  target?: Record<string, number | { delta: number }>;
  weights?: Record<string, number>;
  bounds?: Record<string, [number, number]>;
  seed?: number;
  max_iterations?: number;
}

export interface DesignResult {
  fractions: number[];
  predicted_before: TasteProfile;
  predicted_after: TasteProfile;
  objective_value: number;
  deltas: Record<string, number>;
  iterations: number;
  converged: boolean;
  trace: number[];
}

export interface DesignResponse {
  recipe_id: string;
  seed: number;
  target: TasteProfile;
  weights: TasteProfile;
  result: DesignResult;
}

export interface ApiErrorBody {
  error: { code: string; message: string; field?: string };
}
