import type { Scenario } from './types';

/** Workbench presets: a recipe to load plus an optional design scenario. */
export interface Preset {
  id: string;
  label: string;
  recipe_id: string;
  scenario?: Scenario;
}

export const PRESETS: Preset[] = [
  {
    id: 'rp55',
    label: 'Chocolate spread (RP55)',
    recipe_id: 'RP55',
  },
  {
    id: 'case1',
    label: 'Case 1: cut salt, hold umami (RP14)',
    recipe_id: 'RP14',
    scenario: {
      recipe_id: 'RP14',
      target: { salt: { delta: -5.0 } },
      weights: { umami: 1.0 },
      bounds: { salt: [0.0, 0.003] },
      seed: 42,
    },
  },
  {
    id: 'case3',
    label: 'Case 3: boost umami, trim sweet (RP68)',
    recipe_id: 'RP68',
    scenario: {
      recipe_id: 'RP68',
      target: { umami: { delta: 3.0 }, sweet: { delta: -3.0 } },
      bounds: { sugar: [0.0, 0.05] },
      seed: 42,
    },
  },
];
