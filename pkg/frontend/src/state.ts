import type { Component, ForwardResult, TasteProfile } from './types';

export interface SliderRow {
  ingredient_id: string;
  display_name: string;
  fraction: number;
  locked: boolean;
}

/**
 * Scale nonnegative fractions so they sum to 1 (mirror of the dataset
 * module's renormalize; used only for composition editing, never for taste
 * math).
 */
export function renormalize(fractions: number[]): number[] {
  if (fractions.some((f) => f < 0)) {
    throw new Error('fractions must be nonnegative');
  }
  const total = fractions.reduce((a, b) => a + b, 0);
  if (total <= 0) throw new Error('all fractions are zero');
  if (Math.abs(total - 1) <= 1e-12) return fractions.slice();
  return fractions.map((f) => f / total);
}

/**
 * Apply one slider edit: pin the edited slot and every locked slot, then
 * scale the remaining unlocked slots proportionally so the total stays 1.
 */
export function adjustFraction(
  rows: SliderRow[],
  index: number,
  value: number,
): SliderRow[] {
  const lockedSum = rows.reduce(
    (sum, row, i) => (row.locked && i !== index ? sum + row.fraction : sum),
    0,
  );
  const pinned = Math.min(Math.max(value, 0), Math.max(1 - lockedSum, 0));
  const residual = 1 - lockedSum - pinned;
  const peers = rows
    .map((row, i) => ({ row, i }))
    .filter(({ row, i }) => i !== index && !row.locked);
  const peerSum = peers.reduce((sum, { row }) => sum + row.fraction, 0);
  const next = rows.map((row) => ({ ...row }));
  next[index].fraction = pinned;
  for (const { row, i } of peers) {
    next[i].fraction =
      peerSum > 0 ? (row.fraction / peerSum) * residual : residual / peers.length;
  }
  return next;
}

export function toComponents(rows: SliderRow[]): Component[] {
  return rows
    .filter((row) => row.fraction > 0)
    .map((row) => ({ ingredient_id: row.ingredient_id, mass_fraction: row.fraction }));
}

export interface HistoryEntry {
  label: string;
  components: Component[];
  prediction: TasteProfile | null;
  at: string; // ISO timestamp
}

/** Session history is append-only; returns a new array, never mutates. */
export function appendHistory(
  history: readonly HistoryEntry[],
  entry: HistoryEntry,
): HistoryEntry[] {
  return [...history, entry];
}

const CSV_HEADER =
  'recipe_id,recipe_name,confidence,ingredient_id,mass_fraction,' +
  'gt_sweet,gt_sour,gt_bitter,gt_umami,gt_salt';

/** Export the session history in the corpus recipes.csv schema. */
export function historyToCsv(history: readonly HistoryEntry[]): string {
  const lines = [CSV_HEADER];
  history.forEach((entry, n) => {
    const id = `UI${String(n + 1).padStart(3, '0')}`;
    const name = entry.label.replace(/,/g, ' ');
    for (const c of entry.components) {
      lines.push(`${id},${name},MODERATE,${c.ingredient_id},${c.mass_fraction},,,,,`);
    }
  });
  return lines.join('\n') + '\n';
}

export interface DeltaRow {
  ingredient_id: string;
  before: number;
  after: number;
  delta: number;
}

/** Per-ingredient before/after table from a design result. */
export function deltaTable(
  baseline: Component[],
  fractions: number[],
): DeltaRow[] {
  return baseline.map((c, i) => ({
    ingredient_id: c.ingredient_id,
    before: c.mass_fraction,
    after: fractions[i],
    delta: fractions[i] - c.mass_fraction,
  }));
}

/** The optimized formulation, ready to load back into the workbench. */
export function applyDesign(
  baseline: Component[],
  fractions: number[],
): Component[] {
  return baseline.map((c, i) => ({
    ingredient_id: c.ingredient_id,
    mass_fraction: fractions[i],
  }));
}

/** One decimal place, matching the report tables. */
export function formatScore(value: number): string {
  return value.toFixed(1);
}

export function formatBand(result: ForwardResult, dim: keyof ForwardResult['bounds']): string {
  const b = result.bounds[dim];
  return `${formatScore(b.hs_lower)}–${formatScore(b.hs_upper)}`;
}
