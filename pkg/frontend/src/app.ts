import { ApiClient, ApiError } from './api';
import { PRESETS } from './presets';
import {
  adjustFraction,
  appendHistory,
  applyDesign,
  deltaTable,
  historyToCsv,
  renormalize,
  toComponents,
  type HistoryEntry,
  type SliderRow,
} from './state';
import {
  renderDeltaTable,
  renderEmptyState,
  renderErrorBanner,
  renderForwardPanel,
  renderProfileDiff,
  renderTrace,
} from './render';
import type { DesignResponse, IngredientInfo, Scenario } from './types';

const DEBOUNCE_MS = 200;

const api = new ApiClient();

let rows: SliderRow[] = [];
let history: readonly HistoryEntry[] = [];
let ingredients: IngredientInfo[] = [];
let lastDesign: DesignResponse | null = null;
let designBaseline: ReturnType<typeof toComponents> = [];
let forwardAbort: AbortController | null = null;
let debounceTimer: ReturnType<typeof setTimeout> | null = null;
let designInFlight = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function scheduleForward() {
  if (debounceTimer !== null) clearTimeout(debounceTimer);
  debounceTimer = setTimeout(runForward, DEBOUNCE_MS);
}

async function runForward() {
  const panel = el('forward-panel');
  const components = toComponents(rows);
  if (components.length === 0) {
    panel.innerHTML = renderEmptyState();
    return;
  }
  forwardAbort?.abort();
  forwardAbort = new AbortController();
  try {
    const result = await api.predict(components, forwardAbort.signal);
    panel.innerHTML = renderForwardPanel(result);
    history = appendHistory(history, {
      label: 'manual edit',
      components,
      prediction: result.hybrid_prediction,
      at: new Date().toISOString(),
    });
    el('history-count').textContent = String(history.length);
  } catch (error) {
    if (error instanceof DOMException && error.name === 'AbortError') return;
    if (error instanceof ApiError) {
      panel.innerHTML = renderErrorBanner(error);
      return;
    }
    throw error;
  }
}

function renderSliders() {
  const host = el('sliders');
  host.innerHTML = '';
  rows.forEach((row, index) => {
    const wrap = document.createElement('div');
    wrap.className = 'slider-row';
    wrap.innerHTML = `
      <label>${row.display_name}</label>
      <input type="range" min="0" max="1" step="0.001" value="${row.fraction}" />
      <span class="fraction">${row.fraction.toFixed(3)}</span>
      <button class="lock" title="lock fraction">${row.locked ? '🔒' : '🔓'}</button>
      <button class="remove" title="remove">×</button>`;
    const slider = wrap.querySelector('input')!;
    slider.addEventListener('input', () => {
      rows = adjustFraction(rows, index, Number(slider.value));
      refreshFractions();
      scheduleForward();
    });
    wrap.querySelector<HTMLButtonElement>('.lock')!.addEventListener('click', () => {
      rows[index].locked = !rows[index].locked;
      renderSliders();
    });
    wrap.querySelector<HTMLButtonElement>('.remove')!.addEventListener('click', () => {
      rows.splice(index, 1);
      if (rows.length > 0) {
        const fractions = renormalize(rows.map((r) => Math.max(r.fraction, 1e-9)));
        rows = rows.map((r, i) => ({ ...r, fraction: fractions[i] }));
      }
      renderSliders();
      scheduleForward();
    });
    host.appendChild(wrap);
  });
}

function refreshFractions() {
  const host = el('sliders');
  host.querySelectorAll('.slider-row').forEach((node, i) => {
    node.querySelector<HTMLInputElement>('input')!.value = String(rows[i].fraction);
    node.querySelector('.fraction')!.textContent = rows[i].fraction.toFixed(3);
  });
}

function loadComposition(components: { ingredient_id: string; mass_fraction: number }[]) {
  const byId = new Map(ingredients.map((i) => [i.ingredient_id, i]));
  rows = components.map((c) => ({
    ingredient_id: c.ingredient_id,
    display_name: byId.get(c.ingredient_id)?.display_name ?? c.ingredient_id,
    fraction: c.mass_fraction,
    locked: false,
  }));
  renderSliders();
  scheduleForward();
}

async function runDesign(scenario: Scenario) {
  if (designInFlight) return; // one run at a time
  designInFlight = true;
  const panel = el('design-panel');
  panel.innerHTML = '<p class="running">optimizing…</p>';
  try {
    designBaseline = toComponents(rows);
    const response = await api.design(scenario);
    lastDesign = response;
    const table = deltaTable(designBaseline, response.result.fractions);
    panel.innerHTML = `
      ${renderTrace(response.result.trace)}
      ${renderProfileDiff(response.result.predicted_before, response.result.predicted_after)}
      ${renderDeltaTable(table)}
      <button id="apply-design">apply to workbench</button>`;
    el('apply-design').addEventListener('click', () => {
      if (!lastDesign) return;
      loadComposition(applyDesign(designBaseline, lastDesign.result.fractions));
      history = appendHistory(history, {
        label: `design ${lastDesign.recipe_id}`,
        components: applyDesign(designBaseline, lastDesign.result.fractions),
        prediction: lastDesign.result.predicted_after,
        at: new Date().toISOString(),
      });
      el('history-count').textContent = String(history.length);
    });
  } catch (error) {
    if (error instanceof ApiError) {
      panel.innerHTML = renderErrorBanner(error);
    } else {
      throw error;
    }
  } finally {
    designInFlight = false;
  }
}

function scenarioFromEditor(): Scenario {
  const text = el<HTMLTextAreaElement>('scenario-editor').value;
  return JSON.parse(text) as Scenario;
}

async function boot() {
  ingredients = await api.ingredients();
  const recipes = await api.recipes();

  const picker = el<HTMLSelectElement>('ingredient-picker');
  for (const ing of ingredients) {
    const option = document.createElement('option');
    option.value = ing.ingredient_id;
    option.textContent = ing.display_name;
    picker.appendChild(option);
  }
  el('add-ingredient').addEventListener('click', () => {
    const id = picker.value;
    if (!id || rows.some((r) => r.ingredient_id === id)) return;
    const info = ingredients.find((i) => i.ingredient_id === id)!;
    rows.push({
      ingredient_id: id,
      display_name: info.display_name,
      fraction: rows.length === 0 ? 1 : 0,
      locked: false,
    });
    if (rows.length > 1) rows = adjustFraction(rows, rows.length - 1, 1 / rows.length);
    renderSliders();
    scheduleForward();
  });

  const presetPicker = el<HTMLSelectElement>('preset-picker');
  for (const preset of PRESETS) {
    const option = document.createElement('option');
    option.value = preset.id;
    option.textContent = preset.label;
    presetPicker.appendChild(option);
  }
  el('load-preset').addEventListener('click', () => {
    const preset = PRESETS.find((p) => p.id === presetPicker.value);
    if (!preset) return;
    const recipe = recipes.find((r) => r.recipe_id === preset.recipe_id);
    if (!recipe) return;
    loadComposition(recipe.components);
    if (preset.scenario) {
      el<HTMLTextAreaElement>('scenario-editor').value = JSON.stringify(
        preset.scenario,
        null,
        2,
      );
    }
  });

  el('run-design').addEventListener('click', () => {
    try {
      void runDesign(scenarioFromEditor());
    } catch {
      el('design-panel').innerHTML =
        '<div class="error-banner">scenario is not valid JSON</div>';
    }
  });

  el('export-history').addEventListener('click', () => {
    const blob = new Blob([historyToCsv(history)], { type: 'text/csv' });
    const link = document.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = 'recipes.csv';
    link.click();
    URL.revokeObjectURL(link.href);
  });

  el('forward-panel').innerHTML = renderEmptyState();
}

void boot();
