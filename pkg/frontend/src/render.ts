import { DIMENSIONS, type Dimension, type ForwardResult } from './types';
import { formatScore, type DeltaRow } from './state';
import type { ApiError } from './api';

const SCALE_MAX = 100;

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function pct(value: number): string {
  return `${((Math.min(Math.max(value, 0), SCALE_MAX) / SCALE_MAX) * 100).toFixed(2)}%`;
}

/**
 * Forward panel: one row per dimension with the HS band drawn behind the
 * hybrid prediction marker. A single-ingredient recipe collapses the band
 * to a point.
 */
export function renderForwardPanel(result: ForwardResult): string {
  const rows = DIMENSIONS.map((dim: Dimension) => {
    const b = result.bounds[dim];
    const value = result.hybrid_prediction[dim];
    const bandWidth = Math.max(b.hs_upper - b.hs_lower, 0);
    return `
      <div class="dim-row" data-dim="${dim}">
        <span class="dim-label">${dim}</span>
        <div class="dim-track">
          <div class="dim-band" style="left:${pct(b.hs_lower)};width:${pct(bandWidth)}"></div>
          <div class="dim-marker" style="left:${pct(value)}"></div>
        </div>
        <span class="dim-value" data-role="prediction">${formatScore(value)}</span>
        <span class="dim-bounds">[${formatScore(b.hs_lower)}, ${formatScore(b.hs_upper)}]</span>
      </div>`;
  });
  return `<div class="forward-panel">${rows.join('')}</div>`;
}

export function renderEmptyState(): string {
  return '<p class="empty-state">Add an ingredient to see its predicted taste profile.</p>';
}

export function renderErrorBanner(error: ApiError): string {
  const field = error.field ? ` <code>${escapeHtml(error.field)}</code>` : '';
  return `<div class="error-banner" data-code="${escapeHtml(error.code)}">` +
    `${escapeHtml(error.message)}${field}</div>`;
}

export function renderDeltaTable(rows: DeltaRow[]): string {
  const body = rows
    .map(
      (row) => `
      <tr>
        <td>${escapeHtml(row.ingredient_id)}</td>
        <td>${row.before.toFixed(3)}</td>
        <td>${row.after.toFixed(3)}</td>
        <td class="${row.delta >= 0 ? 'delta-up' : 'delta-down'}">
          ${row.delta >= 0 ? '+' : ''}${row.delta.toFixed(3)}
        </td>
      </tr>`,
    )
    .join('');
  return `
    <table class="delta-table">
      <thead><tr><th>ingredient</th><th>before</th><th>after</th><th>delta</th></tr></thead>
      <tbody>${body}</tbody>
    </table>`;
}

/** Inline SVG polyline of the best objective per generation. */
export function renderTrace(trace: number[]): string {
  if (trace.length === 0) return '<svg class="trace" viewBox="0 0 100 30"></svg>';
  const max = Math.max(...trace, 1e-12);
  const points = trace
    .map((value, i) => {
      const x = trace.length === 1 ? 0 : (i / (trace.length - 1)) * 100;
      const y = 28 - (value / max) * 26;
      return `${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(' ');
  return `<svg class="trace" viewBox="0 0 100 30" preserveAspectRatio="none">` +
    `<polyline points="${points}" fill="none" /></svg>`;
}

export function renderProfileDiff(
  before: Record<Dimension, number>,
  after: Record<Dimension, number>,
): string {
  const rows = DIMENSIONS.map(
    (dim) =>
      `<tr><td>${dim}</td><td>${formatScore(before[dim])}</td>` +
      `<td>${formatScore(after[dim])}</td></tr>`,
  ).join('');
  return `
    <table class="profile-diff">
      <thead><tr><th>dimension</th><th>before</th><th>after</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}
