import { describe, expect, it } from 'vitest';

import { ApiError } from '../src/api';
import {
  renderDeltaTable,
  renderEmptyState,
  renderErrorBanner,
  renderForwardPanel,
  renderTrace,
} from '../src/render';
import type { DimensionBounds, ForwardResult } from '../src/types';

function bounds(lower: number, upper: number): DimensionBounds {
  return {
    reuss: lower,
    voigt: upper,
    hs_lower: lower,
    hs_upper: upper,
    hs_midpoint: (lower + upper) / 2,
  };
}

function forwardFixture(lower: number, upper: number, value: number): ForwardResult {
  const b = bounds(lower, upper);
  return {
    components: [{ ingredient_id: 'salt', mass_fraction: 1 }],
    bounds: { sweet: b, sour: b, bitter: b, umami: b, salt: b },
    chemistry_features: {},
    hybrid_prediction: { sweet: value, sour: value, bitter: value, umami: value, salt: value },
  };
}

describe('renderForwardPanel', () => {
  it('shows the prediction and the band per dimension', () => {
    const html = renderForwardPanel(forwardFixture(20, 30, 25.04));
    expect(html).toContain('data-dim="sweet"');
    expect(html).toContain('data-dim="salt"');
    expect((html.match(/data-role="prediction">25.0</g) ?? [])).toHaveLength(5);
    expect(html).toContain('[20.0, 30.0]');
  });

  it('collapses the band to a point for a single ingredient', () => {
    const html = renderForwardPanel(forwardFixture(95, 95, 95));
    expect(html).toContain('width:0.00%');
  });
});

describe('renderErrorBanner', () => {
  it('shows message, code, and field', () => {
    const html = renderErrorBanner(
      new ApiError(422, 'fraction_sum', 'fractions sum to 0.9000', 'components'),
    );
    expect(html).toContain('data-code="fraction_sum"');
    expect(html).toContain('fractions sum to 0.9000');
    expect(html).toContain('<code>components</code>');
  });

  it('escapes markup in messages', () => {
    const html = renderErrorBanner(new ApiError(422, 'x', '<script>boom</script>'));
    expect(html).not.toContain('<script>');
  });
});

describe('renderDeltaTable', () => {
  it('signs and colors the deltas', () => {
    const html = renderDeltaTable([
      { ingredient_id: 'tomato', before: 0.6, after: 0.759, delta: 0.159 },
      { ingredient_id: 'sugar', before: 0.15, after: 0.05, delta: -0.1 },
    ]);
    expect(html).toContain('+0.159');
    expect(html).toContain('-0.100');
    expect(html).toContain('delta-up');
    expect(html).toContain('delta-down');
  });
});

describe('renderTrace', () => {
  it('emits one polyline point per generation', () => {
    const html = renderTrace([3, 2, 1, 0.5]);
    const points = html.match(/points="([^"]+)"/)![1].split(' ');
    expect(points).toHaveLength(4);
  });

  it('handles an empty trace', () => {
    expect(renderTrace([])).toContain('<svg');
  });
});

describe('renderEmptyState', () => {
  it('prompts for an ingredient', () => {
    expect(renderEmptyState()).toContain('Add an ingredient');
  });
});
