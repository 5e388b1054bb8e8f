/**
 * DOM builders for decision payloads.
 *
 * Rendering is a pure function of the payloads: no numbers are computed
 * here beyond differences of payload fields in the what-if table, and
 * identical payloads produce identical DOM text. Every cell is stamped
 * with a data-field attribute naming the payload path it displays, which
 * the component tests use to assert traceability.
 */

import type { DecisionDoc, ViolationDoc } from './types.js';
import { diffAgainstBaseline, formatDelta, type WhatIfState } from './whatif.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function formatSimilarity(value: number): string {
  return value.toFixed(4);
}

/** The main explanation panel for one decision payload. */
export function renderDecision(decision: DecisionDoc): HTMLElement {
  const explanation = decision.explanation;
  const root = el('section', { class: 'decision' });

  root.append(
    el('h2', { class: 'decision-action', 'data-field': 'solution.action' }, [
      decision.solution.action,
    ]),
    el('p', { class: 'nearest-case' }, [
      'Nearest case ',
      el('strong', { 'data-field': 'similar_case.case_id' }, [
        decision.similar_case.case_id,
      ]),
      ' with similarity ',
      el('span', { 'data-field': 'similarity' }, [formatSimilarity(decision.similarity)]),
      el('span', { class: 'meta', 'data-field': 'case_base_version' }, [
        ` (case base v${decision.case_base_version})`,
      ]),
    ]),
    el('pre', { class: 'rendered-text', 'data-field': 'explanation.rendered_text' }, [
      explanation.rendered_text,
    ]),
    renderBreakdown(explanation.retrieval.breakdown),
  );

  if (explanation.adaptation.substitutions.length > 0) {
    const items = explanation.adaptation.substitutions.map((sub) =>
      el('li', { 'data-field': 'explanation.adaptation.substitutions[]' }, [
        `${sub.feature}: ${sub.old} → ${sub.new} (common ancestor: ${sub.common_ancestor})`,
      ]),
    );
    root.append(el('h3', {}, ['Adaptations']), el('ul', { class: 'substitutions' }, items));
  }

  // The glossary section disappears entirely when there is nothing to gloss.
  if (explanation.concept_glosses.length > 0) {
    const items = explanation.concept_glosses.map((gloss) =>
      el('li', { 'data-field': 'explanation.concept_glosses[]' }, [
        el('strong', {}, [gloss.concept]),
        `: ${gloss.definition}`,
      ]),
    );
    root.append(el('h3', {}, ['Concept glossary']), el('ul', { class: 'glossary' }, items));
  }
  return root;
}

export function renderBreakdown(breakdown: DecisionDoc['explanation']['retrieval']['breakdown']): HTMLElement {
  const header = el('tr', {}, [
    el('th', {}, ['feature']),
    el('th', {}, ['local similarity']),
    el('th', {}, ['weight']),
    el('th', {}, ['included']),
  ]);
  const rows = breakdown.per_feature.map((row) =>
    el('tr', { 'data-feature': row.feature }, [
      el('td', { 'data-field': 'breakdown.feature' }, [row.feature]),
      el('td', { 'data-field': 'breakdown.local_similarity' }, [
        formatSimilarity(row.local_similarity),
      ]),
      el('td', { 'data-field': 'breakdown.weight' }, [formatSimilarity(row.weight)]),
      el('td', { 'data-field': 'breakdown.included' }, [row.included ? 'yes' : 'ignored']),
    ]),
  );
  const total = el('tr', { class: 'total' }, [
    el('td', {}, ['total']),
    el('td', { 'data-field': 'breakdown.total', colspan: '3' }, [
      formatSimilarity(breakdown.total),
    ]),
  ]);
  return el('table', { class: 'breakdown' }, [header, ...rows, total]);
}

/** Side-by-side what-if table: baseline row plus one row per variant. */
export function renderWhatIfTable(
  state: WhatIfState,
  onPromote: (index: number) => void,
): HTMLElement {
  const table = el('table', { class: 'whatif' });
  table.append(
    el('tr', {}, [
      el('th', {}, ['variant']),
      el('th', {}, ['action']),
      el('th', {}, ['nearest case']),
      el('th', {}, ['similarity']),
      el('th', {}, ['delta']),
      el('th', {}, ['']),
    ]),
  );
  table.append(
    el('tr', { class: 'baseline' }, [
      el('td', {}, ['baseline']),
      el('td', { 'data-field': 'solution.action' }, [state.baseline.solution.action]),
      el('td', { 'data-field': 'similar_case.case_id' }, [
        state.baseline.similar_case.case_id,
      ]),
      el('td', { 'data-field': 'similarity' }, [formatSimilarity(state.baseline.similarity)]),
      el('td', {}, ['—']),
      el('td', {}, ['']),
    ]),
  );
  state.rows.forEach((row, index) => {
    const diff = diffAgainstBaseline(state, row);
    const highlight = [
      diff.actionChanged ? 'action-changed' : '',
      diff.nearestCaseChanged ? 'nearest-changed' : '',
    ]
      .filter(Boolean)
      .join(' ');
    const promote = el('button', { type: 'button', class: 'promote' }, ['promote']);
    promote.addEventListener('click', () => onPromote(index));
    table.append(
      el('tr', { class: `variant ${highlight}`.trim(), 'data-row': String(index) }, [
        el('td', { class: 'description' }, [row.description]),
        el('td', { 'data-field': 'solution.action' }, [row.decision.solution.action]),
        el('td', { 'data-field': 'similar_case.case_id' }, [
          row.decision.similar_case.case_id,
          diff.nearestCaseChanged ? ' *' : '',
        ]),
        el('td', { 'data-field': 'similarity' }, [formatSimilarity(row.decision.similarity)]),
        el('td', { class: 'delta', 'data-field': 'similarity-delta' }, [
          formatDelta(diff.similarityDelta),
        ]),
        el('td', {}, [promote]),
      ]),
    );
  });
  return table;
}

/** Per-row error display for a failed explore round. */
export function renderOverrideError(index: number, message: string): HTMLElement {
  return el('p', { class: 'override-error', 'data-override-index': String(index) }, [
    `override ${index}: ${message}`,
  ]);
}

export function renderApiError(code: string, message: string): HTMLElement {
  return el('p', { class: 'api-error' }, [
    el('strong', {}, [code]),
    `: ${message}`,
  ]);
}

export function renderViolationList(violations: ViolationDoc[]): HTMLElement {
  return el(
    'ul',
    { class: 'violations' },
    violations.map((violation) =>
      el('li', {}, [
        violation.feature ? `${violation.feature}: ${violation.message}` : violation.message,
      ]),
    ),
  );
}
