/**
 * What-if session state.
 *
 * The panel always has a baseline (the decision for the case as submitted);
 * each explore round sends override sets to /v1/whatif and records one row
 * per variant with the server's decision payload. Deltas shown next to a
 * row are differences between payload fields, never recomputed scores.
 * Promoting a row makes its variant case the new baseline, so the next
 * round of overrides starts from what the user just learned.
 *
 * Explore responses may arrive out of order; rows render in request order
 * (a response only applies if no newer round has already been applied).
 */

import type { CaseDoc, DecisionDoc, OverrideDoc } from './types.js';

export interface WhatIfRow {
  /** Human description of the override set, e.g. "noisy = true". */
  description: string;
  /** The variant case the row's decision was computed for. */
  caseDoc: CaseDoc;
  decision: DecisionDoc;
}

export interface WhatIfState {
  baselineCase: CaseDoc;
  baseline: DecisionDoc;
  rows: WhatIfRow[];
  /** Sequence number of the explore round the rows belong to. */
  round: number;
}

export interface RowDiff {
  similarityDelta: number;
  nearestCaseChanged: boolean;
  actionChanged: boolean;
}

export function startSession(baselineCase: CaseDoc, baseline: DecisionDoc): WhatIfState {
  return { baselineCase, baseline, rows: [], round: 0 };
}

/** Build the variant case an override set produces (client-side data edit). */
export function applyOverride(caseDoc: CaseDoc, override: OverrideDoc): CaseDoc {
  return {
    case_id: caseDoc.case_id,
    features: { ...caseDoc.features, ...override },
  };
}

export function describeOverride(override: OverrideDoc): string {
  return Object.keys(override)
    .sort()
    .map((name) => {
      const value = override[name]!;
      switch (value.type) {
        case 'numeric':
          return `${name} = ${value.value}`;
        case 'symbolic':
          return `${name} = ${value.concept}`;
        case 'flag':
          return `${name} = ${value.value}`;
        case 'text':
          return `${name} = ${JSON.stringify(value.value)}`;
      }
    })
    .join(', ');
}

/**
 * Fold a /v1/whatif response into the session. The response's first
 * decision is the baseline recomputation; the rest line up with the
 * overrides, in request order.
 */
export function applyExploreResponse(
  state: WhatIfState,
  round: number,
  overrides: OverrideDoc[],
  decisions: DecisionDoc[],
): WhatIfState {
  if (round <= state.round) {
    return state; // a newer round already rendered; drop the stale response
  }
  if (decisions.length !== overrides.length + 1) {
    throw new Error('what-if response does not match the override list');
  }
  const rows = overrides.map((override, i) => ({
    description: describeOverride(override),
    caseDoc: applyOverride(state.baselineCase, override),
    decision: decisions[i + 1]!,
  }));
  return { ...state, baseline: decisions[0]!, rows, round };
}

/** Row deltas, straight from payload fields. */
export function diffAgainstBaseline(state: WhatIfState, row: WhatIfRow): RowDiff {
  return {
    similarityDelta: row.decision.similarity - state.baseline.similarity,
    nearestCaseChanged:
      row.decision.similar_case.case_id !== state.baseline.similar_case.case_id,
    actionChanged: row.decision.solution.action !== state.baseline.solution.action,
  };
}

/**
 * Promote a row: its variant case and decision become the baseline and the
 * row list clears, ready for the next exploration from the new anchor.
 */
export function promoteRow(state: WhatIfState, index: number): WhatIfState {
  const row = state.rows[index];
  if (!row) {
    throw new Error(`no what-if row at index ${index}`);
  }
  return {
    baselineCase: row.caseDoc,
    baseline: row.decision,
    rows: [],
    round: state.round,
  };
}

/** Fixed 4-decimal, sign-carrying rendering for similarity deltas. */
export function formatDelta(delta: number): string {
  const formatted = Math.abs(delta).toFixed(4);
  if (delta > 0) return `+${formatted}`;
  if (delta < 0) return `-${formatted}`;
  return formatted;
}
