/** Mocked /v1 payloads shaped exactly like real service responses. */

import type { CaseDoc, DecisionDoc } from '../src/types.js';

export function baselineCase(): CaseDoc {
  return {
    case_id: 'draft-1',
    features: {
      kind: { type: 'symbolic', concept: 'car' },
      mileage: { type: 'numeric', value: 50000, range: [0, 300000] },
      noisy: { type: 'flag', value: false },
      note: { type: 'text', value: 'routine checkup' },
    },
  };
}

export function decision(overrides: Partial<DecisionDoc> = {}): DecisionDoc {
  return {
    decision_id: 'd-000',
    timestamp: '2026-08-09T12:00:00+00:00',
    engine_version: '0.1.0',
    case_base_version: 0,
    similarity: 0.8566666666666667,
    similar_case: {
      case_id: 'c2',
      features: {
        kind: { type: 'symbolic', concept: 'truck' },
        mileage: { type: 'numeric', value: 40000, range: [0, 300000] },
        noisy: { type: 'flag', value: false },
        note: { type: 'text', value: 'routine checkup' },
      },
    },
    solution: {
      action: 'routine-maintenance',
      concepts_involved: ['car'],
      parameters: {},
    },
    explanation: {
      concept_glosses: [{ concept: 'car', definition: 'a road vehicle' }],
      retrieval: {
        case_id: 'c2',
        similarity: 0.8566666666666667,
        breakdown: {
          per_feature: [
            { feature: 'kind', local_similarity: 0.6666666666666666, weight: 0.4, included: true },
            { feature: 'mileage', local_similarity: 0.9666666666666667, weight: 0.3, included: true },
            { feature: 'noisy', local_similarity: 1.0, weight: 0.2, included: true },
            { feature: 'note', local_similarity: 1.0, weight: 0.1, included: true },
          ],
          total: 0.8566666666666667,
        },
      },
      adaptation: {
        strategy: 'concept-substitution',
        action: 'routine-maintenance',
        substitutions: [
          { feature: 'kind', old: 'truck', new: 'car', common_ancestor: 'vehicle' },
        ],
      },
      rendered_text:
        'Decision: routine-maintenance\nNearest case: c2 (similarity 0.8567)',
    },
    ...overrides,
  };
}

export function variantDecision(): DecisionDoc {
  const base = decision();
  return {
    ...base,
    decision_id: 'd-001',
    similarity: 0.63,
    similar_case: { ...base.similar_case, case_id: 'c1' },
    solution: { ...base.solution, action: 'service-brakes' },
    explanation: {
      ...base.explanation,
      retrieval: { ...base.explanation.retrieval, case_id: 'c1', similarity: 0.63 },
      rendered_text: 'Decision: service-brakes\nNearest case: c1 (similarity 0.6300)',
    },
  };
}
