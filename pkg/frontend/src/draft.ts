/**
 * CaseDraft: the editable mirror of a case wire document.
 *
 * Every field keeps its raw input text plus a validation message; the draft
 * compiles to a CaseDoc only when every field passes its client-side type
 * check, and submission stays disabled until then. Server-side validation
 * remains authoritative; these checks only catch what a form can.
 */

import type { CaseDoc, ConceptDoc, FeatureKind, FeatureValueDoc } from './types.js';

export interface FieldDraft {
  name: string;
  kind: FeatureKind;
  /** Raw editor state, interpretation depends on kind. */
  raw: string;
  flag: boolean;
  concept: string;
  /** Declared range for numeric fields, from the seeding case. */
  range: [number, number] | null;
  error: string | null;
  /** Server-reported violation, shown inline after a 400. */
  serverError: string | null;
}

export interface CaseDraftState {
  caseId: string;
  caseIdError: string | null;
  fields: FieldDraft[];
}

export function draftFromCase(doc: CaseDoc): CaseDraftState {
  const fields = Object.keys(doc.features)
    .sort()
    .map((name) => {
      const value = doc.features[name]!;
      const field: FieldDraft = {
        name,
        kind: value.type,
        raw: '',
        flag: false,
        concept: '',
        range: null,
        error: null,
        serverError: null,
      };
      switch (value.type) {
        case 'numeric':
          field.raw = String(value.value);
          field.range = value.range;
          break;
        case 'symbolic':
          field.concept = value.concept;
          break;
        case 'flag':
          field.flag = value.value;
          break;
        case 'text':
          field.raw = value.value;
          break;
      }
      return validateField(field);
    });
  return { caseId: doc.case_id, caseIdError: doc.case_id ? null : 'case id is required', fields };
}

export function validateField(field: FieldDraft, concepts?: ConceptDoc[]): FieldDraft {
  let error: string | null = null;
  if (field.kind === 'numeric') {
    const value = Number(field.raw.trim());
    if (field.raw.trim() === '' || !Number.isFinite(value)) {
      error = 'enter a number';
    } else if (field.range && (value < field.range[0] || value > field.range[1])) {
      error = `must be between ${field.range[0]} and ${field.range[1]}`;
    }
  } else if (field.kind === 'symbolic') {
    if (!field.concept) {
      error = 'pick a concept';
    } else if (concepts && !concepts.some((c) => c.id === field.concept)) {
      error = `unknown concept ${field.concept}`;
    }
  }
  return { ...field, error };
}

export function setFieldInput(
  state: CaseDraftState,
  name: string,
  input: { raw?: string; flag?: boolean; concept?: string },
  concepts?: ConceptDoc[],
): CaseDraftState {
  return {
    ...state,
    fields: state.fields.map((field) =>
      field.name === name
        ? validateField({ ...field, ...input, serverError: null }, concepts)
        : field,
    ),
  };
}

export function isSubmittable(state: CaseDraftState): boolean {
  return state.caseIdError === null && state.fields.every((f) => f.error === null);
}

/** Compile to the wire document; only valid drafts compile. */
export function draftToCase(state: CaseDraftState): CaseDoc {
  if (!isSubmittable(state)) {
    throw new Error('draft has invalid fields');
  }
  const features: Record<string, FeatureValueDoc> = {};
  for (const field of state.fields) {
    features[field.name] = fieldToValue(field);
  }
  return { case_id: state.caseId, features };
}

export function fieldToValue(field: FieldDraft): FeatureValueDoc {
  switch (field.kind) {
    case 'numeric':
      return { type: 'numeric', value: Number(field.raw.trim()), range: field.range! };
    case 'symbolic':
      return { type: 'symbolic', concept: field.concept };
    case 'flag':
      return { type: 'flag', value: field.flag };
    case 'text':
      return { type: 'text', value: field.raw };
  }
}

/** Map a 400 response's violation list onto the offending fields. */
export function applyServerViolations(
  state: CaseDraftState,
  violations: { feature: string | null; message: string }[],
): CaseDraftState {
  const byFeature = new Map<string, string>();
  for (const violation of violations) {
    if (violation.feature !== null && !byFeature.has(violation.feature)) {
      byFeature.set(violation.feature, violation.message);
    }
  }
  return {
    ...state,
    fields: state.fields.map((field) =>
      byFeature.has(field.name)
        ? { ...field, serverError: byFeature.get(field.name)! }
        : field,
    ),
  };
}
