import { describe, expect, it } from 'vitest';

import {
  applyServerViolations,
  draftFromCase,
  draftToCase,
  isSubmittable,
  setFieldInput,
} from '../src/draft.js';
import type { ConceptDoc } from '../src/types.js';
import { baselineCase } from './fixtures.js';

const CONCEPTS: ConceptDoc[] = [
  { id: 'car', label: 'Car', definition: 'a road vehicle', parents: ['vehicle'] },
  { id: 'truck', label: 'Truck', definition: 'a cargo vehicle', parents: ['vehicle'] },
];

describe('seeding from a case document', () => {
  it('creates one field per feature, sorted by name', () => {
    const draft = draftFromCase(baselineCase());
    expect(draft.fields.map((f) => f.name)).toEqual(['kind', 'mileage', 'noisy', 'note']);
    expect(draft.fields.map((f) => f.kind)).toEqual(['symbolic', 'numeric', 'flag', 'text']);
  });

  it('a seeded draft is immediately submittable', () => {
    expect(isSubmittable(draftFromCase(baselineCase()))).toBe(true);
  });

  it('compiles back to the same wire document', () => {
    const draft = draftFromCase(baselineCase());
    expect(draftToCase(draft)).toEqual({
      case_id: 'draft-1',
      features: baselineCase().features,
    });
  });
});

describe('client-side type checks gate submission', () => {
  it('non-numeric input invalidates a numeric field', () => {
    let draft = draftFromCase(baselineCase());
    draft = setFieldInput(draft, 'mileage', { raw: 'many' });
    expect(isSubmittable(draft)).toBe(false);
    expect(draft.fields.find((f) => f.name === 'mileage')!.error).toMatch(/number/);
  });

  it('out-of-range numeric input is flagged with the declared range', () => {
    let draft = draftFromCase(baselineCase());
    draft = setFieldInput(draft, 'mileage', { raw: '999999999' });
    expect(isSubmittable(draft)).toBe(false);
    expect(draft.fields.find((f) => f.name === 'mileage')!.error).toMatch(/between 0 and 300000/);
  });

  it('unknown concept is rejected when the ontology is known', () => {
    let draft = draftFromCase(baselineCase());
    draft = setFieldInput(draft, 'kind', { concept: 'spaceship' }, CONCEPTS);
    expect(isSubmittable(draft)).toBe(false);
  });

  it('fixing the input restores submittability', () => {
    let draft = draftFromCase(baselineCase());
    draft = setFieldInput(draft, 'mileage', { raw: 'many' });
    draft = setFieldInput(draft, 'mileage', { raw: '120000' });
    expect(isSubmittable(draft)).toBe(true);
    const compiled = draftToCase(draft);
    expect(compiled.features.mileage).toEqual({
      type: 'numeric',
      value: 120000,
      range: [0, 300000],
    });
  });

  it('an empty case id blocks submission', () => {
    const draft = { ...draftFromCase(baselineCase()), caseId: '', caseIdError: 'case id is required' };
    expect(isSubmittable(draft)).toBe(false);
  });

  it('compiling an invalid draft throws', () => {
    let draft = draftFromCase(baselineCase());
    draft = setFieldInput(draft, 'mileage', { raw: '' });
    expect(() => draftToCase(draft)).toThrow(/invalid/);
  });
});

describe('server violations map onto fields', () => {
  it('assigns messages to the named features', () => {
    let draft = draftFromCase(baselineCase());
    draft = applyServerViolations(draft, [
      { feature: 'kind', message: "unknown concept 'ghost'" },
      { feature: null, message: 'case level problem' },
    ]);
    expect(draft.fields.find((f) => f.name === 'kind')!.serverError).toMatch(/ghost/);
    expect(draft.fields.find((f) => f.name === 'note')!.serverError).toBeNull();
  });

  it('editing a field clears its server error', () => {
    let draft = draftFromCase(baselineCase());
    draft = applyServerViolations(draft, [{ feature: 'kind', message: 'bad' }]);
    draft = setFieldInput(draft, 'kind', { concept: 'truck' }, CONCEPTS);
    expect(draft.fields.find((f) => f.name === 'kind')!.serverError).toBeNull();
  });
});
