/**
 * Application wiring: case editor -> decision view -> what-if explorer.
 *
 * The editor is seeded from the first stored case (its features define the
 * form), symbolic fields become concept pickers fed by GET /v1/ontology,
 * and every displayed value after that comes from /v1 response payloads.
 */

import { ApiClient, ApiRequestError } from './api.js';
import {
  applyServerViolations,
  draftFromCase,
  draftToCase,
  isSubmittable,
  setFieldInput,
  type CaseDraftState,
  type FieldDraft,
} from './draft.js';
import {
  renderApiError,
  renderDecision,
  renderOverrideError,
  renderWhatIfTable,
} from './render.js';
import type { CaseDoc, ConceptDoc, FeatureValueDoc, OntologyDoc, OverrideDoc } from './types.js';
import {
  applyExploreResponse,
  applyOverride,
  promoteRow,
  startSession,
  type WhatIfState,
} from './whatif.js';

interface AppState {
  ontology: OntologyDoc | null;
  draft: CaseDraftState | null;
  session: WhatIfState | null;
  decisionPending: boolean;
  exploreRound: number;
  pendingOverride: OverrideDoc;
}

declare global {
  interface Window {
    CLARIFY_API_BASE?: string;
  }
}

const api = new ApiClient(window.CLARIFY_API_BASE ?? '');

const state: AppState = {
  ontology: null,
  draft: null,
  session: null,
  decisionPending: false,
  exploreRound: 0,
  pendingOverride: {},
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const status = byId('status');
  try {
    state.ontology = await api.getOntology();
    const listing = await fetch((window.CLARIFY_API_BASE ?? '') + '/v1/cases');
    if (!listing.ok) throw new Error(`cases listing failed: ${listing.status}`);
    const body = (await listing.json()) as { cases: (CaseDoc & { solution: unknown })[] };
    const seed = body.cases[0];
    if (!seed) {
      status.textContent = 'The case base is empty; add cases before using the editor.';
      return;
    }
    state.draft = draftFromCase({
      case_id: 'draft-1',
      features: seed.features,
    });
    status.textContent = '';
    renderEditor();
  } catch (error) {
    status.textContent = '';
    status.append(describeFailure(error));
    const retry = document.createElement('button');
    retry.textContent = 'retry';
    retry.addEventListener('click', () => void boot());
    status.append(' ', retry);
  }
}

function describeFailure(error: unknown): HTMLElement {
  if (error instanceof ApiRequestError) {
    return renderApiError(error.body.code, error.body.message);
  }
  return renderApiError('NETWORK', error instanceof Error ? error.message : String(error));
}

function conceptsFor(): ConceptDoc[] {
  return state.ontology ? state.ontology.concepts : [];
}

// ---------------------------------------------------------------------------
// Case editor
// ---------------------------------------------------------------------------

function renderEditor(): void {
  const draft = state.draft;
  if (!draft) return;
  const editor = byId('editor');
  editor.textContent = '';

  const caseIdRow = document.createElement('label');
  caseIdRow.textContent = 'case id ';
  const caseIdInput = document.createElement('input');
  caseIdInput.value = draft.caseId;
  caseIdInput.addEventListener('input', () => {
    state.draft = {
      ...draft,
      caseId: caseIdInput.value,
      caseIdError: caseIdInput.value ? null : 'case id is required',
    };
    refreshSubmit();
  });
  caseIdRow.append(caseIdInput);
  editor.append(caseIdRow);

  for (const field of draft.fields) {
    editor.append(renderFieldRow(field));
  }

  const submit = document.createElement('button');
  submit.id = 'submit';
  submit.textContent = 'decide';
  submit.addEventListener('click', () => void submitDecision());
  editor.append(submit);
  refreshSubmit();
}

function renderFieldRow(field: FieldDraft): HTMLElement {
  const row = document.createElement('div');
  row.className = 'field';
  row.dataset.feature = field.name;

  const label = document.createElement('label');
  label.textContent = `${field.name} (${field.kind}) `;
  row.append(label);

  if (field.kind === 'symbolic') {
    const select = document.createElement('select');
    for (const concept of conceptsFor()) {
      const option = document.createElement('option');
      option.value = concept.id;
      // Pickers show the definition so the choice is meaningful.
      option.textContent = `${concept.label} — ${concept.definition}`;
      option.selected = concept.id === field.concept;
      select.append(option);
    }
    select.addEventListener('change', () => updateField(field.name, { concept: select.value }));
    label.append(select);
  } else if (field.kind === 'flag') {
    const box = document.createElement('input');
    box.type = 'checkbox';
    box.checked = field.flag;
    box.addEventListener('change', () => updateField(field.name, { flag: box.checked }));
    label.append(box);
  } else {
    const input = document.createElement('input');
    input.value = field.raw;
    if (field.kind === 'numeric' && field.range) {
      input.placeholder = `${field.range[0]} .. ${field.range[1]}`;
    }
    input.addEventListener('input', () => updateField(field.name, { raw: input.value }));
    label.append(input);
  }

  const message = field.serverError ?? field.error;
  if (message) {
    const error = document.createElement('span');
    error.className = 'field-error';
    error.textContent = message;
    row.append(error);
  }
  return row;
}

function updateField(
  name: string,
  input: { raw?: string; flag?: boolean; concept?: string },
): void {
  if (!state.draft) return;
  state.draft = setFieldInput(state.draft, name, input, conceptsFor());
  renderEditor();
}

function refreshSubmit(): void {
  const submit = document.getElementById('submit') as HTMLButtonElement | null;
  if (submit && state.draft) {
    submit.disabled = state.decisionPending || !isSubmittable(state.draft);
  }
}

// ---------------------------------------------------------------------------
// Decisions and what-if exploration
// ---------------------------------------------------------------------------

async function submitDecision(): Promise<void> {
  if (!state.draft || !isSubmittable(state.draft) || state.decisionPending) return;
  const caseDoc = draftToCase(state.draft);
  state.decisionPending = true;
  refreshSubmit();
  const output = byId('decision');
  try {
    const decision = await api.decide(caseDoc);
    state.session = startSession(caseDoc, decision);
    state.exploreRound = 0;
    output.textContent = '';
    output.append(renderDecision(decision));
    renderWhatIfPanel();
  } catch (error) {
    output.textContent = '';
    if (error instanceof ApiRequestError && error.body.detail?.violations) {
      state.draft = applyServerViolations(state.draft, error.body.detail.violations);
      renderEditor();
    }
    output.append(describeFailure(error));
  } finally {
    state.decisionPending = false;
    refreshSubmit();
  }
}

function renderWhatIfPanel(): void {
  const panel = byId('whatif');
  panel.textContent = '';
  const session = state.session;
  if (!session) return;

  panel.append(renderWhatIfTable(session, (index) => {
    state.session = promoteRow(session, index);
    // The promoted variant becomes the editor's case, feeding the next move.
    state.draft = draftFromCase(state.session.baselineCase);
    renderEditor();
    const output = byId('decision');
    output.textContent = '';
    output.append(renderDecision(state.session.baseline));
    renderWhatIfPanel();
  }));

  const controls = document.createElement('div');
  controls.className = 'explore-controls';
  const picker = document.createElement('select');
  picker.id = 'override-feature';
  for (const name of Object.keys(session.baselineCase.features).sort()) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    picker.append(option);
  }
  const valueInput = document.createElement('input');
  valueInput.id = 'override-value';
  valueInput.placeholder = 'new value';
  const explore = document.createElement('button');
  explore.textContent = 'explore';
  explore.addEventListener('click', () => {
    const name = picker.value;
    const baselineValue = session.baselineCase.features[name];
    if (!baselineValue) return;
    const replacement = parseOverrideValue(baselineValue, valueInput.value);
    if (!replacement) return;
    void runExplore({ [name]: replacement });
  });
  controls.append(picker, valueInput, explore);
  panel.append(controls);
}

function parseOverrideValue(
  baseline: FeatureValueDoc,
  raw: string,
): FeatureValueDoc | null {
  switch (baseline.type) {
    case 'numeric': {
      const value = Number(raw.trim());
      if (!Number.isFinite(value)) return null;
      return { type: 'numeric', value, range: baseline.range };
    }
    case 'symbolic':
      return raw ? { type: 'symbolic', concept: raw.trim() } : null;
    case 'flag':
      return { type: 'flag', value: raw.trim() === 'true' };
    case 'text':
      return { type: 'text', value: raw };
  }
}

async function runExplore(override: OverrideDoc): Promise<void> {
  const session = state.session;
  if (!session) return;
  const round = ++state.exploreRound;
  const overrides = [override];
  const panel = byId('whatif');
  try {
    const response = await api.whatIf(session.baselineCase, overrides);
    state.session = applyExploreResponse(session, round, overrides, response.decisions);
    renderWhatIfPanel();
  } catch (error) {
    if (error instanceof ApiRequestError && error.body.detail?.override_index !== undefined) {
      panel.append(renderOverrideError(error.body.detail.override_index, error.body.message));
    } else {
      panel.append(describeFailure(error));
    }
  }
}

document.addEventListener('DOMContentLoaded', () => void boot());
