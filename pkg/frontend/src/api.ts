/**
 * Thin typed client for the /v1 endpoints. Non-2xx responses throw
 * ApiRequestError carrying the server's structured error document.
 */

import type {
  ApiErrorDoc,
  CaseDoc,
  DecisionDoc,
  OntologyDoc,
  OverrideDoc,
  WhatIfResponseDoc,
} from './types.js';

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: ApiErrorDoc;

  constructor(status: number, body: ApiErrorDoc) {
    super(`${body.code}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { 'content-type': 'application/json' },
      ...init,
    });
    if (!response.ok) {
      let body: ApiErrorDoc;
      try {
        body = (await response.json()) as ApiErrorDoc;
      } catch {
        body = { code: 'INTERNAL', message: `http ${response.status}` };
      }
      throw new ApiRequestError(response.status, body);
    }
    return (await response.json()) as T;
  }

  getOntology(): Promise<OntologyDoc> {
    return this.request<OntologyDoc>('/v1/ontology');
  }

  decide(caseDoc: CaseDoc, template?: string): Promise<DecisionDoc> {
    const body = template ? { ...caseDoc, template } : caseDoc;
    return this.request<DecisionDoc>('/v1/decisions', {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }

  whatIf(caseDoc: CaseDoc, overrides: OverrideDoc[]): Promise<WhatIfResponseDoc> {
    return this.request<WhatIfResponseDoc>('/v1/whatif', {
      method: 'POST',
      body: JSON.stringify({ ...caseDoc, overrides }),
    });
  }

  health(): Promise<{ status: string; engine_version: string; case_base_version: number }> {
    return this.request('/v1/health');
  }
}
