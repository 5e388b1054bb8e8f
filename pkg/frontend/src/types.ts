/**
 * Wire types for the /v1 JSON contract.
 *
 * These mirror the server documents exactly; the UI never derives numbers
 * of its own, so everything rendered traces back to one of these fields.
 */

export type FeatureValueDoc =
  | { type: 'numeric'; value: number; range: [number, number] }
  | { type: 'symbolic'; concept: string }
  | { type: 'flag'; value: boolean }
  | { type: 'text'; value: string };

export type FeatureKind = FeatureValueDoc['type'];

export interface CaseDoc {
  case_id: string;
  features: Record<string, FeatureValueDoc>;
}

export interface SolutionDoc {
  action: string;
  concepts_involved: string[];
  parameters: Record<string, string | number | boolean>;
}

export interface FeatureScoreDoc {
  feature: string;
  local_similarity: number;
  weight: number;
  included: boolean;
}

export interface BreakdownDoc {
  per_feature: FeatureScoreDoc[];
  total: number;
}

export interface GlossDoc {
  concept: string;
  definition: string;
}

export interface SubstitutionDoc {
  feature: string;
  old: string;
  new: string;
  common_ancestor: string;
}

export interface ExplanationDoc {
  concept_glosses: GlossDoc[];
  retrieval: {
    case_id: string;
    similarity: number;
    breakdown: BreakdownDoc;
  };
  adaptation: {
    strategy: string;
    action: string;
    substitutions: SubstitutionDoc[];
  };
  rendered_text: string;
}

export interface DecisionDoc {
  decision_id: string;
  timestamp: string;
  engine_version: string;
  case_base_version: number;
  similarity: number;
  similar_case: CaseDoc;
  solution: SolutionDoc;
  explanation: ExplanationDoc;
}

export interface ConceptDoc {
  id: string;
  label: string;
  definition: string;
  parents: string[];
}

export interface OntologyDoc {
  root: string;
  concepts: ConceptDoc[];
  relations: { kind: string; source: string; target: string }[];
}

export interface ViolationDoc {
  kind: string;
  feature: string | null;
  message: string;
}

export interface ApiErrorDoc {
  code:
    | 'PARSE_ERROR'
    | 'VALIDATION_ERROR'
    | 'EMPTY_CASE_BASE'
    | 'UNKNOWN_CONCEPT'
    | 'NOT_FOUND'
    | 'INTERNAL';
  message: string;
  detail?: {
    violations?: ViolationDoc[];
    case_id?: string;
    override_index?: number;
    template?: string;
  };
}

/** One what-if variant: the feature replacements defining it. */
export type OverrideDoc = Record<string, FeatureValueDoc>;

export interface WhatIfResponseDoc {
  decisions: DecisionDoc[];
}
