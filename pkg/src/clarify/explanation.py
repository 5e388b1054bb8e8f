"""Structured, renderable decision explanations.

The core step pairs every concept in the solution with its ontology
definition, in order, duplicates included. Two render templates exist:

  alg2-literal  the minimal form: "id: definition" fragments joined by
                single spaces (kept verbatim for fidelity testing)
  rich          multi-section text with the nearest case, the per-feature
                similarity breakdown, substitutions, and a concept glossary

All numbers render with 4 decimals (round-half-even); identical inputs
produce byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adaptation import AdaptationRecord
from .casebase import Solution
from .errors import InconsistentInputs, UnknownTemplate
from .ontology import Ontology
from .retrieval import RetrievalResult
from .similarity import SimilarityBreakdown

LITERAL_TEMPLATE = "alg2-literal"
RICH_TEMPLATE = "rich"
TEMPLATES = frozenset({LITERAL_TEMPLATE, RICH_TEMPLATE})


@dataclass(frozen=True)
class Gloss:
    concept: str
    definition: str

    def to_document(self) -> dict:
        return {"concept": self.concept, "definition": self.definition}


@dataclass(frozen=True)
class RetrievalSummary:
    case_id: str
    similarity: float
    breakdown: SimilarityBreakdown

    def to_document(self) -> dict:
        return {
            "case_id": self.case_id,
            "similarity": self.similarity,
            "breakdown": self.breakdown.to_document(),
        }


@dataclass(frozen=True)
class SubstitutionNote:
    """A logged substitution plus the concepts' common ancestor, for display."""

    feature: str
    old: str
    new: str
    common_ancestor: str

    def to_document(self) -> dict:
        return {
            "feature": self.feature,
            "old": self.old,
            "new": self.new,
            "common_ancestor": self.common_ancestor,
        }


@dataclass(frozen=True)
class AdaptationSummary:
    strategy: str
    action: str
    substitutions: tuple[SubstitutionNote, ...]

    def to_document(self) -> dict:
        return {
            "strategy": self.strategy,
            "action": self.action,
            "substitutions": [s.to_document() for s in self.substitutions],
        }


@dataclass(frozen=True)
class Explanation:
    concept_glosses: tuple[Gloss, ...]
    retrieval_summary: RetrievalSummary
    adaptation_summary: AdaptationSummary
    rendered_text: str

    def to_document(self) -> dict:
        return {
            "concept_glosses": [g.to_document() for g in self.concept_glosses],
            "retrieval": self.retrieval_summary.to_document(),
            "adaptation": self.adaptation_summary.to_document(),
            "rendered_text": self.rendered_text,
        }


def generate_explanation(solution: Solution, ontology: Ontology) -> tuple[Gloss, ...]:
    """One gloss per element of concepts_involved, in order, duplicates kept."""
    return tuple(
        Gloss(concept, ontology.definition_of(concept))
        for concept in solution.concepts_involved
    )


def render_explanation(
    glosses: tuple[Gloss, ...],
    retrieval_summary: RetrievalSummary | None,
    adaptation_summary: AdaptationSummary | None,
    template: str,
) -> str:
    if template == LITERAL_TEMPLATE:
        return " ".join(f"{g.concept}: {g.definition}" for g in glosses)
    if template == RICH_TEMPLATE:
        return _render_rich(glosses, retrieval_summary, adaptation_summary)
    raise UnknownTemplate(template)


def _render_rich(glosses, retrieval_summary, adaptation_summary) -> str:
    lines: list[str] = []
    if adaptation_summary is not None:
        lines.append(f"Decision: {adaptation_summary.action}")
    if retrieval_summary is not None:
        lines.append(
            f"Nearest case: {retrieval_summary.case_id}"
            f" (similarity {retrieval_summary.similarity:.4f})"
        )
        lines.append("")
        lines.append("Feature comparison:")
        for row in retrieval_summary.breakdown.per_feature:
            note = "" if row.included else ", ignored"
            lines.append(
                f"- {row.feature}: local similarity {row.local_similarity:.4f},"
                f" weight {row.weight:.4f}{note}"
            )
    if adaptation_summary is not None:
        lines.append("")
        if adaptation_summary.substitutions:
            lines.append("Adaptations:")
            for sub in adaptation_summary.substitutions:
                lines.append(
                    f"- {sub.feature}: {sub.old} -> {sub.new}"
                    f" (common ancestor: {sub.common_ancestor})"
                )
        else:
            lines.append("Adaptation: none")
    lines.append("")
    if glosses:
        lines.append("Concept glossary:")
        for g in glosses:
            lines.append(f"- {g.concept}: {g.definition}")
    else:
        lines.append("Concept glossary: (none)")
    return "\n".join(lines)


def build_explanation(
    retrieval: RetrievalResult,
    adaptation: AdaptationRecord,
    ontology: Ontology,
    template: str,
) -> Explanation:
    """Compose glosses (from the adapted solution) with retrieval context."""
    if adaptation.original != retrieval.solution:
        raise InconsistentInputs(
            "adaptation record does not originate from the retrieved solution"
        )
    glosses = generate_explanation(adaptation.adapted, ontology)
    retrieval_summary = RetrievalSummary(
        retrieval.case.case_id, retrieval.similarity, retrieval.breakdown
    )
    adaptation_summary = AdaptationSummary(
        adaptation.strategy,
        adaptation.adapted.action,
        tuple(
            SubstitutionNote(
                s.feature, s.old, s.new, ontology.least_common_subsumer(s.old, s.new)
            )
            for s in adaptation.substitutions
        ),
    )
    rendered = render_explanation(glosses, retrieval_summary, adaptation_summary, template)
    return Explanation(glosses, retrieval_summary, adaptation_summary, rendered)
