"""Nearest-case retrieval: exact argmax of pairwise similarity.

The winner maximizes the similarity total; exact ties go to the
lexicographically smallest case_id, so results never depend on entry order.
Scoring runs through the packed scan (compiled kernel or its Python mirror)
when the query can be planned exactly, and otherwise falls back to the
pairwise definition; both routes produce bit-identical totals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ._native import kernel_scan
from ._pack import CaseBaseIndex, run_scan
from .casebase import Case, CaseBase, Solution
from .errors import EmptyCaseBase, InconsistentInputs, SimilarityError, UnknownConcept
from .ontology import Ontology
from .similarity import SimilarityBreakdown, SimilarityConfig, compute_similarity


@dataclass(frozen=True)
class RetrievalResult:
    case: Case
    solution: Solution
    similarity: float
    breakdown: SimilarityBreakdown

    def to_document(self) -> dict:
        from .casebase import case_to_document, solution_to_document

        return {
            "case": case_to_document(self.case),
            "solution": solution_to_document(self.solution),
            "similarity": self.similarity,
            "breakdown": self.breakdown.to_document(),
        }


def _score_pair(new_case: Case, case: Case, config, ontology) -> SimilarityBreakdown:
    try:
        return compute_similarity(new_case, case, config, ontology)
    except (SimilarityError, UnknownConcept) as exc:
        exc.case_id = case.case_id
        raise


def score_all(
    new_case: Case,
    base: CaseBase,
    config: SimilarityConfig,
    ontology: Ontology,
    *,
    index: CaseBaseIndex | None = None,
    use_native: bool | None = None,
) -> list[float]:
    """Similarity total for every entry, in entry order.

    ``use_native``: True forces the packed scan, False forces the pairwise
    definition, None picks the packed scan whenever it is applicable.
    """
    if use_native is None:
        use_native = True
    if use_native:
        if index is None:
            index = CaseBaseIndex(base)
        plan = index.plan(new_case, config, ontology)
        if plan is not None:
            totals, ok = run_scan(index, plan, kernel_scan)
            for i, good in enumerate(ok):
                if not good:
                    # Recompute the offending pair through the definitional
                    # path so the error carries full context.
                    _score_pair(new_case, base.entries[i][0], config, ontology)
                    raise InconsistentInputs(
                        f"scan flagged case {base.entries[i][0].case_id!r} "
                        "but the pairwise path accepted it"
                    )
            return list(totals)
    return [
        _score_pair(new_case, case, config, ontology).total for case, _ in base.entries
    ]


def retrieve_k(
    new_case: Case,
    base: CaseBase,
    k: int,
    config: SimilarityConfig,
    ontology: Ontology,
    *,
    index: CaseBaseIndex | None = None,
    use_native: bool | None = None,
) -> list[RetrievalResult]:
    """Top-k entries sorted by (similarity desc, case_id asc)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not base.entries:
        raise EmptyCaseBase()
    totals = score_all(
        new_case, base, config, ontology, index=index, use_native=use_native
    )
    ids = [case.case_id for case, _ in base.entries]
    picked = heapq.nsmallest(
        min(k, len(totals)), range(len(totals)), key=lambda i: (-totals[i], ids[i])
    )
    results = []
    for i in picked:
        case, solution = base.entries[i]
        breakdown = _score_pair(new_case, case, config, ontology)
        results.append(RetrievalResult(case, solution, breakdown.total, breakdown))
    return results


def retrieve_similar_case(
    new_case: Case,
    base: CaseBase,
    config: SimilarityConfig,
    ontology: Ontology,
    *,
    index: CaseBaseIndex | None = None,
    use_native: bool | None = None,
) -> RetrievalResult:
    """The single best match; equivalent to ``retrieve_k(..., 1)[0]``."""
    return retrieve_k(
        new_case, base, 1, config, ontology, index=index, use_native=use_native
    )[0]
