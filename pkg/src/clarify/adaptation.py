"""Solution adaptation: fit the retrieved solution to the new case.

Two strategies ship:

  null                  copy the retrieved solution unchanged (default)
  concept-substitution  for every symbolic feature present in both cases
                        with differing concepts, replace each occurrence of
                        the retrieved concept with the query concept inside
                        ``concepts_involved``

Substitutions are applied sequentially in lexicographic feature order and
every attempt is logged, including ones that replaced nothing. The action
label and parameters are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .casebase import Case, Solution, SymbolicValue
from .errors import UnknownConcept
from .ontology import Ontology
from .retrieval import RetrievalResult

STRATEGY_NULL = "null"
STRATEGY_CONCEPT_SUBSTITUTION = "concept-substitution"
STRATEGIES = frozenset({STRATEGY_NULL, STRATEGY_CONCEPT_SUBSTITUTION})


@dataclass(frozen=True)
class Substitution:
    feature: str
    old: str
    new: str

    def to_document(self) -> dict:
        return {"feature": self.feature, "old": self.old, "new": self.new}


@dataclass(frozen=True)
class AdaptationRecord:
    original: Solution
    adapted: Solution
    substitutions: tuple[Substitution, ...]
    strategy: str


def adapt_solution(
    new_case: Case,
    retrieved: RetrievalResult,
    ontology: Ontology,
    strategy: str = STRATEGY_NULL,
) -> AdaptationRecord:
    if strategy == STRATEGY_NULL:
        return AdaptationRecord(retrieved.solution, retrieved.solution, (), STRATEGY_NULL)
    if strategy != STRATEGY_CONCEPT_SUBSTITUTION:
        raise ValueError(f"unknown adaptation strategy {strategy!r}")

    substitutions = []
    for name in sorted(set(new_case.features) & set(retrieved.case.features)):
        qv = new_case.features[name]
        rv = retrieved.case.features[name]
        if not (isinstance(qv, SymbolicValue) and isinstance(rv, SymbolicValue)):
            continue
        if qv.concept != rv.concept:
            substitutions.append(Substitution(name, old=rv.concept, new=qv.concept))

    concepts = list(retrieved.solution.concepts_involved)
    for sub in substitutions:
        if sub.new not in ontology:
            # Impossible for validated inputs; guards solution/ontology drift.
            raise UnknownConcept(sub.new, context=f"substitution for feature {sub.feature!r}")
        concepts = [sub.new if c == sub.old else c for c in concepts]

    adapted = Solution(
        action=retrieved.solution.action,
        concepts_involved=tuple(concepts),
        parameters=retrieved.solution.parameters,
    )
    return AdaptationRecord(
        retrieved.solution, adapted, tuple(substitutions), STRATEGY_CONCEPT_SUBSTITUTION
    )
