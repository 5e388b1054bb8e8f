"""Pairwise case similarity: weighted aggregate of typed local similarities.

This module is the semantic definition; the packed scan in ``retrieval``
must reproduce these numbers bit for bit, which is why accumulation happens
feature by feature in lexicographic order with no clever refactoring.

Local similarity by feature type:
  numeric   1 - |x - y| / (hi - lo)   (identical declared ranges required)
  symbolic  Wu-Palmer concept similarity from the ontology
  flag      1 if equal else 0
  text      1 if exactly equal else 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .casebase import Case, FeatureValue, FlagValue, NumericValue, SymbolicValue, TextValue
from .errors import (
    NoComparableFeatures,
    RangeMismatch,
    SimilarityError,
    TypeMismatch,
    ValidationError,
)
from .ontology import Ontology

MISSING_PENALIZE = "penalize"
MISSING_IGNORE = "ignore"
MISSING_POLICIES = frozenset({MISSING_PENALIZE, MISSING_IGNORE})


@dataclass(frozen=True)
class SimilarityConfig:
    """Per-feature weights plus the policy for one-sided features.

    Features absent from ``weights`` fall back to ``default_weight``. Under
    ``penalize`` a feature present in only one case scores 0 but keeps its
    weight; under ``ignore`` it is dropped from the aggregate entirely.
    """

    weights: dict[str, float] = field(default_factory=dict)
    default_weight: float = 1.0
    missing_policy: str = MISSING_PENALIZE

    def __post_init__(self):
        if self.missing_policy not in MISSING_POLICIES:
            raise ValidationError(f"unknown missing_policy {self.missing_policy!r}")
        for name, w in self.weights.items():
            _check_weight(w, f"weight for {name!r}")
        _check_weight(self.default_weight, "default_weight")

    def weight_for(self, feature: str) -> float:
        return self.weights.get(feature, self.default_weight)


def _check_weight(w, label: str) -> None:
    if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w < 0:
        raise ValidationError(f"{label} must be a finite non-negative number, got {w!r}")


@dataclass(frozen=True)
class FeatureScore:
    feature: str
    local_similarity: float
    weight: float
    included: bool

    def to_document(self) -> dict:
        return {
            "feature": self.feature,
            "local_similarity": self.local_similarity,
            "weight": self.weight,
            "included": self.included,
        }


@dataclass(frozen=True)
class SimilarityBreakdown:
    per_feature: tuple[FeatureScore, ...]
    total: float

    def to_document(self) -> dict:
        return {
            "per_feature": [row.to_document() for row in self.per_feature],
            "total": self.total,
        }


def local_similarity(a: FeatureValue, b: FeatureValue, ontology: Ontology) -> float:
    if a.kind != b.kind:
        raise TypeMismatch(a.kind, b.kind)
    if isinstance(a, NumericValue):
        assert isinstance(b, NumericValue)
        if (a.lo, a.hi) != (b.lo, b.hi):
            raise RangeMismatch((a.lo, a.hi), (b.lo, b.hi))
        if not a.lo < a.hi:
            raise SimilarityError(f"degenerate numeric range [{a.lo}, {a.hi}]")
        return 1 - abs(a.value - b.value) / (a.hi - a.lo)
    if isinstance(a, SymbolicValue):
        assert isinstance(b, SymbolicValue)
        return ontology.wu_palmer(a.concept, b.concept)
    if isinstance(a, FlagValue) or isinstance(a, TextValue):
        return 1.0 if a.value == b.value else 0.0
    raise TypeError(f"not a feature value: {a!r}")


def compute_similarity(
    a: Case, b: Case, config: SimilarityConfig, ontology: Ontology
) -> SimilarityBreakdown:
    """Score two cases over the union of their features, in name order.

    Raises NoComparableFeatures when nothing contributes weight, and
    propagates TypeMismatch / RangeMismatch tagged with the feature name.
    """
    rows: list[FeatureScore] = []
    num = 0.0
    den = 0.0
    for name in sorted(set(a.features) | set(b.features)):
        weight = config.weight_for(name)
        fa = a.features.get(name)
        fb = b.features.get(name)
        if fa is not None and fb is not None:
            try:
                sim = local_similarity(fa, fb, ontology)
            except SimilarityError as exc:
                exc.feature = name
                raise
            included = True
        elif config.missing_policy == MISSING_PENALIZE:
            sim = 0.0
            included = True
        else:
            sim = 0.0
            included = False
        rows.append(FeatureScore(name, sim, weight, included))
        if included:
            num += weight * sim
            den += weight
    if den == 0.0:
        raise NoComparableFeatures()
    return SimilarityBreakdown(tuple(rows), num / den)
