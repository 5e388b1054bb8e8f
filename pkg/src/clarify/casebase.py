"""Cases, solutions, and the persisted case database.

A case is a flat map of typed feature values; a solution is an action label
plus the concept ids it involves. The case base is an ordered, append-only
collection of (case, solution) pairs; every mutation returns a new snapshot
with a bumped ``source_version`` so concurrent readers never observe a
partial update.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

from .errors import DuplicateCaseId, ParseError, ValidationError
from .ontology import Ontology

_ENTRY_KEYS = {"case_id", "features", "solution"}
_SOLUTION_KEYS = {"action", "concepts_involved", "parameters"}


# ---------------------------------------------------------------------------
# Feature values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericValue:
    """A real measurement with its declared range [lo, hi]."""

    value: float
    lo: float
    hi: float

    kind = "numeric"


@dataclass(frozen=True)
class SymbolicValue:
    """A reference to an ontology concept."""

    concept: str

    kind = "symbolic"


@dataclass(frozen=True)
class FlagValue:
    value: bool

    kind = "flag"


@dataclass(frozen=True)
class TextValue:
    value: str

    kind = "text"


FeatureValue = Union[NumericValue, SymbolicValue, FlagValue, TextValue]


@dataclass(frozen=True)
class Case:
    case_id: str
    features: dict[str, FeatureValue]


@dataclass(frozen=True)
class Solution:
    action: str
    concepts_involved: tuple[str, ...] = ()
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CaseBase:
    entries: tuple[tuple[Case, Solution], ...] = ()
    source_version: int = 0

    def case_ids(self) -> list[str]:
        return [case.case_id for case, _ in self.entries]

    def get(self, case_id: str) -> tuple[Case, Solution] | None:
        for case, solution in self.entries:
            if case.case_id == case_id:
                return case, solution
        return None

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Validation (violations are data, not exceptions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    feature: str | None
    message: str

    def to_document(self) -> dict:
        return {"kind": self.kind, "feature": self.feature, "message": self.message}


def validate_case(case: Case, ontology: Ontology) -> list[Violation]:
    """Collect every violation in the case, ordered by feature name."""
    violations: list[Violation] = []
    if not case.case_id:
        violations.append(Violation("empty-case-id", None, "case_id must be non-empty"))
    if not case.features:
        violations.append(Violation("empty-features", None, "a case must have at least one feature"))
    for name in sorted(case.features):
        fv = case.features[name]
        if isinstance(fv, NumericValue):
            if not all(math.isfinite(x) for x in (fv.value, fv.lo, fv.hi)):
                violations.append(
                    Violation("invalid-range", name, f"feature {name!r} has non-finite numbers")
                )
            elif fv.lo >= fv.hi:
                violations.append(
                    Violation(
                        "invalid-range",
                        name,
                        f"feature {name!r} declares an empty range [{fv.lo}, {fv.hi}]",
                    )
                )
            elif not fv.lo <= fv.value <= fv.hi:
                violations.append(
                    Violation(
                        "out-of-range",
                        name,
                        f"feature {name!r} value {fv.value} outside [{fv.lo}, {fv.hi}]",
                    )
                )
        elif isinstance(fv, SymbolicValue):
            if fv.concept not in ontology:
                violations.append(
                    Violation(
                        "unknown-concept",
                        name,
                        f"feature {name!r} references unknown concept {fv.concept!r}",
                    )
                )
    return violations


def _check_solution(solution: Solution, ontology: Ontology, case_id: str) -> None:
    for concept in solution.concepts_involved:
        if concept not in ontology:
            raise ValidationError(
                f"case {case_id!r}: solution references unknown concept {concept!r}",
                case_id=case_id,
            )


def _declared_ranges(entries) -> dict[str, tuple[float, float]]:
    """Range per numeric feature; raises if two entries disagree."""
    ranges: dict[str, tuple[float, float]] = {}
    for case, _ in entries:
        for name, fv in case.features.items():
            if not isinstance(fv, NumericValue):
                continue
            declared = (fv.lo, fv.hi)
            seen = ranges.setdefault(name, declared)
            if seen != declared:
                raise ValidationError(
                    f"case {case.case_id!r}: feature {name!r} range {list(declared)} "
                    f"disagrees with {list(seen)} used elsewhere in the case base",
                    case_id=case.case_id,
                )
    return ranges


# ---------------------------------------------------------------------------
# Growth
# ---------------------------------------------------------------------------


def add_case(base: CaseBase, case: Case, solution: Solution, ontology: Ontology) -> CaseBase:
    """Append one validated entry; the input base is never modified."""
    if case.case_id in set(base.case_ids()):
        raise DuplicateCaseId(case.case_id)
    violations = validate_case(case, ontology)
    if violations:
        raise ValidationError(
            f"case {case.case_id!r} failed validation: {violations[0].message}",
            violations=violations,
            case_id=case.case_id,
        )
    _check_solution(solution, ontology, case.case_id)
    _declared_ranges(base.entries + ((case, solution),))
    return CaseBase(base.entries + ((case, solution),), base.source_version + 1)


# ---------------------------------------------------------------------------
# Wire/file format
# ---------------------------------------------------------------------------


def feature_value_to_document(fv: FeatureValue) -> dict:
    if isinstance(fv, NumericValue):
        return {"type": "numeric", "value": fv.value, "range": [fv.lo, fv.hi]}
    if isinstance(fv, SymbolicValue):
        return {"type": "symbolic", "concept": fv.concept}
    if isinstance(fv, FlagValue):
        return {"type": "flag", "value": fv.value}
    if isinstance(fv, TextValue):
        return {"type": "text", "value": fv.value}
    raise TypeError(f"not a feature value: {fv!r}")


def feature_value_from_document(doc, where: str) -> FeatureValue:
    if not isinstance(doc, dict):
        raise ParseError("feature value must be an object", field=where)
    kind = doc.get("type")
    if kind == "numeric":
        _reject_unknown_keys(doc, {"type", "value", "range"}, where)
        value = _require_number(doc, "value", where)
        rng = doc.get("range")
        if (
            not isinstance(rng, list)
            or len(rng) != 2
            or not all(_is_number(x) for x in rng)
        ):
            raise ParseError("numeric range must be [lo, hi]", field=f"{where}.range")
        return NumericValue(float(value), float(rng[0]), float(rng[1]))
    if kind == "symbolic":
        _reject_unknown_keys(doc, {"type", "concept"}, where)
        concept = doc.get("concept")
        if not isinstance(concept, str) or not concept:
            raise ParseError("symbolic value needs a concept id", field=f"{where}.concept")
        return SymbolicValue(concept)
    if kind == "flag":
        _reject_unknown_keys(doc, {"type", "value"}, where)
        value = doc.get("value")
        if not isinstance(value, bool):
            raise ParseError("flag value must be a boolean", field=f"{where}.value")
        return FlagValue(value)
    if kind == "text":
        _reject_unknown_keys(doc, {"type", "value"}, where)
        value = doc.get("value")
        if not isinstance(value, str):
            raise ParseError("text value must be a string", field=f"{where}.value")
        return TextValue(value)
    raise ParseError(f"unknown feature value type {kind!r}", field=f"{where}.type")


def case_to_document(case: Case) -> dict:
    return {
        "case_id": case.case_id,
        "features": {
            name: feature_value_to_document(case.features[name])
            for name in sorted(case.features)
        },
    }


def case_from_document(doc, where: str = "case") -> Case:
    if not isinstance(doc, dict):
        raise ParseError("case must be an object", field=where)
    _reject_unknown_keys(doc, {"case_id", "features"}, where)
    case_id = doc.get("case_id")
    if not isinstance(case_id, str) or not case_id:
        raise ParseError("case_id must be a non-empty string", field=f"{where}.case_id")
    features_raw = doc.get("features")
    if not isinstance(features_raw, dict):
        raise ParseError("features must be an object", field=f"{where}.features")
    features = {
        name: feature_value_from_document(fv, f"{where}.features[{name!r}]")
        for name, fv in features_raw.items()
    }
    return Case(case_id, features)


def solution_to_document(solution: Solution) -> dict:
    return {
        "action": solution.action,
        "concepts_involved": list(solution.concepts_involved),
        "parameters": dict(solution.parameters),
    }


def solution_from_document(doc, where: str = "solution") -> Solution:
    if not isinstance(doc, dict):
        raise ParseError("solution must be an object", field=where)
    _reject_unknown_keys(doc, _SOLUTION_KEYS, where)
    action = doc.get("action")
    if not isinstance(action, str) or not action:
        raise ParseError("solution action must be a non-empty string", field=f"{where}.action")
    concepts = doc.get("concepts_involved", [])
    if not isinstance(concepts, list) or not all(isinstance(c, str) for c in concepts):
        raise ParseError(
            "concepts_involved must be a list of concept ids", field=f"{where}.concepts_involved"
        )
    params = doc.get("parameters", {})
    if not isinstance(params, dict) or not all(
        isinstance(v, (str, bool, int, float)) for v in params.values()
    ):
        raise ParseError("parameters must map names to scalars", field=f"{where}.parameters")
    return Solution(action, tuple(concepts), dict(params))


def load_case_base(document: str, ontology: Ontology) -> CaseBase:
    """Parse, validate against the ontology, and preserve entry order."""
    data = _loads_strict(document)
    if not isinstance(data, dict):
        raise ParseError("case base document must be a JSON object")
    _reject_unknown_keys(data, {"cases"}, "case base")
    raw = data.get("cases")
    if not isinstance(raw, list):
        raise ParseError("cases must be a list", field="cases")

    entries: list[tuple[Case, Solution]] = []
    seen: set[str] = set()
    for i, entry in enumerate(raw):
        where = f"cases[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("case entry must be an object", field=where)
        _reject_unknown_keys(entry, _ENTRY_KEYS, where)
        case = case_from_document(
            {"case_id": entry.get("case_id"), "features": entry.get("features")}, where
        )
        solution = solution_from_document(entry.get("solution"), f"{where}.solution")
        if case.case_id in seen:
            raise DuplicateCaseId(case.case_id)
        seen.add(case.case_id)
        violations = validate_case(case, ontology)
        if violations:
            raise ValidationError(
                f"case {case.case_id!r} failed validation: {violations[0].message}",
                violations=violations,
                case_id=case.case_id,
            )
        _check_solution(solution, ontology, case.case_id)
        entries.append((case, solution))
    _declared_ranges(entries)
    return CaseBase(tuple(entries), source_version=0)


def case_base_to_document(base: CaseBase) -> dict:
    return {
        "cases": [
            {
                "case_id": case.case_id,
                "features": case_to_document(case)["features"],
                "solution": solution_to_document(solution),
            }
            for case, solution in base.entries
        ]
    }


def save_case_base(base: CaseBase) -> str:
    """Serialize; round-trips structurally and is byte-deterministic."""
    return json.dumps(case_base_to_document(base), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Shared strict-JSON helpers
# ---------------------------------------------------------------------------


def _loads_strict(text: str):
    def _reject_constant(name: str):
        raise ParseError(f"non-finite number {name} is not allowed")

    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def _reject_unknown_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r} in {where}", field=unknown[0])


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _require_number(doc: dict, key: str, where: str) -> float:
    value = doc.get(key)
    if not _is_number(value):
        raise ParseError(f"{key} must be a number", field=f"{where}.{key}")
    return value
