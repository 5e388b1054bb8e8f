"""Error taxonomy shared by every layer of the engine.

Each exception carries a stable ``api_code`` drawn from the closed set used
on the wire (PARSE_ERROR, VALIDATION_ERROR, EMPTY_CASE_BASE, UNKNOWN_CONCEPT,
NOT_FOUND, INTERNAL) so the service and CLI can map failures without
inspecting messages.
"""

from __future__ import annotations

API_CODES = frozenset(
    {
        "PARSE_ERROR",
        "VALIDATION_ERROR",
        "EMPTY_CASE_BASE",
        "UNKNOWN_CONCEPT",
        "NOT_FOUND",
        "INTERNAL",
    }
)


class ClarifyError(Exception):
    """Base class for all engine errors."""

    api_code = "INTERNAL"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(ClarifyError):
    """A document is structurally malformed (bad JSON, wrong shape, bad field)."""

    api_code = "PARSE_ERROR"

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        locator = ""
        if field is not None:
            locator = f" (at {field})"
        elif line is not None:
            locator = f" (line {line})"
        super().__init__(message + locator)
        self.field = field
        self.line = line


class ValidationError(ClarifyError):
    """Well-formed input that violates a domain invariant."""

    api_code = "VALIDATION_ERROR"

    def __init__(self, message: str, *, violations=None, case_id: str | None = None):
        super().__init__(message)
        # Violation objects from casebase.validate_case, when applicable.
        self.violations = list(violations) if violations else []
        self.case_id = case_id


class DuplicateCaseId(ValidationError):
    def __init__(self, case_id: str):
        super().__init__(f"duplicate case_id {case_id!r}", case_id=case_id)


class UnknownConcept(ClarifyError):
    """A concept id that does not resolve in the active ontology."""

    api_code = "UNKNOWN_CONCEPT"

    def __init__(self, concept_id: str, *, context: str | None = None):
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown concept {concept_id!r}{suffix}")
        self.concept_id = concept_id
        # Filled in by retrieval when the failure happened against a stored case.
        self.case_id: str | None = None


class SimilarityError(ClarifyError):
    """Two feature values (or two cases) cannot be compared."""

    api_code = "VALIDATION_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.feature: str | None = None
        self.case_id: str | None = None


class TypeMismatch(SimilarityError):
    def __init__(self, kind_a: str, kind_b: str):
        super().__init__(f"cannot compare {kind_a} value with {kind_b} value")
        self.kind_a = kind_a
        self.kind_b = kind_b


class RangeMismatch(SimilarityError):
    def __init__(self, range_a, range_b):
        super().__init__(f"numeric ranges differ: {list(range_a)} vs {list(range_b)}")
        self.range_a = tuple(range_a)
        self.range_b = tuple(range_b)


class NoComparableFeatures(SimilarityError):
    def __init__(self):
        super().__init__("no comparable features: all weights are zero or every feature was ignored")


class EmptyCaseBase(ClarifyError):
    api_code = "EMPTY_CASE_BASE"

    def __init__(self):
        super().__init__("case base is empty; retrieval is undefined")


class UnknownTemplate(ValidationError):
    def __init__(self, template: str):
        super().__init__(f"unknown explanation template {template!r}")
        self.template = template


class InconsistentInputs(ClarifyError):
    """Pipeline stages fed with records that do not belong together."""

    api_code = "INTERNAL"


class StorageError(ClarifyError):
    """Audit log could not be written; decisions still return to the caller."""

    api_code = "INTERNAL"
