"""The decision pipeline: retrieve, adapt, explain, audit.

``Engine`` owns the loaded ontology, the current case-base snapshot, the
packed retrieval index, and the audit writer. A decision is the composition
of the three stage functions; everything except the generated decision id
and timestamp is deterministic in (inputs, config).
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._pack import CaseBaseIndex
from .adaptation import STRATEGIES, STRATEGY_NULL, adapt_solution
from .audit import AuditWriter
from .casebase import (
    Case,
    CaseBase,
    Solution,
    add_case,
    case_from_document,
    case_to_document,
    load_case_base,
    solution_to_document,
    validate_case,
)
from .errors import ClarifyError, ParseError, StorageError, UnknownTemplate, ValidationError
from .explanation import Explanation, RICH_TEMPLATE, TEMPLATES, build_explanation
from .ontology import Ontology, load_ontology
from .retrieval import retrieve_k, retrieve_similar_case
from .similarity import MISSING_PENALIZE, SimilarityConfig

logger = logging.getLogger("clarify.engine")

_CONFIG_KEYS = {
    "ontology_path",
    "case_base_path",
    "audit_log_path",
    "similarity",
    "adaptation_strategy",
    "template",
}
_SIMILARITY_KEYS = {"weights", "default_weight", "missing_policy"}


@dataclass(frozen=True)
class EngineConfig:
    ontology_path: Path
    case_base_path: Path
    audit_log_path: Path
    similarity: SimilarityConfig
    adaptation_strategy: str = STRATEGY_NULL
    template: str = RICH_TEMPLATE


def load_engine_config(path: str | Path) -> EngineConfig:
    """Parse the engine config file; relative paths resolve against it."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in config: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ParseError(f"unknown config key {unknown[0]!r}", field=unknown[0])

    def _path_of(key: str) -> Path:
        value = data.get(key)
        if not isinstance(value, str) or not value:
            raise ParseError(f"{key} must be a path string", field=key)
        return (path.parent / value).resolve()

    sim_raw = data.get("similarity", {})
    if not isinstance(sim_raw, dict):
        raise ParseError("similarity must be an object", field="similarity")
    unknown = sorted(set(sim_raw) - _SIMILARITY_KEYS)
    if unknown:
        raise ParseError(f"unknown similarity key {unknown[0]!r}", field=unknown[0])
    weights = sim_raw.get("weights", {})
    if not isinstance(weights, dict):
        raise ParseError("weights must be an object", field="similarity.weights")
    similarity = SimilarityConfig(
        weights=dict(weights),
        default_weight=sim_raw.get("default_weight", 1.0),
        missing_policy=sim_raw.get("missing_policy", MISSING_PENALIZE),
    )

    strategy = data.get("adaptation_strategy", STRATEGY_NULL)
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown adaptation_strategy {strategy!r}")
    template = data.get("template", RICH_TEMPLATE)
    if template not in TEMPLATES:
        raise UnknownTemplate(template)

    return EngineConfig(
        ontology_path=_path_of("ontology_path"),
        case_base_path=_path_of("case_base_path"),
        audit_log_path=_path_of("audit_log_path"),
        similarity=similarity,
        adaptation_strategy=strategy,
        template=template,
    )


def config_fingerprint(config: EngineConfig) -> str:
    """Stable hash of the decision-shaping config fields.

    Covers the similarity settings, adaptation strategy, and template; file
    locations are deployment details (the audited query and the case-base
    version pin down the data side of every decision).
    """
    payload = {
        "similarity": {
            "weights": {k: config.similarity.weights[k] for k in sorted(config.similarity.weights)},
            "default_weight": config.similarity.default_weight,
            "missing_policy": config.similarity.missing_policy,
        },
        "adaptation_strategy": config.adaptation_strategy,
        "template": config.template,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class DecisionDetails:
    similar_case: Case
    solution: Solution  # the adapted solution
    explanation: Explanation
    decision_id: str
    timestamp: str
    engine_version: str
    case_base_version: int

    @property
    def similarity(self) -> float:
        return self.explanation.retrieval_summary.similarity

    def to_document(self) -> dict:
        return {
            "decision_id": self.decision_id,
            "timestamp": self.timestamp,
            "engine_version": self.engine_version,
            "case_base_version": self.case_base_version,
            "similarity": self.similarity,
            "similar_case": case_to_document(self.similar_case),
            "solution": solution_to_document(self.solution),
            "explanation": self.explanation.to_document(),
        }


class Engine:
    """Thread-safe facade over one ontology + case base + config."""

    def __init__(
        self,
        ontology: Ontology,
        case_base: CaseBase,
        config: EngineConfig,
        *,
        audit_writer: AuditWriter | None = None,
    ):
        self.ontology = ontology
        self.config = config
        self.fingerprint = config_fingerprint(config)
        self._base = case_base
        self._index = CaseBaseIndex(case_base)
        self._lock = threading.Lock()
        self._audit = audit_writer

    @classmethod
    def from_config(cls, config: EngineConfig | str | Path, *, audit: bool = True) -> "Engine":
        if not isinstance(config, EngineConfig):
            config = load_engine_config(config)
        ontology = load_ontology(config.ontology_path.read_text(encoding="utf-8"))
        case_base = load_case_base(
            config.case_base_path.read_text(encoding="utf-8"), ontology
        )
        writer = AuditWriter(config.audit_log_path) if audit else None
        return cls(ontology, case_base, config, audit_writer=writer)

    # -- case base ----------------------------------------------------------

    def snapshot(self) -> tuple[CaseBase, CaseBaseIndex]:
        return self._base, self._index

    @property
    def case_base(self) -> CaseBase:
        return self._base

    def add_case(self, case: Case, solution: Solution) -> int:
        """Append an entry; returns the new case_base_version."""
        with self._lock:
            new_base = add_case(self._base, case, solution, self.ontology)
            new_index = CaseBaseIndex(new_base)
            self._base = new_base
            self._index = new_index
            return new_base.source_version

    # -- decisions ------------------------------------------------------------

    def decide(self, new_case: Case, template: str | None = None) -> DecisionDetails:
        """Run the full pipeline and audit the outcome (success or error)."""
        requested = template if template is not None else self.config.template
        try:
            template = self._effective_template(template)
            details = self._decide(new_case, template)
        except Exception as exc:
            code = exc.api_code if isinstance(exc, ClarifyError) else "INTERNAL"
            self._audit_record(
                {
                    "kind": "decision",
                    "decision_id": str(uuid.uuid4()),
                    "timestamp": _now(),
                    "query": case_to_document(new_case),
                    "template": requested,
                    "config_fingerprint": self.fingerprint,
                    "outcome": code,
                    "error": str(exc),
                }
            )
            raise
        self._audit_record(
            {
                "kind": "decision",
                "decision_id": details.decision_id,
                "timestamp": details.timestamp,
                "query": case_to_document(new_case),
                "template": template,
                "config_fingerprint": self.fingerprint,
                "outcome": "success",
                "details": details.to_document(),
            }
        )
        return details

    def decide_unaudited(self, new_case: Case, template: str | None = None) -> DecisionDetails:
        """The pipeline without an audit record (what-if variants, replay)."""
        return self._decide(new_case, self._effective_template(template))

    def _decide(self, new_case: Case, template: str) -> DecisionDetails:
        violations = validate_case(new_case, self.ontology)
        if violations:
            raise ValidationError(
                f"query case failed validation: {violations[0].message}",
                violations=violations,
                case_id=new_case.case_id,
            )
        base, index = self.snapshot()
        retrieval = retrieve_similar_case(
            new_case, base, self.config.similarity, self.ontology, index=index
        )
        adaptation = adapt_solution(
            new_case, retrieval, self.ontology, self.config.adaptation_strategy
        )
        explanation = build_explanation(retrieval, adaptation, self.ontology, template)
        return DecisionDetails(
            similar_case=retrieval.case,
            solution=adaptation.adapted,
            explanation=explanation,
            decision_id=str(uuid.uuid4()),
            timestamp=_now(),
            engine_version=__version__,
            case_base_version=base.source_version,
        )

    def what_if(
        self,
        new_case: Case,
        overrides: list[dict[str, object]],
        template: str | None = None,
    ) -> list[DecisionDetails]:
        """Baseline plus one decision per override set, in request order.

        Each override maps feature names (which must exist on the query,
        with matching value kinds) to replacement values. What-if runs are
        audited as a single exploration record, not as decisions.
        """
        template = self._effective_template(template)
        variants = [new_case]
        for i, override in enumerate(overrides):
            variants.append(_apply_override(new_case, override, i))
        results = [self.decide_unaudited(v, template) for v in variants]
        self._audit_record(
            {
                "kind": "whatif",
                "whatif_id": str(uuid.uuid4()),
                "timestamp": _now(),
                "query": case_to_document(new_case),
                "override_count": len(overrides),
                "template": template,
                "config_fingerprint": self.fingerprint,
                "outcome": "success",
                "decision_ids": [d.decision_id for d in results],
            }
        )
        return results

    def retrieve(self, new_case: Case, k: int):
        base, index = self.snapshot()
        return retrieve_k(
            new_case, base, k, self.config.similarity, self.ontology, index=index
        )

    # -- audit ----------------------------------------------------------------

    def replay(self, record: dict) -> DecisionDetails:
        """Recompute a recorded decision from its stored inputs."""
        if record.get("kind") != "decision" or record.get("outcome") != "success":
            raise ValidationError("only successful decision records can be replayed")
        query = case_from_document(record["query"], "record.query")
        return self.decide_unaudited(query, record.get("template"))

    def _audit_record(self, record: dict) -> None:
        if self._audit is None:
            return
        try:
            self._audit.append(record)
        except StorageError as exc:
            # The decision still returns; the storage failure is out-of-band.
            logger.error("audit append failed: %s", exc.message)

    def _effective_template(self, template: str | None) -> str:
        if template is None:
            return self.config.template
        if template not in TEMPLATES:
            raise UnknownTemplate(template)
        return template

    # -- maintenance ------------------------------------------------------------

    def validation_report(self) -> list[str]:
        """Cross-validate every stored entry; empty means clean."""
        problems: list[str] = []
        for case, solution in self._base.entries:
            for violation in validate_case(case, self.ontology):
                problems.append(f"{case.case_id}: {violation.message}")
            for concept in solution.concepts_involved:
                if concept not in self.ontology:
                    problems.append(
                        f"{case.case_id}: solution references unknown concept {concept!r}"
                    )
        return problems


def _apply_override(case: Case, override, index: int) -> Case:
    from .casebase import feature_value_from_document

    def _fail(message: str):
        exc = ValidationError(message)
        exc.override_index = index
        raise exc

    if not isinstance(override, dict) or not override:
        _fail(f"override {index} must be a non-empty object mapping features to values")
    features = dict(case.features)
    for name in sorted(override):
        if name not in features:
            _fail(f"override {index} names unknown feature {name!r}")
        value = override[name]
        if isinstance(value, dict):
            try:
                replacement = feature_value_from_document(
                    value, f"overrides[{index}][{name!r}]"
                )
            except ParseError as exc:
                exc.override_index = index
                raise
        else:
            replacement = value
        if not hasattr(replacement, "kind") or replacement.kind != features[name].kind:
            _fail(
                f"override {index} for feature {name!r} must keep the "
                f"{features[name].kind} type"
            )
        features[name] = replacement
    return Case(case.case_id, features)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()
