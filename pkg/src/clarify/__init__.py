"""clarify: a case-based decision support engine with ontology-grounded
explanations.

Decisions are made by retrieving the most similar stored case, adapting its
solution to the query, and pairing every concept the solution involves with
its ontology definition. Every decision is appended to an audit log from
which it can be replayed deterministically.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ClarifyError,
    DuplicateCaseId,
    EmptyCaseBase,
    InconsistentInputs,
    NoComparableFeatures,
    ParseError,
    RangeMismatch,
    StorageError,
    TypeMismatch,
    UnknownConcept,
    UnknownTemplate,
    ValidationError,
)
from .ontology import Concept, Ontology, Relation, load_ontology, save_ontology  # noqa: E402
from .casebase import (  # noqa: E402
    Case,
    CaseBase,
    FlagValue,
    NumericValue,
    Solution,
    SymbolicValue,
    TextValue,
    add_case,
    load_case_base,
    save_case_base,
    validate_case,
)
from .similarity import (  # noqa: E402
    SimilarityBreakdown,
    SimilarityConfig,
    compute_similarity,
    local_similarity,
)
from .retrieval import RetrievalResult, retrieve_k, retrieve_similar_case  # noqa: E402
from .adaptation import (  # noqa: E402
    AdaptationRecord,
    STRATEGY_CONCEPT_SUBSTITUTION,
    STRATEGY_NULL,
    adapt_solution,
)
from .explanation import (  # noqa: E402
    Explanation,
    LITERAL_TEMPLATE,
    RICH_TEMPLATE,
    build_explanation,
    generate_explanation,
    render_explanation,
)
from .engine import (  # noqa: E402
    DecisionDetails,
    Engine,
    EngineConfig,
    config_fingerprint,
    load_engine_config,
)

__all__ = [
    "__version__",
    "ClarifyError",
    "ParseError",
    "ValidationError",
    "DuplicateCaseId",
    "UnknownConcept",
    "TypeMismatch",
    "RangeMismatch",
    "NoComparableFeatures",
    "EmptyCaseBase",
    "UnknownTemplate",
    "InconsistentInputs",
    "StorageError",
    "Concept",
    "Relation",
    "Ontology",
    "load_ontology",
    "save_ontology",
    "Case",
    "CaseBase",
    "Solution",
    "NumericValue",
    "SymbolicValue",
    "FlagValue",
    "TextValue",
    "load_case_base",
    "save_case_base",
    "add_case",
    "validate_case",
    "SimilarityConfig",
    "SimilarityBreakdown",
    "compute_similarity",
    "local_similarity",
    "RetrievalResult",
    "retrieve_similar_case",
    "retrieve_k",
    "AdaptationRecord",
    "adapt_solution",
    "STRATEGY_NULL",
    "STRATEGY_CONCEPT_SUBSTITUTION",
    "Explanation",
    "generate_explanation",
    "render_explanation",
    "build_explanation",
    "LITERAL_TEMPLATE",
    "RICH_TEMPLATE",
    "Engine",
    "EngineConfig",
    "DecisionDetails",
    "load_engine_config",
    "config_fingerprint",
]
