"""HTTP facade over the engine (JSON over /v1).

Every 200 body is produced by the same serializers the library exposes, so
API responses match direct library calls field for field (ids and
timestamps aside). Errors use a closed code set:

    PARSE_ERROR, VALIDATION_ERROR, EMPTY_CASE_BASE, UNKNOWN_CONCEPT,
    NOT_FOUND, INTERNAL
"""

from __future__ import annotations

import logging

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .casebase import (
    case_from_document,
    case_to_document,
    solution_from_document,
    solution_to_document,
)
from .engine import Engine
from .errors import (
    ClarifyError,
    DuplicateCaseId,
    EmptyCaseBase,
    ParseError,
    UnknownConcept,
    ValidationError,
)
from .ontology import ontology_to_document

logger = logging.getLogger("clarify.service")

_STATUS_BY_CODE = {
    "PARSE_ERROR": 400,
    "VALIDATION_ERROR": 400,
    "EMPTY_CASE_BASE": 409,
    "UNKNOWN_CONCEPT": 400,
    "NOT_FOUND": 404,
    "INTERNAL": 500,
}


class NotFound(ClarifyError):
    api_code = "NOT_FOUND"


def _error_body(code: str, message: str, detail=None) -> dict:
    body = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return body


def _error_response(exc: ClarifyError) -> JSONResponse:
    detail = None
    if isinstance(exc, ValidationError):
        detail = {}
        if exc.violations:
            detail["violations"] = [v.to_document() for v in exc.violations]
        if exc.case_id is not None:
            detail["case_id"] = exc.case_id
        if getattr(exc, "override_index", None) is not None:
            detail["override_index"] = exc.override_index
        if getattr(exc, "template", None) is not None:
            detail["template"] = exc.template
        detail = detail or None
    elif isinstance(exc, UnknownConcept):
        detail = {"concept": exc.concept_id}
    elif isinstance(exc, ParseError):
        if getattr(exc, "override_index", None) is not None:
            detail = {"override_index": exc.override_index}
    status = 409 if isinstance(exc, DuplicateCaseId) else _STATUS_BY_CODE[exc.api_code]
    return JSONResponse(status_code=status, content=_error_body(exc.api_code, exc.message, detail))


def create_app(engine: Engine) -> FastAPI:
    from . import __version__

    app = FastAPI(title="clarify service", version=__version__)
    # The browser UI may be served from a different origin; the API itself
    # is unauthenticated decision support, so a permissive policy is fine.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ClarifyError)
    async def _clarify_error(request: Request, exc: ClarifyError):
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_body("PARSE_ERROR", "request body is not a JSON object"),
        )

    @app.exception_handler(Exception)
    async def _unexpected(request: Request, exc: Exception):
        logger.exception("unhandled error on %s", request.url.path)
        return JSONResponse(
            status_code=500, content=_error_body("INTERNAL", "internal error")
        )

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "engine_version": __version__,
            "case_base_version": engine.case_base.source_version,
        }

    @app.post("/v1/decisions")
    def post_decision(payload: dict = Body(...)):
        template = payload.pop("template", None)
        if template is not None and not isinstance(template, str):
            raise ValidationError("template must be a string")
        case = case_from_document(payload, "body")
        details = engine.decide(case, template)
        return details.to_document()

    @app.get("/v1/cases")
    def list_cases():
        base = engine.case_base
        return {
            "case_base_version": base.source_version,
            "cases": [_entry_document(case, solution) for case, solution in base.entries],
        }

    @app.post("/v1/cases", status_code=201)
    def create_case(payload: dict = Body(...)):
        if not isinstance(payload, dict):
            raise ParseError("case entry must be an object")
        unknown = sorted(set(payload) - {"case_id", "features", "solution"})
        if unknown:
            raise ParseError(f"unknown key {unknown[0]!r} in case entry", field=unknown[0])
        case = case_from_document(
            {"case_id": payload.get("case_id"), "features": payload.get("features")}, "body"
        )
        solution = solution_from_document(payload.get("solution"), "body.solution")
        version = engine.add_case(case, solution)
        return {"case_id": case.case_id, "case_base_version": version}

    @app.get("/v1/cases/{case_id}")
    def get_case(case_id: str):
        entry = engine.case_base.get(case_id)
        if entry is None:
            raise NotFound(f"no case with id {case_id!r}")
        case, solution = entry
        return _entry_document(case, solution)

    @app.get("/v1/ontology")
    def get_ontology():
        return ontology_to_document(engine.ontology)

    @app.get("/v1/ontology/concepts/{concept_id}")
    def get_concept(concept_id: str):
        if concept_id not in engine.ontology:
            raise NotFound(f"no concept with id {concept_id!r}")
        concept = engine.ontology.concept(concept_id)
        return {
            "id": concept.id,
            "label": concept.label,
            "definition": concept.definition,
            "parents": sorted(concept.parents),
            "depth": engine.ontology.depth(concept_id),
        }

    @app.post("/v1/whatif")
    def post_whatif(payload: dict = Body(...)):
        overrides = payload.pop("overrides", [])
        template = payload.pop("template", None)
        if template is not None and not isinstance(template, str):
            raise ValidationError("template must be a string")
        if not isinstance(overrides, list):
            raise ValidationError("overrides must be a list")
        case = case_from_document(payload, "body")
        results = engine.what_if(case, overrides, template)
        return {"decisions": [d.to_document() for d in results]}

    return app


def _entry_document(case, solution) -> dict:
    doc = case_to_document(case)
    doc["solution"] = solution_to_document(solution)
    return doc
