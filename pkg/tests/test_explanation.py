import json
import random
from pathlib import Path

import pytest

from clarify import (
    Case,
    InconsistentInputs,
    SimilarityConfig,
    Solution,
    SymbolicValue,
    UnknownConcept,
    UnknownTemplate,
    build_explanation,
    generate_explanation,
    load_ontology,
    render_explanation,
)
from clarify.adaptation import (
    STRATEGY_CONCEPT_SUBSTITUTION,
    STRATEGY_NULL,
    adapt_solution,
)
from clarify.explanation import Gloss, LITERAL_TEMPLATE, RICH_TEMPLATE
from clarify.retrieval import RetrievalResult, retrieve_similar_case
from clarify.similarity import compute_similarity

from .gen import gen_ontology, gen_solution
from .oracles import literal_explanation_oracle

GOLDEN = Path(__file__).parent / "golden"

ONTOLOGY = load_ontology(
    json.dumps(
        {
            "concepts": [
                {"id": "thing", "definition": "anything"},
                {"id": "car", "definition": "a road vehicle", "parents": ["thing"]},
                {"id": "paint", "definition": "a surface coating", "parents": ["thing"]},
                {"id": "red", "definition": "blood colored", "parents": ["thing"]},
                {"id": "blue", "definition": "sky colored", "parents": ["thing"]},
            ]
        }
    )
)


class TestGenerateExplanation:
    def test_single_concept(self):
        glosses = generate_explanation(Solution("act", ("car",)), ONTOLOGY)
        assert glosses == (Gloss("car", "a road vehicle"),)

    def test_empty_concepts(self):
        assert generate_explanation(Solution("act", ()), ONTOLOGY) == ()

    def test_duplicates_are_kept(self):
        glosses = generate_explanation(Solution("act", ("car", "car")), ONTOLOGY)
        assert glosses == (
            Gloss("car", "a road vehicle"),
            Gloss("car", "a road vehicle"),
        )

    def test_unknown_concept_names_offender(self):
        with pytest.raises(UnknownConcept) as exc_info:
            generate_explanation(Solution("act", ("car", "ghost")), ONTOLOGY)
        assert exc_info.value.concept_id == "ghost"


class TestLiteralTemplate:
    def test_fragments_joined_by_single_spaces(self):
        glosses = (Gloss("car", "a road vehicle"), Gloss("paint", "a surface coating"))
        text = render_explanation(glosses, None, None, LITERAL_TEMPLATE)
        assert text == "car: a road vehicle paint: a surface coating"

    def test_empty_glosses_render_empty(self):
        assert render_explanation((), None, None, LITERAL_TEMPLATE) == ""

    def test_matches_transliterated_loop(self):
        rng = random.Random(6001)
        for _ in range(100):
            ontology, _, _, ids = gen_ontology(rng)
            solution = gen_solution(rng, ids)
            definitions = {cid: ontology.definition_of(cid) for cid in ids}
            text = render_explanation(
                generate_explanation(solution, ontology), None, None, LITERAL_TEMPLATE
            )
            assert text == literal_explanation_oracle(solution.concepts_involved, definitions)

    def test_unknown_template(self):
        with pytest.raises(UnknownTemplate):
            render_explanation((), None, None, "fancy")


class TestBuildExplanation:
    def _retrieval(self, query, stored, solution):
        breakdown = compute_similarity(query, stored, SimilarityConfig(), ONTOLOGY)
        return RetrievalResult(stored, solution, breakdown.total, breakdown)

    def test_null_adaptation_uses_retrieved_concepts(self):
        stored = Case("c1", {"color": SymbolicValue("red")})
        query = Case("q", {"color": SymbolicValue("red")})
        solution = Solution("repaint", ("red", "paint"))
        retrieval = self._retrieval(query, stored, solution)
        record = adapt_solution(query, retrieval, ONTOLOGY, STRATEGY_NULL)
        explanation = build_explanation(retrieval, record, ONTOLOGY, RICH_TEMPLATE)
        assert [g.concept for g in explanation.concept_glosses] == ["red", "paint"]

    def test_substitution_swaps_glosses(self):
        stored = Case("c1", {"color": SymbolicValue("red")})
        query = Case("q", {"color": SymbolicValue("blue")})
        solution = Solution("repaint", ("red", "paint"))
        retrieval = self._retrieval(query, stored, solution)
        record = adapt_solution(query, retrieval, ONTOLOGY, STRATEGY_CONCEPT_SUBSTITUTION)
        explanation = build_explanation(retrieval, record, ONTOLOGY, RICH_TEMPLATE)
        concepts = [g.concept for g in explanation.concept_glosses]
        assert "blue" in concepts and "red" not in concepts
        note = explanation.adaptation_summary.substitutions[0]
        assert (note.old, note.new) == ("red", "blue")
        assert note.common_ancestor == ONTOLOGY.least_common_subsumer("red", "blue")

    def test_retrieval_summary_echoes_similarity(self):
        stored = Case("c1", {"color": SymbolicValue("red")})
        query = Case("q", {"color": SymbolicValue("blue")})
        retrieval = self._retrieval(query, stored, Solution("act", ("red",)))
        record = adapt_solution(query, retrieval, ONTOLOGY, STRATEGY_NULL)
        explanation = build_explanation(retrieval, record, ONTOLOGY, RICH_TEMPLATE)
        assert explanation.retrieval_summary.similarity == retrieval.similarity
        assert explanation.retrieval_summary.case_id == "c1"
        assert explanation.retrieval_summary.breakdown == retrieval.breakdown

    def test_mismatched_adaptation_rejected(self):
        stored = Case("c1", {"color": SymbolicValue("red")})
        query = Case("q", {"color": SymbolicValue("red")})
        retrieval = self._retrieval(query, stored, Solution("act", ("red",)))
        foreign = adapt_solution(
            query,
            self._retrieval(query, stored, Solution("other", ("paint",))),
            ONTOLOGY,
            STRATEGY_NULL,
        )
        with pytest.raises(InconsistentInputs):
            build_explanation(retrieval, foreign, ONTOLOGY, RICH_TEMPLATE)

    def test_rendered_text_nonempty_when_concepts_present(self):
        rng = random.Random(6002)
        for _ in range(50):
            ontology, _, _, ids = gen_ontology(rng)
            solution = gen_solution(rng, ids)
            glosses = generate_explanation(solution, ontology)
            for template in (LITERAL_TEMPLATE,):
                text = render_explanation(glosses, None, None, template)
                if solution.concepts_involved:
                    assert text

    def test_completeness_every_adapted_concept_is_glossed(self):
        stored = Case("c1", {"color": SymbolicValue("red")})
        query = Case("q", {"color": SymbolicValue("blue")})
        solution = Solution("repaint", ("red", "paint", "red"))
        retrieval = self._retrieval(query, stored, solution)
        record = adapt_solution(query, retrieval, ONTOLOGY, STRATEGY_CONCEPT_SUBSTITUTION)
        explanation = build_explanation(retrieval, record, ONTOLOGY, RICH_TEMPLATE)
        glossed = [g.concept for g in explanation.concept_glosses]
        assert glossed == list(record.adapted.concepts_involved)
        for concept in record.adapted.concepts_involved:
            assert concept in explanation.rendered_text


class TestGoldenRendering:
    def test_rich_output_matches_golden_file(self, engine, query_doc):
        from clarify.casebase import case_from_document

        details = engine.decide(case_from_document(query_doc))
        expected = (GOLDEN / "decision_rich.txt").read_text(encoding="utf-8")
        assert details.explanation.rendered_text == expected

    def test_literal_output_matches_golden_file(self, engine, query_doc):
        from clarify.casebase import case_from_document

        details = engine.decide(case_from_document(query_doc), template=LITERAL_TEMPLATE)
        expected = (GOLDEN / "decision_literal.txt").read_text(encoding="utf-8")
        assert details.explanation.rendered_text == expected

    def test_rendering_is_deterministic(self, engine, query_doc):
        from clarify.casebase import case_from_document

        case = case_from_document(query_doc)
        first = engine.decide(case)
        second = engine.decide(case)
        assert first.explanation.rendered_text == second.explanation.rendered_text
        assert first.explanation.to_document() == second.explanation.to_document()
