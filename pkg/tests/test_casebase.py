import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from clarify import (
    Case,
    CaseBase,
    DuplicateCaseId,
    FlagValue,
    NumericValue,
    ParseError,
    Solution,
    SymbolicValue,
    TextValue,
    ValidationError,
    add_case,
    load_case_base,
    load_ontology,
    save_case_base,
    validate_case,
)

from .gen import gen_case_base_document

ONTOLOGY = load_ontology(
    json.dumps(
        {
            "concepts": [
                {"id": "thing", "definition": "anything"},
                {"id": "car", "definition": "a road vehicle", "parents": ["thing"]},
            ]
        }
    )
)


def entry(case_id, features, action="approve", concepts=()):
    return {
        "case_id": case_id,
        "features": features,
        "solution": {"action": action, "concepts_involved": list(concepts), "parameters": {}},
    }


NUM = {"type": "numeric", "value": 42, "range": [0, 120]}
SYM = {"type": "symbolic", "concept": "car"}


class TestLoading:
    def test_two_valid_entries_in_file_order(self):
        text = json.dumps({"cases": [entry("c1", {"age": NUM}), entry("c2", {"age": NUM})]})
        base = load_case_base(text, ONTOLOGY)
        assert base.case_ids() == ["c1", "c2"]
        assert base.source_version == 0

    def test_duplicate_case_id(self):
        text = json.dumps({"cases": [entry("c1", {"age": NUM}), entry("c1", {"age": NUM})]})
        with pytest.raises(DuplicateCaseId) as exc_info:
            load_case_base(text, ONTOLOGY)
        assert exc_info.value.case_id == "c1"

    def test_unknown_symbolic_concept(self):
        text = json.dumps(
            {"cases": [entry("c1", {"species": {"type": "symbolic", "concept": "unicorn"}})]}
        )
        with pytest.raises(ValidationError, match="unicorn"):
            load_case_base(text, ONTOLOGY)

    def test_solution_concept_must_resolve(self):
        text = json.dumps({"cases": [entry("c1", {"age": NUM}, concepts=["ghost"])]})
        with pytest.raises(ValidationError, match="ghost"):
            load_case_base(text, ONTOLOGY)

    def test_disagreeing_ranges_rejected(self):
        other = dict(NUM, range=[0, 100])
        text = json.dumps({"cases": [entry("c1", {"age": NUM}), entry("c2", {"age": other})]})
        with pytest.raises(ValidationError, match="disagrees"):
            load_case_base(text, ONTOLOGY)

    def test_unknown_top_level_key(self):
        with pytest.raises(ParseError, match="unknown key"):
            load_case_base(json.dumps({"cases": [], "notes": 1}), ONTOLOGY)

    def test_unknown_feature_type(self):
        text = json.dumps({"cases": [entry("c1", {"x": {"type": "tuple"}})]})
        with pytest.raises(ParseError, match="unknown feature value type"):
            load_case_base(text, ONTOLOGY)

    def test_non_finite_numbers_rejected(self):
        text = '{"cases": [%s]}' % json.dumps(
            entry("c1", {"x": {"type": "numeric", "value": 1, "range": [0, 10]}})
        )
        text = text.replace('"value": 1', '"value": NaN')
        with pytest.raises(ParseError, match="non-finite"):
            load_case_base(text, ONTOLOGY)

    def test_flag_value_must_be_boolean(self):
        text = json.dumps({"cases": [entry("c1", {"x": {"type": "flag", "value": 1}})]})
        with pytest.raises(ParseError, match="boolean"):
            load_case_base(text, ONTOLOGY)

    def test_bool_not_accepted_as_number(self):
        text = json.dumps(
            {"cases": [entry("c1", {"x": {"type": "numeric", "value": True, "range": [0, 1]}})]}
        )
        with pytest.raises(ParseError, match="must be a number"):
            load_case_base(text, ONTOLOGY)


class TestValidateCase:
    def test_valid_case(self):
        case = Case("c1", {"age": NumericValue(42, 0, 120), "species": SymbolicValue("car")})
        assert validate_case(case, ONTOLOGY) == []

    def test_out_of_range_value(self):
        case = Case("c1", {"age": NumericValue(12, 0, 10)})
        violations = validate_case(case, ONTOLOGY)
        assert len(violations) == 1
        v = violations[0]
        assert v.kind == "out-of-range" and v.feature == "age"
        assert "12" in v.message and "[0, 10]" in v.message

    def test_all_violations_reported_in_feature_order(self):
        case = Case(
            "c1",
            {
                "zz": NumericValue(5, 10, 0),
                "aa": SymbolicValue("unicorn"),
            },
        )
        violations = validate_case(case, ONTOLOGY)
        assert [v.feature for v in violations] == ["aa", "zz"]
        assert [v.kind for v in violations] == ["unknown-concept", "invalid-range"]

    def test_empty_features(self):
        violations = validate_case(Case("c1", {}), ONTOLOGY)
        assert [v.kind for v in violations] == ["empty-features"]


class TestAddCase:
    def setup_method(self):
        self.case = Case("c1", {"age": NumericValue(30, 0, 120)})
        self.solution = Solution("approve", ("car",))

    def test_append_to_empty_base(self):
        base = add_case(CaseBase(), self.case, self.solution, ONTOLOGY)
        assert len(base) == 1
        assert base.source_version == 1

    def test_duplicate_id_leaves_base_unchanged(self):
        base = add_case(CaseBase(), self.case, self.solution, ONTOLOGY)
        with pytest.raises(DuplicateCaseId):
            add_case(base, self.case, self.solution, ONTOLOGY)
        assert len(base) == 1 and base.source_version == 1

    def test_validation_failure_rejected(self):
        bad = Case("c9", {"age": NumericValue(300, 0, 120)})
        base = add_case(CaseBase(), self.case, self.solution, ONTOLOGY)
        with pytest.raises(ValidationError) as exc_info:
            add_case(base, bad, self.solution, ONTOLOGY)
        assert exc_info.value.case_id == "c9"
        assert len(base) == 1

    def test_range_agreement_enforced_on_append(self):
        base = add_case(CaseBase(), self.case, self.solution, ONTOLOGY)
        other = Case("c2", {"age": NumericValue(30, 0, 100)})
        with pytest.raises(ValidationError, match="disagrees"):
            add_case(base, other, self.solution, ONTOLOGY)

    def test_n_adds_give_n_entries(self):
        base = CaseBase()
        for i in range(7):
            base = add_case(
                base, Case(f"c{i}", {"age": NumericValue(i, 0, 120)}), self.solution, ONTOLOGY
            )
        assert len(base) == 7 and base.source_version == 7

    def test_clean_validation_implies_add_succeeds(self):
        case = Case("fresh", {"age": NumericValue(1, 0, 120)})
        assert validate_case(case, ONTOLOGY) == []
        add_case(CaseBase(), case, self.solution, ONTOLOGY)


class TestPersistence:
    def test_empty_base(self):
        text = save_case_base(CaseBase())
        assert json.loads(text) == {"cases": []}
        assert load_case_base(text, ONTOLOGY).entries == ()

    def test_round_trip_random_bases(self):
        rng = random.Random(2001)
        for _ in range(60):
            text, ontology = gen_case_base_document(rng)
            base = load_case_base(text, ontology)
            again = load_case_base(save_case_base(base), ontology)
            assert again.entries == base.entries

    def test_save_is_byte_deterministic(self):
        rng = random.Random(2002)
        text, ontology = gen_case_base_document(rng)
        base = load_case_base(text, ontology)
        assert save_case_base(base) == save_case_base(base)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=-1e300, max_value=1e300, allow_nan=False),
            min_size=3,
            max_size=3,
            unique=True,
        )
    )
    def test_numeric_full_precision_round_trip(self, triple):
        lo, value, hi = sorted(triple)
        case = Case("c1", {"x": NumericValue(value, lo, hi)})
        base = CaseBase(((case, Solution("approve")),))
        reloaded = load_case_base(save_case_base(base), ONTOLOGY)
        restored = reloaded.entries[0][0].features["x"]
        assert restored.value == value and (restored.lo, restored.hi) == (lo, hi)

    def test_entry_order_preserved(self):
        rng = random.Random(2003)
        text, ontology = gen_case_base_document(rng)
        base = load_case_base(text, ontology)
        again = load_case_base(save_case_base(base), ontology)
        assert again.case_ids() == base.case_ids()

    def test_text_features_round_trip(self):
        case = Case(
            "c1",
            {
                "note": TextValue("unicode: éß中"),
                "ok": FlagValue(True),
            },
        )
        base = CaseBase(((case, Solution("approve", ("car",), {"limit": 3})),))
        again = load_case_base(save_case_base(base), ONTOLOGY)
        assert again.entries == base.entries
