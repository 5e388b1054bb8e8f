import json
import shutil
from pathlib import Path

import pytest

from clarify import Engine, load_case_base, load_ontology

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fixture_ontology_text() -> str:
    return (FIXTURES / "ontology.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_ontology(fixture_ontology_text):
    return load_ontology(fixture_ontology_text)


@pytest.fixture(scope="session")
def fixture_case_base(fixture_ontology):
    text = (FIXTURES / "cases.json").read_text(encoding="utf-8")
    return load_case_base(text, fixture_ontology)


@pytest.fixture()
def fixture_dir(tmp_path) -> Path:
    """A scratch copy of the demo config + documents, paths kept relative."""
    for name in ("ontology.json", "cases.json", "config.json", "query.json"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    return tmp_path


@pytest.fixture()
def engine(fixture_dir) -> Engine:
    return Engine.from_config(fixture_dir / "config.json")


@pytest.fixture()
def query_doc(fixture_dir) -> dict:
    return json.loads((fixture_dir / "query.json").read_text(encoding="utf-8"))
