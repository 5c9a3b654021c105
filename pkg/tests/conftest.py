import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def multilang_path() -> Path:
    return FIXTURES / "multilang_400.jsonl"


@pytest.fixture(scope="session")
def bilingual_path() -> Path:
    return FIXTURES / "bilingual_binary_400.jsonl"


@pytest.fixture(scope="session")
def multilang_manifest() -> dict:
    return json.loads((FIXTURES / "multilang_400.manifest.json").read_text())


@pytest.fixture(scope="session")
def bilingual_manifest() -> dict:
    return json.loads((FIXTURES / "bilingual_binary_400.manifest.json").read_text())


@pytest.fixture(scope="session")
def multilang_records(multilang_path):
    from ghalib.corpus import LabelSchema, load_corpus

    records, _ = load_corpus(multilang_path, schema=LabelSchema.multiclass())
    return records


@pytest.fixture(scope="session")
def bilingual_records(bilingual_path):
    from ghalib.corpus import LabelSchema, load_corpus

    records, _ = load_corpus(bilingual_path, schema=LabelSchema.binary())
    return records
