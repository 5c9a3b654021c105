import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent.parent / "fixtures"

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "hope", "dream", "bright", "rise", "bloom", "gloom", "fade", "sink",
    "the", "a", "sun", "day", "we", "see", "what", "comes", "next",
    "and", "goes", "on", "water", "under", "bridge",
]


@pytest.fixture(scope="session")
def encoder_dir(tmp_path_factory) -> Path:
    """Tiny randomly initialized BERT saved locally; loads offline."""
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast

    d = tmp_path_factory.mktemp("tiny-encoder")
    vocab_file = d / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(vocab_file), do_lower_case=True)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=130,
    )
    torch.manual_seed(7)
    model = BertModel(config)
    tokenizer.save_pretrained(d)
    model.save_pretrained(d)
    return d


def write_jsonl(path: Path, rows) -> Path:
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def small_corpus(tmp_path) -> Path:
    rows = [
        {"id": "a1", "text": "hope rises with the sun", "language": "en"},
        {"id": "a2", "text": "gloom fades day by day", "language": "en"},
        {"id": "a3", "text": "امید روشن ہے", "language": "ur"},
        {"id": "a4", "text": "the bridge under water", "language": "en"},
        {"id": "a5", "text": "we see what comes next", "language": "en"},
        {"id": "a6", "text": "bright dreams bloom", "language": "en"},
    ]
    return write_jsonl(tmp_path / "small.jsonl", rows)


@pytest.fixture(scope="session")
def bilingual_fixture() -> Path:
    return FIXTURES / "bilingual_binary_400.jsonl"
