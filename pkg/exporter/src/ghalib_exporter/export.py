"""Export jobs: frozen encoder -> pooled states -> GHEM file.

One job produces one file for one (corpus, encoder) pair. The encoder
runs in evaluation mode with gradients disabled, so the output is a
pure function of the weights and the corpus; exporting twice yields
byte-identical files. Batch size must not change values beyond 32-bit
rounding (checked in the tests at 1e-5, since accelerated reductions
are not associative).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ghalib_exporter.corpus import read_corpus
from ghalib_exporter.errors import ExportError
from ghalib_exporter.ghem import POOLING_FLAGS, corpus_digest, parse_header, write_ghem

SLOTS = ("UR_ENC", "EN_ENC", "EURO_ENC")

# Overridable per-slot encoder registry. These are ordinary hub names;
# any local save_pretrained directory works the same way.
DEFAULT_ENCODERS = {
    "UR_ENC": "bert-base-multilingual-cased",
    "EN_ENC": "roberta-base",
    "EURO_ENC": "bert-base-multilingual-cased",
}

MAX_TOKENS = 128


@dataclass
class ExportJob:
    corpus: str
    slot: str
    out: str
    encoder_name: str = ""
    encoder_path: str = ""
    pooling: str = "mean"
    max_tokens: int = MAX_TOKENS
    batch_size: int = 16
    corpus_format: str = "jsonl"

    def __post_init__(self):
        if self.slot not in SLOTS:
            raise ValueError(f"slot must be one of {SLOTS}, got {self.slot!r}")
        if self.pooling not in POOLING_FLAGS:
            raise ValueError(f"pooling must be one of {tuple(POOLING_FLAGS)}, got {self.pooling!r}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if not self.encoder_name:
            self.encoder_name = DEFAULT_ENCODERS[self.slot]
        if not self.encoder_path:
            self.encoder_path = self.encoder_name


def _load_encoder(path):
    import torch
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(path)
        model = AutoModel.from_pretrained(path)
    except Exception as exc:
        raise ExportError(f"cannot load encoder {path!r}: {exc}") from exc
    model.eval()
    torch.set_grad_enabled(False)
    return tokenizer, model


def _tokenize_records(tokenizer, ids, texts, max_tokens):
    """Tokenize record by record so a failure can name the culprit."""
    input_ids = []
    attention = []
    for rid, text in zip(ids, texts):
        try:
            enc = tokenizer(
                text,
                padding="max_length",
                truncation=True,
                max_length=max_tokens,
            )
        except Exception as exc:
            raise ExportError(f"tokenizer failed on record {rid!r}: {exc}") from exc
        input_ids.append(enc["input_ids"])
        attention.append(enc["attention_mask"])
    return input_ids, attention


def _pool(hidden, mask, pooling):
    # hidden: batch x seq x dim float32, mask: batch x seq {0,1}
    if pooling == "first_token":
        return hidden[:, 0, :]
    weights = mask[:, :, None].to(hidden.dtype)
    totals = (hidden * weights).sum(dim=1)
    counts = weights.sum(dim=1).clamp(min=1.0)
    return totals / counts


def export(job: ExportJob) -> dict:
    """Run the job; returns {"rows", "dim", "out"} on success."""
    import torch

    ids, texts = read_corpus(job.corpus, job.corpus_format)
    tokenizer, model = _load_encoder(job.encoder_path)
    input_ids, attention = _tokenize_records(tokenizer, ids, texts, job.max_tokens)

    chunks = []
    for start in range(0, len(ids), job.batch_size):
        stop = start + job.batch_size
        batch_ids = torch.tensor(input_ids[start:stop], dtype=torch.long)
        batch_mask = torch.tensor(attention[start:stop], dtype=torch.long)
        out = model(input_ids=batch_ids, attention_mask=batch_mask)
        pooled = _pool(out.last_hidden_state, batch_mask, job.pooling)
        chunks.append(pooled.to(torch.float32).cpu().numpy())

    matrix = np.concatenate(chunks, axis=0)
    if not np.isfinite(matrix).all():
        raise ExportError("encoder produced non-finite values")
    write_ghem(job.out, matrix, ids, job.encoder_name, flags=POOLING_FLAGS[job.pooling])
    return {"rows": matrix.shape[0], "dim": matrix.shape[1], "out": str(job.out)}


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)  # (name, ok, detail)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)


def verify(ghem_path, corpus_path, corpus_format: str = "jsonl") -> VerifyReport:
    """Check an exported file against its corpus, field by field.

    Failures land in the report instead of raising, so one pass covers
    every field of a damaged file.
    """
    ids, _ = read_corpus(corpus_path, corpus_format)
    raw = Path(ghem_path).read_bytes()
    report = VerifyReport()

    if len(raw) < 4 or raw[:4] != b"GHEM":
        report.add("magic", False, "leading bytes are not GHEM")
        return report
    report.add("magic", True)

    try:
        header = parse_header(raw)
    except ExportError as exc:
        report.add("header", False, str(exc))
        return report

    report.add("version", header.version == 1, f"found {header.version}")
    report.add(
        "rows",
        header.rows == len(ids),
        f"file {header.rows}, corpus {len(ids)}",
    )
    want_digest = corpus_digest(ids)
    report.add(
        "digest",
        header.digest == want_digest,
        f"file {header.digest.hex()}, corpus {want_digest.hex()}",
    )
    payload = raw[header.payload_offset :]
    want_len = header.rows * header.dim * 4
    report.add(
        "payload_length",
        len(payload) == want_len,
        f"file {len(payload)} bytes, header promises {want_len}",
    )
    if len(payload) == want_len:
        matrix = np.frombuffer(payload, dtype="<f4")
        report.add("finite", bool(np.isfinite(matrix).all()))
    return report
