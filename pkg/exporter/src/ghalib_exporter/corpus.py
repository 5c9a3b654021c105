"""Corpus reading for export jobs.

This mirrors the core pipeline's loading rules so that both sides see
the same record ids in the same order; the GHEM digest only matches
when they agree. Labels are never read here: export is a prediction-
side operation.

Shared rules: JSONL (one object per line, blank lines skipped) or CSV
with id,text columns; languages restricted to en/ur/es/de (missing
means unknown); text NFC-normalized, control characters stripped,
whitespace collapsed, lowercased except for Urdu; rows whose text is
empty after normalization are dropped.
"""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from pathlib import Path

from ghalib_exporter.errors import CorpusError

LANGUAGES = ("en", "ur", "es", "de")

_WS_RUN = re.compile(r"\s+")


def normalize_text(text: str, language: str = "unknown") -> str:
    s = unicodedata.normalize("NFC", text)
    s = "".join(c for c in s if not (unicodedata.category(c) == "Cc" and not c.isspace()))
    s = _WS_RUN.sub(" ", s).strip()
    if language != "ur":
        s = s.lower()
    return unicodedata.normalize("NFC", s)


def _rows_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON at line {lineno}: {exc}") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno} is not a JSON object")
            yield lineno, obj


def _rows_csv(path: Path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "text"} <= set(reader.fieldnames):
            raise CorpusError(f"{path}: CSV header must contain id,text columns")
        for lineno, row in enumerate(reader, start=2):
            yield lineno, {k: v for k, v in row.items() if v not in (None, "")}


def read_corpus(path, format: str = "jsonl") -> tuple[list[str], list[str]]:
    """Return (ids, texts) in file order under the shared loading rules."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"cannot read corpus file: {path}")
    if format == "jsonl":
        rows = _rows_jsonl(path)
    elif format == "csv":
        rows = _rows_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")

    ids: list[str] = []
    texts: list[str] = []
    seen = set()
    for lineno, obj in rows:
        rid = obj.get("id")
        if not isinstance(rid, str) or rid == "":
            raise CorpusError(f"missing or empty id at line {lineno}")
        if rid in seen:
            raise CorpusError(f"duplicate id {rid!r} at line {lineno}")
        seen.add(rid)

        language = obj.get("language")
        if language in (None, ""):
            language = "unknown"
        elif language not in LANGUAGES:
            raise CorpusError(f"unknown language {language!r} at line {lineno}")

        raw_text = obj.get("text")
        if not isinstance(raw_text, str):
            raise CorpusError(f"missing text field at line {lineno}")
        text = normalize_text(raw_text, language)
        if text == "":
            continue  # same drop rule as the core loader

        ids.append(rid)
        texts.append(text)

    if not ids:
        raise CorpusError(f"{path}: empty corpus")
    return ids, texts
