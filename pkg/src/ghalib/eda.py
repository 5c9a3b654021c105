"""Corpus analysis: label distribution, per-class length statistics, and
per-class token frequency tables.

Everything operates on normalized record text and aggregates per schema
label, so reports are deterministic functions of the record multiset. Word
counts use whitespace tokenization for every language including Urdu; the
report metadata flags that as approximate. Punctuation is not stripped.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from ghalib.corpus import LabelSchema
from ghalib.errors import DataError

STOPWORD_POLICIES = ("none", "per_language_list")
WORD_TOKENIZATION_NOTE = "whitespace tokens for every language; approximate for ur"


def _require_labels(records) -> None:
    for r in records:
        if r.label is None:
            raise DataError(f"record {r.id!r} has no label")


def class_distribution(records, schema: LabelSchema) -> list[tuple[str, int]]:
    """Per-label counts in schema order; empty classes appear with count 0."""
    _require_labels(records)
    counts = [0] * schema.num_classes
    for r in records:
        counts[r.label] += 1
    return list(zip(schema.labels, counts))


def length_stats(records, schema: LabelSchema) -> dict[str, tuple[float, float]]:
    """Mean character length and mean word count per label.

    Characters count unicode scalar values of the normalized text. Classes
    with no records are absent from the result; the report layer flags them
    instead of inventing zeros.
    """
    _require_labels(records)
    chars = [0] * schema.num_classes
    words = [0] * schema.num_classes
    counts = [0] * schema.num_classes
    for r in records:
        chars[r.label] += len(r.text)
        words[r.label] += len(r.text.split())
        counts[r.label] += 1
    out = {}
    for i, label in enumerate(schema.labels):
        if counts[i]:
            out[label] = (chars[i] / counts[i], words[i] / counts[i])
    return out


def load_stopwords(language: str) -> frozenset[str]:
    """Read the bundled stopword list for a language; empty set if none ships."""
    name = f"{language}.txt"
    root = resources.files("ghalib").joinpath("data", "stopwords", name)
    try:
        text = root.read_text(encoding="utf-8")
    except FileNotFoundError:
        return frozenset()
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def top_tokens(
    records,
    k: int,
    schema: LabelSchema,
    stopword_policy: str = "none",
) -> dict[str, list[tuple[str, int]]]:
    """Top-k tokens per label, sorted by descending count then token.

    stopword_policy "per_language_list" drops each record's tokens that
    appear in the bundled list for that record's language.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if stopword_policy not in STOPWORD_POLICIES:
        raise ValueError(f"unknown stopword policy {stopword_policy!r}")
    _require_labels(records)

    stop_cache: dict[str, frozenset[str]] = {}
    counters = [Counter() for _ in schema.labels]
    for r in records:
        tokens = r.text.split()
        if stopword_policy == "per_language_list":
            if r.language not in stop_cache:
                stop_cache[r.language] = load_stopwords(r.language)
            stops = stop_cache[r.language]
            tokens = [t for t in tokens if t not in stops]
        counters[r.label].update(tokens)

    out = {}
    for i, label in enumerate(schema.labels):
        ranked = sorted(counters[i].items(), key=lambda kv: (-kv[1], kv[0]))
        out[label] = ranked[:k]
    return out


@dataclass
class EdaReport:
    per_class: list[dict]
    language: str
    k: int
    stopword_policy: str = "none"

    def to_dict(self) -> dict:
        return {
            "per_class": self.per_class,
            "language": self.language,
            "k": self.k,
            "stopword_policy": self.stopword_policy,
            "notes": {"word_tokenization": WORD_TOKENIZATION_NOTE},
        }


def build_report(
    records,
    schema: LabelSchema,
    k: int = 10,
    language: str = "all",
    stopword_policy: str = "none",
) -> EdaReport:
    dist = class_distribution(records, schema)
    lengths = length_stats(records, schema)
    tokens = top_tokens(records, k, schema, stopword_policy)

    per_class = []
    for label, count in dist:
        entry: dict = {"label": label, "count": count}
        if label in lengths:
            entry["mean_char_length"] = lengths[label][0]
            entry["mean_word_count"] = lengths[label][1]
            entry["empty"] = False
        else:
            entry["mean_char_length"] = None
            entry["mean_word_count"] = None
            entry["empty"] = True
        entry["top_tokens"] = [[t, c] for t, c in tokens[label]]
        per_class.append(entry)
    return EdaReport(per_class=per_class, language=language, k=k, stopword_policy=stopword_policy)


def write_eda_reports(
    report: EdaReport,
    out_dir,
    extra: Optional[dict] = None,
    comment: Optional[str] = None,
) -> list[Path]:
    """Emit eda.json plus plot-ready CSVs: dist.csv, lengths.csv, and one
    top_tokens_<label>.csv per class. Returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    doc = report.to_dict()
    if extra:
        doc.update(extra)
    json_path = out_dir / "eda.json"
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(json_path)

    def open_csv(path):
        fh = path.open("w", encoding="utf-8", newline="")
        if comment:
            fh.write(f"# {comment}\n")
        return fh

    dist_path = out_dir / "dist.csv"
    with open_csv(dist_path) as fh:
        w = csv.writer(fh)
        w.writerow(["label", "count"])
        for entry in report.per_class:
            w.writerow([entry["label"], entry["count"]])
    written.append(dist_path)

    lengths_path = out_dir / "lengths.csv"
    with open_csv(lengths_path) as fh:
        w = csv.writer(fh)
        w.writerow(["label", "count", "mean_char_length", "mean_word_count"])
        for entry in report.per_class:
            if entry["empty"]:
                continue
            w.writerow(
                [
                    entry["label"],
                    entry["count"],
                    f"{entry['mean_char_length']:.6f}",
                    f"{entry['mean_word_count']:.6f}",
                ]
            )
    written.append(lengths_path)

    for entry in report.per_class:
        path = out_dir / f"top_tokens_{entry['label']}.csv"
        with open_csv(path) as fh:
            w = csv.writer(fh)
            w.writerow(["token", "count"])
            for token, count in entry["top_tokens"]:
                w.writerow([token, count])
        written.append(path)
    return written
