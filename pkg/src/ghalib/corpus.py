"""Corpus ingestion, normalization, and deterministic stratified splits.

Labels follow the four-way hope taxonomy (NotHope, GeneralizedHope,
RealisticHope, UnrealisticHope) with a two-way collapse for the binary
task (NotHope, Hope). Splits are stratified per class using exact
largest-remainder allocation and a seeded shuffle over sorted record ids,
so they are independent of file order.
"""

from __future__ import annotations

import csv
import json
import math
import re
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

from ghalib._util import py_rng
from ghalib.errors import CorpusError, DuplicateIdError, UnknownLabelError

LANGUAGES = ("en", "ur", "es", "de")
SPLITS = ("train", "val", "test")

BINARY_LABELS = ("NotHope", "Hope")
MULTICLASS_LABELS = ("NotHope", "GeneralizedHope", "RealisticHope", "UnrealisticHope")

_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class LabelSchema:
    task: str  # "binary" | "multiclass"
    labels: tuple[str, ...]

    @staticmethod
    def binary() -> "LabelSchema":
        return LabelSchema("binary", BINARY_LABELS)

    @staticmethod
    def multiclass() -> "LabelSchema":
        return LabelSchema("multiclass", MULTICLASS_LABELS)

    @staticmethod
    def for_task(task: str) -> "LabelSchema":
        if task == "binary":
            return LabelSchema.binary()
        if task in ("multiclass", "multi"):
            return LabelSchema.multiclass()
        raise ValueError(f"unknown task {task!r}")

    def __post_init__(self):
        expected = BINARY_LABELS if self.task == "binary" else MULTICLASS_LABELS
        if self.task not in ("binary", "multiclass"):
            raise ValueError(f"unknown task {self.task!r}")
        if tuple(self.labels) != expected:
            raise ValueError(f"{self.task} schema must be {expected}, got {self.labels}")

    @property
    def num_classes(self) -> int:
        return len(self.labels)

    def index_of(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise KeyError(name) from None

    def to_dict(self) -> dict:
        return {"task": self.task, "labels": list(self.labels)}

    @staticmethod
    def from_dict(d: dict) -> "LabelSchema":
        return LabelSchema(d["task"], tuple(d["labels"]))


@dataclass(frozen=True)
class Record:
    id: str
    text: str
    language: str = "unknown"
    label: Optional[int] = None
    split: Optional[str] = None


@dataclass
class LoadReport:
    total_rows: int = 0
    loaded: int = 0
    dropped_empty: int = 0
    dropped_lines: list[int] = field(default_factory=list)


def normalize_text(text: str, language: str = "unknown") -> str:
    """Canonicalize one text: NFC, control chars out, whitespace collapsed,
    trimmed, and lowercased for Latin-script languages (Urdu text keeps its
    characters untouched beyond the shared cleanup).

    Total and idempotent.
    """
    s = unicodedata.normalize("NFC", text)
    s = "".join(c for c in s if not (unicodedata.category(c) == "Cc" and not c.isspace()))
    s = _WS_RUN.sub(" ", s).strip()
    if language != "ur":
        s = s.lower()
    # lowercasing can denormalize rare code points; re-compose so the
    # function stays idempotent
    return unicodedata.normalize("NFC", s)


def _validate_language(value: Optional[str], line: int) -> str:
    if value is None or value == "":
        return "unknown"
    if value not in LANGUAGES:
        raise CorpusError(f"unknown language {value!r} at line {line}")
    return value


def _iter_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
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


def _iter_csv(path: Path) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "text"} <= set(reader.fieldnames):
            raise CorpusError(f"{path}: CSV header must contain id,text columns")
        for lineno, row in enumerate(reader, start=2):
            yield lineno, {k: v for k, v in row.items() if v not in (None, "")}


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    schema: Optional[LabelSchema] = None,
    ignore_labels: bool = False,
) -> tuple[list[Record], LoadReport]:
    """Load and validate a corpus file.

    Returns records in file order plus a LoadReport with drop counts.
    Rows whose text is empty after normalization are dropped and counted;
    unknown labels and duplicate ids abort with the offending line/id.
    With ignore_labels=True the label column is never read (prediction
    inputs).
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"cannot read corpus file: {path}")
    if format == "jsonl":
        rows = _iter_jsonl(path)
    elif format == "csv":
        rows = _iter_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")

    records: list[Record] = []
    report = LoadReport()
    seen: set[str] = set()
    for lineno, obj in rows:
        report.total_rows += 1
        rid = obj.get("id")
        if not isinstance(rid, str) or rid == "":
            raise CorpusError(f"missing or empty id at line {lineno}")
        if rid in seen:
            raise DuplicateIdError(rid, lineno)
        seen.add(rid)

        language = _validate_language(obj.get("language"), lineno)
        raw_text = obj.get("text")
        if not isinstance(raw_text, str):
            raise CorpusError(f"missing text field at line {lineno}")
        text = normalize_text(raw_text, language)
        if text == "":
            report.dropped_empty += 1
            report.dropped_lines.append(lineno)
            continue

        label: Optional[int] = None
        if not ignore_labels and "label" in obj:
            name = obj["label"]
            if schema is None:
                raise CorpusError(f"labeled corpus requires a schema (line {lineno})")
            try:
                label = schema.index_of(str(name))
            except KeyError:
                raise UnknownLabelError(str(name), lineno) from None

        records.append(Record(id=rid, text=text, language=language, label=label))

    if not records:
        raise CorpusError(f"{path}: empty corpus")
    report.loaded = len(records)
    return records, report


# --- stratified splitting -------------------------------------------------


@dataclass
class SplitPlan:
    ratios: tuple[float, float, float]
    seed: int
    assignment: dict[str, str]
    degenerate_classes: list[int] = field(default_factory=list)

    def ids_for(self, split: str) -> list[str]:
        return [rid for rid, s in self.assignment.items() if s == split]

    def to_dict(self) -> dict:
        return {
            "ratios": list(self.ratios),
            "seed": self.seed,
            "assignment": dict(self.assignment),
            "degenerate_classes": list(self.degenerate_classes),
        }

    @staticmethod
    def from_dict(d: dict) -> "SplitPlan":
        return SplitPlan(
            ratios=tuple(d["ratios"]),
            seed=int(d["seed"]),
            assignment=dict(d["assignment"]),
            degenerate_classes=list(d.get("degenerate_classes", [])),
        )

    def save(self, path: str | Path, extra: Optional[dict] = None) -> None:
        doc = self.to_dict()
        if extra:
            doc.update(extra)
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "SplitPlan":
        return SplitPlan.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def largest_remainder_counts(total: int, ratios: tuple[float, float, float]) -> tuple[int, ...]:
    """Apportion ``total`` units over the splits: floor of each ideal share,
    leftovers by descending fractional part, ties in split order."""
    ideals = [total * r for r in ratios]
    floors = [math.floor(x) for x in ideals]
    leftover = total - sum(floors)
    order = sorted(range(len(ratios)), key=lambda i: (-(ideals[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    return tuple(floors)


def stratified_split(
    records: list[Record],
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15),
    seed: int = 0,
) -> SplitPlan:
    """Assign every record to train/val/test, stratified per label class.

    Per class, split sizes follow the exact largest-remainder allocation of
    the class total; membership comes from shuffling the class's sorted ids
    with a generator seeded by (seed, class index). Classes with fewer
    records than splits go wholly to train and are flagged.
    """
    if abs(sum(ratios) - 1.0) > 1e-12:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    if any(r < 0 for r in ratios):
        raise ValueError(f"ratios must be non-negative, got {ratios}")

    by_class: dict[int, list[str]] = {}
    for rec in records:
        if rec.label is None:
            raise CorpusError(f"record {rec.id!r} is unlabeled; stratified split needs labels")
        by_class.setdefault(rec.label, []).append(rec.id)

    assignment: dict[str, str] = {}
    degenerate: list[int] = []
    for cls in sorted(by_class):
        ids = sorted(by_class[cls])
        if len(ids) < len(SPLITS):
            degenerate.append(cls)
            for rid in ids:
                assignment[rid] = "train"
            continue
        counts = largest_remainder_counts(len(ids), ratios)
        py_rng("split", seed, cls).shuffle(ids)
        start = 0
        for split_name, n in zip(SPLITS, counts):
            for rid in ids[start : start + n]:
                assignment[rid] = split_name
            start += n

    # keep the persisted map in a canonical order for byte-identical output
    ordered = {rid: assignment[rid] for rid in sorted(assignment)}
    return SplitPlan(ratios=tuple(ratios), seed=seed, assignment=ordered, degenerate_classes=degenerate)


def apply_split(records: list[Record], plan: SplitPlan) -> list[Record]:
    """Return records with their split assignment filled in from the plan."""
    out = []
    for rec in records:
        split = plan.assignment.get(rec.id)
        out.append(replace(rec, split=split))
    return out
