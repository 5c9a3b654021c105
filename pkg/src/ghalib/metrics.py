"""Evaluation arithmetic: confusion matrices and P/R/F1 aggregates.

Convention: confusion rows are the true class, columns the predicted
class, in schema label order. Any zero denominator makes the affected
quantity 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from ghalib.errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: tuple[tuple[int, ...], ...]  # rows = true, cols = predicted

    @property
    def num_classes(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def row_sum(self, k: int) -> int:
        return sum(self.counts[k])

    def col_sum(self, k: int) -> int:
        return sum(row[k] for row in self.counts)


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    per_class: tuple[ClassMetrics, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_f1: float
    zero_support_classes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": [
                {
                    "label": c.label,
                    "precision": c.precision,
                    "recall": c.recall,
                    "f1": c.f1,
                    "support": c.support,
                }
                for c in self.per_class
            ],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "zero_support_classes": list(self.zero_support_classes),
        }


def confusion(y_true: Sequence[int], y_pred: Sequence[int], num_classes: int) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise DataError(f"label length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    counts = [[0] * num_classes for _ in range(num_classes)]
    for t, p in zip(y_true, y_pred):
        if not (0 <= t < num_classes) or not (0 <= p < num_classes):
            raise DataError(f"label out of range [0, {num_classes}): true={t} pred={p}")
        counts[t][p] += 1
    return ConfusionMatrix(tuple(tuple(row) for row in counts))


def _safe_div(num: float, den: float) -> float:
    return num / den if den != 0 else 0.0


def report(cm: ConfusionMatrix, labels: Optional[Sequence[str]] = None) -> MetricsReport:
    """Compute accuracy, per-class P/R/F1, and macro/weighted aggregates."""
    n = cm.total
    if n == 0:
        raise DataError("empty confusion matrix")
    if labels is None:
        labels = [f"class_{k}" for k in range(cm.num_classes)]

    per_class = []
    zero_support = []
    for k in range(cm.num_classes):
        tp = cm.counts[k][k]
        support = cm.row_sum(k)
        precision = _safe_div(tp, cm.col_sum(k))
        recall = _safe_div(tp, support)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class.append(ClassMetrics(labels[k], precision, recall, f1, support))
        if support == 0:
            zero_support.append(labels[k])

    k_count = cm.num_classes
    return MetricsReport(
        accuracy=sum(cm.counts[k][k] for k in range(k_count)) / n,
        per_class=tuple(per_class),
        macro_precision=sum(c.precision for c in per_class) / k_count,
        macro_recall=sum(c.recall for c in per_class) / k_count,
        macro_f1=sum(c.f1 for c in per_class) / k_count,
        weighted_f1=sum(c.support * c.f1 for c in per_class) / n,
        zero_support_classes=tuple(zero_support),
    )


def macro_f1(y_true: Sequence[int], y_pred: Sequence[int], num_classes: int) -> float:
    return report(confusion(y_true, y_pred, num_classes)).macro_f1


# --- emission ---------------------------------------------------------------


def report_to_json(rep: MetricsReport, extra: Optional[dict] = None) -> str:
    doc = rep.to_dict()
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_to_text(rep: MetricsReport) -> str:
    """Aligned plain-text metrics table."""
    width = max(len(c.label) for c in rep.per_class)
    width = max(width, len("weighted"))
    lines = [f"{'':{width}}  precision  recall      f1  support"]
    for c in rep.per_class:
        lines.append(
            f"{c.label:{width}}  {c.precision:9.4f}  {c.recall:6.4f}  {c.f1:6.4f}  {c.support:7d}"
        )
    total = sum(c.support for c in rep.per_class)
    lines.append("")
    lines.append(f"{'accuracy':{width}}  {rep.accuracy:9.4f}")
    lines.append(
        f"{'macro':{width}}  {rep.macro_precision:9.4f}  {rep.macro_recall:6.4f}  "
        f"{rep.macro_f1:6.4f}  {total:7d}"
    )
    lines.append(f"{'weighted':{width}}  {'':9}  {'':6}  {rep.weighted_f1:6.4f}  {total:7d}")
    if rep.zero_support_classes:
        lines.append("")
        lines.append("zero-support classes: " + ", ".join(rep.zero_support_classes))
    return "\n".join(lines) + "\n"


def confusion_to_csv(
    cm: ConfusionMatrix, labels: Sequence[str], comment: Optional[str] = None
) -> str:
    """Confusion matrix as CSV, rows = true class, columns = predicted."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append("true\\pred," + ",".join(labels))
    for k, row in enumerate(cm.counts):
        lines.append(labels[k] + "," + ",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def write_report(
    out_dir: str | Path,
    rep: MetricsReport,
    cm: ConfusionMatrix,
    labels: Sequence[str],
    extra: Optional[dict] = None,
    comment: Optional[str] = None,
) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.json").write_text(report_to_json(rep, extra), encoding="utf-8")
    (out / "metrics.txt").write_text(report_to_text(rep), encoding="utf-8")
    (out / "confusion.csv").write_text(confusion_to_csv(cm, labels, comment), encoding="utf-8")
