"""Trained head container, probability prediction, and JSON persistence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ghalib.calibrate import ThresholdConfig
from ghalib.corpus import LabelSchema
from ghalib.errors import DataError


@dataclass
class HeadModel:
    kind: str  # logistic | linear_svm | adaboost | gbdt
    schema: LabelSchema
    feature_dim: int
    parameters: dict
    train_config: Optional[dict] = None
    training_log: list = field(default_factory=list)
    threshold: Optional[ThresholdConfig] = None

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "schema": self.schema.to_dict(),
            "feature_dim": self.feature_dim,
            "parameters": _to_plain(self.parameters),
            "train_config": self.train_config,
            "training_log": _to_plain(self.training_log),
        }
        if self.threshold is not None:
            doc["threshold"] = self.threshold.to_dict()
        return doc

    @staticmethod
    def from_dict(d: dict) -> "HeadModel":
        threshold = ThresholdConfig.from_dict(d["threshold"]) if "threshold" in d else None
        return HeadModel(
            kind=d["kind"],
            schema=LabelSchema.from_dict(d["schema"]),
            feature_dim=int(d["feature_dim"]),
            parameters=d["parameters"],
            train_config=d.get("train_config"),
            training_log=list(d.get("training_log", [])),
            threshold=threshold,
        )


def _to_plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    return obj


def save_model(model: HeadModel, path: str | Path, extra: Optional[dict] = None) -> None:
    doc = model.to_dict()
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> HeadModel:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    return HeadModel.from_dict(json.loads(path.read_text(encoding="utf-8")))


def as_dense(X) -> np.ndarray:
    """Accept a FeatureMatrix or a plain array; return float64 rows."""
    data = X.data if hasattr(X, "data") and not isinstance(X, np.ndarray) else X
    return np.asarray(data, dtype=np.float64)


# --- prediction -------------------------------------------------------------


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def tree_apply(node: dict, X: np.ndarray) -> np.ndarray:
    """Evaluate one regression tree (nested dict form) on all rows."""
    out = np.empty(X.shape[0], dtype=np.float64)
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        nd, idx = stack.pop()
        if "value" in nd:
            out[idx] = nd["value"]
            continue
        mask = X[idx, nd["feature"]] <= nd["threshold"]
        stack.append((nd["left"], idx[mask]))
        stack.append((nd["right"], idx[~mask]))
    return out


def predict_scores(model: HeadModel, X) -> np.ndarray:
    """Raw per-class scores (logits / margins / votes) before calibration."""
    data = as_dense(X)
    if data.ndim != 2 or data.shape[1] != model.feature_dim:
        raise DataError(
            f"feature dimension mismatch: model expects {model.feature_dim}, "
            f"got {data.shape[1] if data.ndim == 2 else 'non-matrix'}"
        )
    p = model.parameters
    if model.kind in ("logistic", "linear_svm"):
        W = np.asarray(p["weights"], dtype=np.float64)
        b = np.asarray(p["biases"], dtype=np.float64)
        return data @ W.T + b
    if model.kind == "adaboost":
        k = model.schema.num_classes
        votes = np.zeros((data.shape[0], k), dtype=np.float64)
        for stump in p["stumps"]:
            left = data[:, stump["feature"]] <= stump["threshold"]
            votes[left, stump["left"]] += stump["alpha"]
            votes[~left, stump["right"]] += stump["alpha"]
        return votes
    if model.kind == "gbdt":
        scores = np.tile(np.asarray(p["initial_scores"], dtype=np.float64), (data.shape[0], 1))
        lr = p["learning_rate"]
        for round_trees in p["trees"]:
            for k, tree in enumerate(round_trees):
                scores[:, k] += lr * tree_apply(tree, data)
        return scores
    raise ValueError(f"unknown head kind {model.kind!r}")


def predict_proba(model: HeadModel, X) -> np.ndarray:
    """Class probabilities, rows summing to 1. Dropout never applies here."""
    scores = predict_scores(model, X)
    if model.kind in ("logistic", "gbdt"):
        return softmax(scores)
    if model.kind == "linear_svm":
        cal = model.parameters["calibration"]
        raw = _sigmoid(cal["a"] * scores + cal["b"])
        return raw / raw.sum(axis=1, keepdims=True)
    if model.kind == "adaboost":
        totals = scores.sum(axis=1, keepdims=True)
        uniform = np.full_like(scores, 1.0 / scores.shape[1])
        with np.errstate(invalid="ignore", divide="ignore"):
            shares = np.where(totals > 0, scores / np.where(totals > 0, totals, 1.0), uniform)
        return shares
    raise ValueError(f"unknown head kind {model.kind!r}")


def predict_labels(model: HeadModel, X) -> np.ndarray:
    """Argmax labels; binary models with a calibrated threshold use it on
    the Hope-class probability instead."""
    proba = predict_proba(model, X)
    if model.threshold is not None and model.schema.task == "binary":
        t = model.threshold.threshold
        return (proba[:, 1] >= t).astype(int)
    return proba.argmax(axis=1)


def hope_probability(model: HeadModel, X) -> np.ndarray:
    """P(Hope) for binary models."""
    if model.schema.task != "binary":
        raise DataError("hope probability is defined for binary models only")
    return predict_proba(model, X)[:, 1]
