"""Boosted heads: multiclass SAMME over decision stumps, and one-vs-rest
gradient-boosted regression trees on the multiclass logistic loss.

Both trainers are fully deterministic: splits come from exhaustive scans in
feature order with first-best tie-breaking, and no random number is drawn.
The seed arguments exist for signature uniformity with the other heads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ghalib.corpus import LabelSchema
from ghalib.heads.model import HeadModel, as_dense, softmax, tree_apply

ALPHA_CAP = math.log(1e12)


def _check_labels(y: np.ndarray, num_classes: int) -> None:
    if y.ndim != 1 or y.size == 0:
        raise ValueError("labels must be a non-empty 1-d array")
    if y.min() < 0 or y.max() >= num_classes:
        raise ValueError(f"label out of range for {num_classes} classes")


# --- AdaBoost ----------------------------------------------------------------


def _best_stump(data: np.ndarray, class_weight: np.ndarray):
    """Exhaustive weighted-error scan over every feature and every midpoint
    between distinct sorted values. class_weight is n x k, one-hot scaled by
    the current sample weights. Returns None when no feature has two distinct
    values. Ties resolve to the earliest feature, then the lowest cut."""
    n, dim = data.shape
    total = class_weight.sum(axis=0)
    total_w = float(total.sum())

    order = np.argsort(data, axis=0, kind="stable")
    sorted_vals = np.take_along_axis(data, order, axis=0)
    # prefix[i, j, :] = class-weight mass of the i+1 smallest rows of feature j
    prefix = np.cumsum(class_weight[order], axis=0)

    left_best = prefix[:-1].max(axis=2)
    right_best = (total[None, None, :] - prefix[:-1]).max(axis=2)
    errs = total_w - left_best - right_best
    errs[sorted_vals[:-1] == sorted_vals[1:]] = np.inf

    flat = errs.T.ravel()
    at = int(np.argmin(flat))
    if not np.isfinite(flat[at]):
        return None
    feature, cut = divmod(at, n - 1)
    threshold = float((sorted_vals[cut, feature] + sorted_vals[cut + 1, feature]) / 2.0)
    left_cls = int(np.argmax(prefix[cut, feature]))
    right_cls = int(np.argmax(total - prefix[cut, feature]))
    err = max(float(flat[at]), 0.0)
    return err, feature, threshold, left_cls, right_cls


def train_adaboost(X, y, rounds: int, schema: LabelSchema, seed: int = 0) -> HeadModel:
    """SAMME boosting of depth-1 stumps.

    A zero-error stump is kept with its vote capped at ln(1e12) + ln(K-1) and
    boosting stops; a stump no better than chance (err >= 1 - 1/K) stops the
    loop without being kept.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    data = as_dense(X)
    y = np.asarray(y, dtype=np.int64)
    k = schema.num_classes
    _check_labels(y, k)
    if y.shape[0] != data.shape[0]:
        raise ValueError(f"{data.shape[0]} rows but {y.shape[0]} labels")
    if np.unique(y).size < 2:
        raise ValueError("training data must contain at least two classes")

    n = data.shape[0]
    onehot = np.zeros((n, k), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0
    w = np.full(n, 1.0 / n)

    stumps = []
    log = []
    for r in range(rounds):
        found = _best_stump(data, onehot * w[:, None])
        if found is None:
            break
        err, feature, threshold, left_cls, right_cls = found
        if err >= 1.0 - 1.0 / k:
            break
        if err == 0.0:
            alpha = ALPHA_CAP + math.log(k - 1)
        else:
            alpha = math.log((1.0 - err) / err) + math.log(k - 1)
        stumps.append(
            {
                "feature": int(feature),
                "threshold": threshold,
                "left": left_cls,
                "right": right_cls,
                "alpha": alpha,
            }
        )
        log.append({"round": r, "error": err, "alpha": alpha})
        if err == 0.0:
            break
        pred = np.where(data[:, feature] <= threshold, left_cls, right_cls)
        w = w * np.exp(alpha * (pred != y))
        w = w / w.sum()

    return HeadModel(
        kind="adaboost",
        schema=schema,
        feature_dim=data.shape[1],
        parameters={"stumps": stumps},
        train_config={"rounds": rounds, "seed": seed},
        training_log=log,
    )


# --- gradient boosting --------------------------------------------------------


@dataclass(frozen=True)
class GbdtConfig:
    rounds: int = 100
    max_depth: int = 3
    min_leaf: int = 1
    learning_rate: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "GbdtConfig":
        cfg = GbdtConfig()
        known = {f: d[f] for f in cfg.to_dict() if f in d}
        return replace(cfg, **known)


HESSIAN_FLOOR = 1e-12
MIN_GAIN = 1e-12


def _best_split(data: np.ndarray, residual: np.ndarray, min_leaf: int):
    """Exact greedy variance-reduction scan. Returns (feature, threshold) or
    None when the node is degenerate: constant residuals (no split can move
    the loss) or no cut satisfying min_leaf. A zero-gain split of non-constant
    residuals is kept, since deeper levels can still split profitably (the
    XOR pattern needs this)."""
    n = data.shape[0]
    if n < 2 * min_leaf:
        return None
    total = float(residual.sum())
    parent_sse = float((residual * residual).sum()) - total * total / n
    if parent_sse <= MIN_GAIN:
        return None

    order = np.argsort(data, axis=0, kind="stable")
    sorted_vals = np.take_along_axis(data, order, axis=0)
    prefix = np.cumsum(residual[order], axis=0)

    sizes = np.arange(1, n, dtype=np.float64)
    left_sum = prefix[:-1]
    right_sum = total - left_sum
    score = left_sum**2 / sizes[:, None] + right_sum**2 / (n - sizes)[:, None]

    invalid = sorted_vals[:-1] == sorted_vals[1:]
    if min_leaf > 1:
        invalid |= (sizes < min_leaf)[:, None] | (sizes > n - min_leaf)[:, None]
    score[invalid] = -np.inf

    flat = score.T.ravel()
    at = int(np.argmax(flat))
    if not np.isfinite(flat[at]):
        return None
    feature, cut = divmod(at, n - 1)
    threshold = float((sorted_vals[cut, feature] + sorted_vals[cut + 1, feature]) / 2.0)
    return feature, threshold


def _build_tree(data, idx, residual, hessian, depth, cfg: GbdtConfig) -> dict:
    def leaf():
        num = float(residual[idx].sum())
        den = max(float(hessian[idx].sum()), HESSIAN_FLOOR)
        return {"value": num / den}

    if depth >= cfg.max_depth or idx.size < 2 * cfg.min_leaf:
        return leaf()
    found = _best_split(data[idx], residual[idx], cfg.min_leaf)
    if found is None:
        return leaf()
    feature, threshold = found
    mask = data[idx, feature] <= threshold
    return {
        "feature": int(feature),
        "threshold": threshold,
        "left": _build_tree(data, idx[mask], residual, hessian, depth + 1, cfg),
        "right": _build_tree(data, idx[~mask], residual, hessian, depth + 1, cfg),
    }


def train_gbdt(X, y, config: GbdtConfig, schema: LabelSchema) -> HeadModel:
    """One-vs-rest boosted trees on the multiclass logistic loss.

    Scores start at the log class priors; every round fits one tree per class
    to the residual y_k - p_k and adds it scaled by the learning rate, with
    leaf values from the one-step Newton estimate."""
    data = as_dense(X)
    y = np.asarray(y, dtype=np.int64)
    k = schema.num_classes
    _check_labels(y, k)
    if y.shape[0] != data.shape[0]:
        raise ValueError(f"{data.shape[0]} rows but {y.shape[0]} labels")

    n = data.shape[0]
    onehot = np.zeros((n, k), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0
    priors = np.maximum(np.bincount(y, minlength=k) / n, 1e-12)
    initial = np.log(priors)

    scores = np.tile(initial, (n, 1))
    all_idx = np.arange(n)
    trees = []
    log = []
    for r in range(config.rounds):
        proba = softmax(scores)
        round_trees = []
        for cls in range(k):
            residual = onehot[:, cls] - proba[:, cls]
            hessian = proba[:, cls] * (1.0 - proba[:, cls])
            tree = _build_tree(data, all_idx, residual, hessian, 0, config)
            round_trees.append(tree)
            scores[:, cls] += config.learning_rate * tree_apply(tree, data)
        trees.append(round_trees)
        loss = float(-np.log(softmax(scores)[all_idx, y] + 1e-300).mean())
        log.append({"round": r, "loss": loss})

    return HeadModel(
        kind="gbdt",
        schema=schema,
        feature_dim=data.shape[1],
        parameters={
            "initial_scores": initial,
            "learning_rate": config.learning_rate,
            "trees": trees,
        },
        train_config=config.to_dict(),
        training_log=log,
    )
