"""Linear heads: weighted-softmax logistic regression and a calibrated
one-vs-rest linear SVM.

Both share the same training loop: zero-initialized parameters, mini-batch
gradient descent with linear warmup then linear decay to zero, per-epoch
shuffling from a seed derived from (config.seed, epoch), optional input
dropout during training only, and L2 weight decay on weights but not biases.
"""

from __future__ import annotations

import math

import numpy as np

from ghalib._util import np_rng, py_rng
from ghalib.errors import TrainingError
from ghalib.corpus import LabelSchema
from ghalib.heads.config import TrainConfig
from ghalib.heads.model import HeadModel, as_dense


def weighted_ce_loss(logits, labels, class_weights):
    """Class-weighted cross entropy over a batch.

    Returns (loss, grad) where loss = (1/N) sum_i w[y_i] * (-log softmax_i[y_i])
    and grad has one row per sample: (w[y_i]/N) * (softmax_i - onehot(y_i)).
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    weights = np.asarray(class_weights, dtype=np.float64)
    if logits.ndim != 2:
        raise ValueError("logits must be a 2-d batch")
    n, k = logits.shape
    if n == 0:
        raise ValueError("empty batch")
    if labels.shape != (n,):
        raise ValueError(f"expected {n} labels, got shape {labels.shape}")
    if labels.min() < 0 or labels.max() >= k:
        raise ValueError(f"label out of range for {k} classes")
    if weights.shape != (k,):
        raise ValueError(f"expected {k} class weights, got shape {weights.shape}")

    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_z[:, None]
    rows = np.arange(n)
    w = weights[labels]
    loss = float(-(w * log_probs[rows, labels]).sum() / n)

    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    grad *= (w / n)[:, None]
    return loss, grad


def lr_factor(step: int, total_steps: int, warmup_steps: int) -> float:
    """Linear rise over warmup, then linear decay toward zero."""
    if step < warmup_steps:
        return (step + 1) / warmup_steps
    return (total_steps - step) / max(total_steps - warmup_steps, 1)


def _validate_labels(y: np.ndarray, num_classes: int) -> None:
    if y.ndim != 1 or y.size == 0:
        raise ValueError("labels must be a non-empty 1-d array")
    if y.min() < 0 or y.max() >= num_classes:
        raise ValueError(f"label out of range for {num_classes} classes")


def _descend(X, y, config: TrainConfig, schema: LabelSchema, grad_fn):
    """Shared mini-batch loop. grad_fn(xb, yb, W, b) -> (loss, gW, gb) on the
    data term only; decay is applied here so both heads treat it identically."""
    data = as_dense(X)
    y = np.asarray(y, dtype=np.int64)
    n, dim = data.shape
    k = schema.num_classes
    _validate_labels(y, k)
    if y.shape[0] != n:
        raise ValueError(f"{n} rows but {y.shape[0]} labels")
    if len(config.class_weights) != k:
        raise ValueError(
            f"config carries {len(config.class_weights)} class weights "
            f"for a {k}-class schema"
        )

    W = np.zeros((k, dim), dtype=np.float64)
    b = np.zeros(k, dtype=np.float64)
    steps_per_epoch = math.ceil(n / config.batch_size)
    total_steps = steps_per_epoch * config.epochs
    warmup_steps = int(config.warmup_ratio * total_steps)

    log = []
    step = 0
    for epoch in range(config.epochs):
        order = list(range(n))
        py_rng("batch", config.seed, epoch).shuffle(order)
        drop_rng = np_rng("dropout", config.seed, epoch) if config.input_dropout > 0 else None
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            xb = data[idx]
            yb = y[idx]
            if drop_rng is not None:
                keep = drop_rng.random(xb.shape) >= config.input_dropout
                xb = xb * keep / (1.0 - config.input_dropout)
            loss, grad_w, grad_b = grad_fn(xb, yb, W, b)
            objective = loss + 0.5 * config.weight_decay * float((W * W).sum())
            if not math.isfinite(objective):
                raise TrainingError("loss became non-finite", step=step)
            lr = config.learning_rate * lr_factor(step, total_steps, warmup_steps)
            W -= lr * (grad_w + config.weight_decay * W)
            b -= lr * grad_b
            epoch_loss += objective * len(idx)
            step += 1
        log.append({"epoch": epoch, "loss": epoch_loss / n})
    return W, b, log, dim


def train_logistic(X, y, config: TrainConfig, schema: LabelSchema) -> HeadModel:
    """Weighted-softmax logistic regression head."""
    weights = np.asarray(config.class_weights, dtype=np.float64)

    def grad_fn(xb, yb, W, b):
        logits = xb @ W.T + b
        loss, grad = weighted_ce_loss(logits, yb, weights)
        return loss, grad.T @ xb, grad.sum(axis=0)

    W, b, log, dim = _descend(X, y, config, schema, grad_fn)
    return HeadModel(
        kind="logistic",
        schema=schema,
        feature_dim=dim,
        parameters={"weights": W, "biases": b},
        train_config=config.to_dict(),
        training_log=log,
    )


def train_linear_svm(X, y, config: TrainConfig, schema: LabelSchema) -> HeadModel:
    """One-vs-rest hinge-loss head with a post-hoc sigmoid over margins.

    Each sample's hinge terms are scaled by the weight of its true class, so
    the 1.5x hope weighting shifts the margin exactly as it shifts the
    cross-entropy loss.
    """
    weights = np.asarray(config.class_weights, dtype=np.float64)
    k = schema.num_classes

    def grad_fn(xb, yb, W, b):
        m = xb @ W.T + b
        targets = -np.ones((len(yb), k), dtype=np.float64)
        targets[np.arange(len(yb)), yb] = 1.0
        slack = 1.0 - targets * m
        active = slack > 0
        w = weights[yb][:, None]
        loss = float((w * np.where(active, slack, 0.0)).sum() / len(yb))
        coeff = np.where(active, -w * targets, 0.0) / len(yb)
        return loss, coeff.T @ xb, coeff.sum(axis=0)

    W, b, log, dim = _descend(X, y, config, schema, grad_fn)

    data = as_dense(X)
    y_arr = np.asarray(y, dtype=np.int64)
    margins = data @ W.T + b
    onehot = np.zeros_like(margins)
    onehot[np.arange(len(y_arr)), y_arr] = 1.0
    a, c = fit_sigmoid(margins.ravel(), onehot.ravel())
    return HeadModel(
        kind="linear_svm",
        schema=schema,
        feature_dim=dim,
        parameters={"weights": W, "biases": b, "calibration": {"a": a, "b": c}},
        train_config=config.to_dict(),
        training_log=log,
    )


def _log_sigmoid(z: np.ndarray) -> np.ndarray:
    # log(sigmoid(z)) = -softplus(-z), computed without overflow
    return np.minimum(z, 0.0) - np.log1p(np.exp(-np.abs(z)))


def fit_sigmoid(margins, positives, max_iter: int = 100):
    """Fit p = sigmoid(a*m + b) to binary outcomes by damped Newton steps.

    Targets are smoothed toward the class priors (Platt's correction) so the
    fit stays finite even when the margins separate the data perfectly.
    """
    m = np.asarray(margins, dtype=np.float64)
    pos = np.asarray(positives, dtype=np.float64)
    n_pos = float(pos.sum())
    n_neg = float(len(pos) - n_pos)
    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    t = np.where(pos > 0.5, hi, lo)

    def nll(a, b):
        z = a * m + b
        return float(-(t * _log_sigmoid(z) + (1.0 - t) * _log_sigmoid(-z)).sum())

    a, b = 1.0, 0.0
    current = nll(a, b)
    for _ in range(max_iter):
        z = a * m + b
        p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
        diff = p - t
        g_a = float((diff * m).sum())
        g_b = float(diff.sum())
        if max(abs(g_a), abs(g_b)) < 1e-10:
            break
        h = p * (1.0 - p)
        h_aa = float((h * m * m).sum()) + 1e-12
        h_ab = float((h * m).sum())
        h_bb = float(h.sum()) + 1e-12
        det = h_aa * h_bb - h_ab * h_ab
        if abs(det) < 1e-300:
            break
        step_a = -(h_bb * g_a - h_ab * g_b) / det
        step_b = -(-h_ab * g_a + h_aa * g_b) / det
        scale = 1.0
        moved = False
        for _ in range(30):
            cand = nll(a + scale * step_a, b + scale * step_b)
            if cand <= current + 1e-15:
                a += scale * step_a
                b += scale * step_b
                current = cand
                moved = True
                break
            scale *= 0.5
        if not moved:
            break
    return float(a), float(b)
