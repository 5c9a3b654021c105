"""Independent brute-force oracles.

Everything here is written as plainly as possible, favoring loops and dicts
over the vectorized routes the package takes, so a shared bug between oracle
and implementation is unlikely.
"""

from __future__ import annotations

import math
from collections import Counter


def brute_confusion(y_true, y_pred, k):
    cm = [[0] * k for _ in range(k)]
    for t, p in zip(y_true, y_pred):
        cm[t][p] += 1
    return cm


def brute_metrics(y_true, y_pred, k):
    """Accuracy, per-class P/R/F1/support, macro and weighted aggregates."""
    cm = brute_confusion(y_true, y_pred, k)
    n = len(y_true)
    correct = sum(cm[i][i] for i in range(k))
    per_class = []
    for c in range(k):
        tp = cm[c][c]
        fp = sum(cm[r][c] for r in range(k)) - tp
        fn = sum(cm[c][p] for p in range(k)) - tp
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        support = tp + fn
        per_class.append({"precision": precision, "recall": recall, "f1": f1, "support": support})
    macro_p = sum(c["precision"] for c in per_class) / k
    macro_r = sum(c["recall"] for c in per_class) / k
    macro_f1 = sum(c["f1"] for c in per_class) / k
    weighted_f1 = sum(c["f1"] * c["support"] for c in per_class) / n
    return {
        "accuracy": correct / n,
        "per_class": per_class,
        "macro_precision": macro_p,
        "macro_recall": macro_r,
        "macro_f1": macro_f1,
        "weighted_f1": weighted_f1,
    }


def brute_threshold_sweep(proba, y_true, lo=0.3, hi=0.8, step=0.01):
    """Scan the inclusive grid, score binary macro-F1, keep the lowest
    maximizer. Grid built by integer steps to dodge float drift."""
    n_steps = round((hi - lo) / step)
    best_t, best_f1 = None, -1.0
    for i in range(n_steps + 1):
        t = round((lo + i * step) * 1e9) / 1e9
        preds = [1 if p >= t else 0 for p in proba]
        f1 = brute_metrics(y_true, preds, 2)["macro_f1"]
        if f1 > best_f1:
            best_t, best_f1 = t, f1
    return best_t, best_f1


def brute_largest_remainder(total, ratios):
    ideals = [total * r for r in ratios]
    floors = [int(math.floor(x)) for x in ideals]
    short = total - sum(floors)
    # rank by (fractional part desc, position asc); stable because positions differ
    fracs = sorted(range(len(ratios)), key=lambda i: (-(ideals[i] - floors[i]), i))
    for i in fracs[:short]:
        floors[i] += 1
    return tuple(floors)


def fd_gradient(loss_fn, logits, eps=1e-6):
    """Central finite differences of a scalar loss over a logits matrix."""
    rows = len(logits)
    cols = len(logits[0])
    grad = [[0.0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            up = [row[:] for row in logits]
            down = [row[:] for row in logits]
            up[i][j] += eps
            down[i][j] -= eps
            grad[i][j] = (loss_fn(up) - loss_fn(down)) / (2 * eps)
    return grad


def oracle_fnv1a_64(data: bytes) -> int:
    """FNV-1a, written byte-at-a-time from the published constants."""
    h = 14695981039346656037  # 0xcbf29ce484222325
    for b in data:
        h = h ^ b
        h = (h * 1099511628211) % (1 << 64)  # 0x100000001b3
    return h


def oracle_tfidf(texts, dim, lo, hi):
    """Dict-based signed-hash TF-IDF; returns a list of dense rows."""
    def ngrams(text):
        words = text.split()
        out = []
        for n in range(lo, hi + 1):
            for s in range(len(words) - n + 1):
                out.append(" ".join(words[s : s + n]))
        return out

    docs = [ngrams(t) for t in texts]
    df = Counter()
    for grams in docs:
        for g in set(grams):
            df[g] += 1
    n_docs = len(texts)
    idf = {g: math.log((1 + n_docs) / (1 + c)) + 1.0 for g, c in df.items()}

    rows = []
    for grams in docs:
        row = [0.0] * dim
        for g, tf in Counter(grams).items():
            h = oracle_fnv1a_64(g.encode("utf-8"))
            sign = 1.0 if h < (1 << 63) else -1.0
            row[h % dim] += sign * tf * idf[g]
        norm = math.sqrt(sum(v * v for v in row))
        if norm > 0:
            row = [v / norm for v in row]
        rows.append(row)
    return rows
