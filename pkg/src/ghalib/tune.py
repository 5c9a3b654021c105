"""Seeded random hyperparameter search maximizing validation macro-F1.

Each trial draws its configuration from a generator derived from (seed,
trial_index), so any trial can be reproduced alone and the study result does
not depend on execution order. The log serializes one trial per line.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from ghalib._util import py_rng

LR_RANGE = (5e-6, 5e-5)
BATCH_CHOICES = (4, 8, 16)
WARMUP_RANGE = (0.0, 0.3)
DECAY_RANGE = (0.0, 0.1)
DROPOUT_RANGE = (0.1, 0.3)
ADABOOST_ROUNDS = (25, 50, 100)
GBDT_ROUNDS = (50, 100, 200)
GBDT_DEPTHS = (2, 3, 4)

SEARCHABLE_HEADS = ("logistic", "linear_svm", "adaboost", "gbdt")


@dataclass(frozen=True)
class SearchSpace:
    """Per-head search dimensions.

    Linear heads draw the five schedule dimensions; the shrinkage of the
    boosted heads is not rate-like in the same sense, so adaboost draws only
    its round count and gbdt draws rounds and depth.
    """

    head: str = "logistic"

    def __post_init__(self):
        if self.head not in SEARCHABLE_HEADS:
            raise ValueError(f"unknown head {self.head!r}")

    def sample(self, seed: int, trial: int) -> dict:
        """Draw one configuration. Dimension order is fixed; never reorder,
        or trial reproducibility breaks."""
        rng = py_rng("trial", seed, trial)
        cfg: dict = {"head": self.head}
        if self.head in ("logistic", "linear_svm"):
            cfg["learning_rate"] = math.exp(
                rng.uniform(math.log(LR_RANGE[0]), math.log(LR_RANGE[1]))
            )
            cfg["batch_size"] = rng.choice(BATCH_CHOICES)
            cfg["warmup_ratio"] = rng.uniform(*WARMUP_RANGE)
            cfg["weight_decay"] = rng.uniform(*DECAY_RANGE)
            cfg["input_dropout"] = rng.uniform(*DROPOUT_RANGE)
        elif self.head == "adaboost":
            cfg["rounds"] = rng.choice(ADABOOST_ROUNDS)
        else:
            cfg["rounds"] = rng.choice(GBDT_ROUNDS)
            cfg["max_depth"] = rng.choice(GBDT_DEPTHS)
        return cfg


@dataclass
class TrialResult:
    trial_index: int
    config: dict
    objective: float  # validation macro-F1, or -inf for an aborted trial
    model: object = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "trial_index": self.trial_index,
            "config": self.config,
            "objective": None if math.isinf(self.objective) else self.objective,
            "error": self.error,
        }

    @staticmethod
    def from_dict(d: dict) -> "TrialResult":
        objective = d.get("objective")
        return TrialResult(
            trial_index=int(d["trial_index"]),
            config=dict(d["config"]),
            objective=float("-inf") if objective is None else float(objective),
            error=d.get("error"),
        )


def random_search(
    space: SearchSpace,
    budget: int = 30,
    seed: int = 0,
    train_fn: Callable[[dict], object] = None,
    eval_fn: Callable[[object], float] = None,
) -> tuple[TrialResult, list[TrialResult]]:
    """Run `budget` independent trials; return (best, all).

    A trial whose training raises is recorded with objective -inf and the
    error text, and the study continues. Ties on the objective resolve to the
    lowest trial index.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if train_fn is None or eval_fn is None:
        raise ValueError("train_fn and eval_fn are required")

    results = []
    for t in range(budget):
        cfg = space.sample(seed, t)
        try:
            model = train_fn(cfg)
            objective = float(eval_fn(model))
            results.append(TrialResult(t, cfg, objective, model=model))
        except Exception as exc:
            results.append(TrialResult(t, cfg, float("-inf"), error=str(exc)))

    best = results[0]
    for r in results[1:]:
        if r.objective > best.objective:
            best = r
    return best, results


def write_study_log(results: list[TrialResult], path, extra: Optional[dict] = None) -> None:
    """One JSON object per line; `extra` fields are merged into every line."""
    lines = []
    for r in results:
        doc = r.to_dict()
        if extra:
            doc.update(extra)
        lines.append(json.dumps(doc, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_study_log(path) -> list[TrialResult]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(TrialResult.from_dict(json.loads(line)))
    return out
