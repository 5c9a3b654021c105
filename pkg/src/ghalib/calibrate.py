"""Binary decision-threshold calibration on the validation split.

The probability cutoff for the positive (Hope) class is swept over an
inclusive grid, scoring binary macro-F1 at each point; ties go to the
lowest threshold. Multiclass tasks use plain argmax and never enter here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ghalib.errors import DataError
from ghalib.metrics import confusion, report


@dataclass(frozen=True)
class ThresholdConfig:
    threshold: float
    grid_step: float
    objective: str
    objective_value: float

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "grid_step": self.grid_step,
            "objective": self.objective,
            "objective_value": self.objective_value,
        }

    @staticmethod
    def from_dict(d: dict) -> "ThresholdConfig":
        return ThresholdConfig(
            threshold=float(d["threshold"]),
            grid_step=float(d["grid_step"]),
            objective=str(d["objective"]),
            objective_value=float(d["objective_value"]),
        )


def threshold_grid(lo: float = 0.3, hi: float = 0.8, step: float = 0.01) -> list[float]:
    """Inclusive grid built by integer stepping, so points land exactly on
    the two-decimal lattice."""
    scale = 1 / step
    lo_i, hi_i = round(lo * scale), round(hi * scale)
    if hi_i < lo_i:
        raise ValueError(f"empty grid: lo={lo} hi={hi}")
    return [i / scale for i in range(lo_i, hi_i + 1)]


def apply_threshold(proba_hope: Sequence[float], threshold: float) -> list[int]:
    """1 (Hope) iff probability >= threshold; the comparison is inclusive
    everywhere in the pipeline."""
    return [1 if p >= threshold else 0 for p in proba_hope]


def sweep_threshold(
    proba_hope: Sequence[float],
    y_true: Sequence[int],
    lo: float = 0.3,
    hi: float = 0.8,
    step: float = 0.01,
) -> ThresholdConfig:
    """Exhaustively score every grid threshold by binary macro-F1 and return
    the maximizer (lowest threshold on ties)."""
    if len(proba_hope) != len(y_true):
        raise DataError("probability/label length mismatch")
    if any(p < 0 or p > 1 for p in proba_hope):
        raise DataError("probabilities must lie in [0, 1]")
    classes = set(y_true)
    if classes != {0, 1}:
        raise DataError(
            f"threshold sweep needs both classes present, got classes {sorted(classes)}"
        )

    best_t = None
    best_f1 = -1.0
    for t in threshold_grid(lo, hi, step):
        y_pred = apply_threshold(proba_hope, t)
        f1 = report(confusion(y_true, y_pred, 2)).macro_f1
        if f1 > best_f1:
            best_f1 = f1
            best_t = t
    return ThresholdConfig(
        threshold=best_t, grid_step=step, objective="macro_f1", objective_value=best_f1
    )
