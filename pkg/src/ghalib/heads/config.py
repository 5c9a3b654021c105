"""Training configuration for the gradient-descent heads."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ghalib.corpus import LabelSchema

BATCH_SIZES = (4, 8, 16)


def default_class_weights(schema: LabelSchema) -> tuple[float, ...]:
    """1.0 for NotHope, 1.5 for every hope label."""
    return tuple(1.0 if name == "NotHope" else 1.5 for name in schema.labels)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 2e-5
    epochs: int = 8
    batch_size: int = 16
    warmup_ratio: float = 0.1
    weight_decay: float = 0.01
    input_dropout: float = 0.0  # 0 disables; otherwise in [0.1, 0.3]
    class_weights: tuple[float, ...] = (1.0, 1.5)
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size not in BATCH_SIZES:
            raise ValueError(f"batch_size must be one of {BATCH_SIZES}")
        if not 0.0 <= self.warmup_ratio <= 0.3:
            raise ValueError("warmup_ratio must lie in [0, 0.3]")
        if not 0.0 <= self.weight_decay <= 0.1:
            raise ValueError("weight_decay must lie in [0, 0.1]")
        if self.input_dropout != 0.0 and not 0.1 <= self.input_dropout <= 0.3:
            raise ValueError("input_dropout must be 0 or lie in [0.1, 0.3]")
        if any(w <= 0 for w in self.class_weights):
            raise ValueError("class_weights must be strictly positive")

    def for_schema(self, schema: LabelSchema) -> "TrainConfig":
        """Same config with class weights sized for the schema."""
        if len(self.class_weights) == schema.num_classes:
            return self
        return replace(self, class_weights=default_class_weights(schema))

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "warmup_ratio": self.warmup_ratio,
            "weight_decay": self.weight_decay,
            "input_dropout": self.input_dropout,
            "class_weights": list(self.class_weights),
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "TrainConfig":
        return TrainConfig(
            learning_rate=float(d["learning_rate"]),
            epochs=int(d["epochs"]),
            batch_size=int(d["batch_size"]),
            warmup_ratio=float(d["warmup_ratio"]),
            weight_decay=float(d["weight_decay"]),
            input_dropout=float(d.get("input_dropout", 0.0)),
            class_weights=tuple(d["class_weights"]),
            seed=int(d["seed"]),
        )
