"""Classifier heads over frozen feature matrices."""

from ghalib.heads.config import TrainConfig, default_class_weights
from ghalib.heads.model import HeadModel, predict_proba, load_model, save_model
from ghalib.heads.linear import weighted_ce_loss, train_logistic, train_linear_svm
from ghalib.heads.boosting import train_adaboost, train_gbdt

HEAD_KINDS = ("logistic", "linear_svm", "adaboost", "gbdt")

__all__ = [
    "TrainConfig",
    "default_class_weights",
    "HeadModel",
    "predict_proba",
    "load_model",
    "save_model",
    "weighted_ce_loss",
    "train_logistic",
    "train_linear_svm",
    "train_adaboost",
    "train_gbdt",
    "HEAD_KINDS",
]
