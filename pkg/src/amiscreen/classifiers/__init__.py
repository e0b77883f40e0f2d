"""Eleven trainable classifier families behind one fit/predict surface."""

from __future__ import annotations

import numpy as np

from .base import (
    DEFAULT_HYPERPARAMETERS,
    FAMILIES,
    HYPERPARAMETER_VOCABULARY,
    ClassifierSpec,
    TrainedClassifier,
    child_rng,
    default_spec,
)
from .boosting import AdaBoostModel, GradientBoostingModel, fit_adaboost, fit_gradient_boosting
from .discriminant import GMMModel, LDAModel, QDAModel, fit_gmm, fit_lda, fit_qda
from .forest import RandomForestModel, fit_random_forest
from .logistic import LogisticModel, fit_logistic_regression, penalized_loss
from .naive_bayes import GaussianNBModel, fit_gaussian_nb
from .neighbors import KNNModel, fit_knn
from .svm import SVMModel, fit_svm, kkt_violations
from .tree import DecisionTreeModel, fit_decision_tree

_FITTERS = {
    "LR": fit_logistic_regression,
    "GNB": fit_gaussian_nb,
    "DT": fit_decision_tree,
    "RF": fit_random_forest,
    "SVM": fit_svm,
    "KNN": fit_knn,
    "GB": fit_gradient_boosting,
    "AB": fit_adaboost,
    "GMM": fit_gmm,
    "LDA": fit_lda,
    "QDA": fit_qda,
}

MODEL_CLASSES: dict[str, type[TrainedClassifier]] = {
    "LR": LogisticModel,
    "GNB": GaussianNBModel,
    "DT": DecisionTreeModel,
    "RF": RandomForestModel,
    "SVM": SVMModel,
    "KNN": KNNModel,
    "GB": GradientBoostingModel,
    "AB": AdaBoostModel,
    "GMM": GMMModel,
    "LDA": LDAModel,
    "QDA": QDAModel,
}


def fit(X, y, spec: ClassifierSpec) -> TrainedClassifier:
    """Train a classifier of the spec's family on encoded, scaled features."""
    return _FITTERS[spec.family](X, y, spec)


def predict(model: TrainedClassifier, X) -> np.ndarray:
    return model.predict(X)


def predict_proba(model: TrainedClassifier, X) -> np.ndarray:
    return model.predict_proba(X)


__all__ = [
    "FAMILIES",
    "HYPERPARAMETER_VOCABULARY",
    "DEFAULT_HYPERPARAMETERS",
    "ClassifierSpec",
    "TrainedClassifier",
    "MODEL_CLASSES",
    "child_rng",
    "default_spec",
    "fit",
    "predict",
    "predict_proba",
    "fit_logistic_regression",
    "fit_gaussian_nb",
    "fit_decision_tree",
    "fit_random_forest",
    "fit_svm",
    "fit_knn",
    "fit_gradient_boosting",
    "fit_adaboost",
    "fit_gmm",
    "fit_lda",
    "fit_qda",
    "penalized_loss",
    "kkt_violations",
]
