"""Uniform train/predict surface shared by all classifier families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

FAMILIES = ("LR", "GNB", "DT", "RF", "SVM", "KNN", "GB", "AB", "GMM", "LDA", "QDA")

# Accepted hyperparameter names per family (the tuning-grid vocabulary).
HYPERPARAMETER_VOCABULARY: dict[str, frozenset[str]] = {
    "LR": frozenset(
        {
            "penalty", "C", "dual", "tol", "fit_intercept", "intercept_scaling",
            "class_weight", "solver", "max_iter", "l1_ratio",
        }
    ),
    "GNB": frozenset(),
    "DT": frozenset(
        {"criterion", "max_depth", "min_samples_split", "min_samples_leaf", "max_features"}
    ),
    "RF": frozenset(
        {
            "n_estimators", "criterion", "max_depth", "min_samples_split",
            "min_samples_leaf", "max_features", "ccp_alpha",
        }
    ),
    "SVM": frozenset({"C", "kernel", "gamma"}),
    "KNN": frozenset({"n_neighbors", "weights", "algorithm", "p"}),
    "GB": frozenset(
        {
            "learning_rate", "n_estimators", "max_depth", "subsample",
            "min_samples_split", "min_samples_leaf",
        }
    ),
    "AB": frozenset({"n_estimators", "learning_rate", "algorithm"}),
    "GMM": frozenset({"n_components", "covariance_type"}),
    "LDA": frozenset({"solver", "shrinkage", "n_components"}),
    "QDA": frozenset({"reg_param"}),
}

# Production defaults: the tuned configuration each family ships with.
DEFAULT_HYPERPARAMETERS: dict[str, dict[str, Any]] = {
    "LR": {
        "penalty": "l1", "C": 0.1, "dual": False, "tol": 0.01, "fit_intercept": True,
        "intercept_scaling": 1, "class_weight": "balanced", "solver": "saga",
        "max_iter": 5000, "l1_ratio": None,
    },
    "GNB": {},
    "DT": {
        "criterion": "gini", "max_depth": 5, "min_samples_split": 2,
        "min_samples_leaf": 1, "max_features": None,
    },
    "RF": {
        "n_estimators": 200, "criterion": "gini", "max_depth": 10,
        "min_samples_split": 5, "min_samples_leaf": 4, "max_features": "log2",
        "ccp_alpha": 0.0,
    },
    "SVM": {"C": 10.0, "kernel": "rbf", "gamma": "scale"},
    "KNN": {"n_neighbors": 7, "weights": "distance", "algorithm": "ball_tree", "p": 1},
    "GB": {
        "learning_rate": 0.01, "n_estimators": 100, "max_depth": 3, "subsample": 0.8,
        "min_samples_split": 4, "min_samples_leaf": 3,
    },
    "AB": {"n_estimators": 50, "learning_rate": 1.0, "algorithm": "SAMME"},
    "GMM": {"n_components": 2, "covariance_type": "diag"},
    "LDA": {"solver": "lsqr", "shrinkage": None, "n_components": None},
    "QDA": {"reg_param": 0.1},
}


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier family plus its hyperparameters and seed."""

    family: str
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        allowed = HYPERPARAMETER_VOCABULARY[self.family]
        unknown = sorted(set(self.hyperparameters) - allowed)
        if unknown:
            raise ValueError(
                f"hyperparameters {unknown} are not in the {self.family} grid vocabulary"
            )
        object.__setattr__(self, "hyperparameters", dict(self.hyperparameters))

    def resolved(self) -> dict[str, Any]:
        """Hyperparameters with family defaults filled in."""
        merged = dict(DEFAULT_HYPERPARAMETERS[self.family])
        merged.update(self.hyperparameters)
        return merged


def default_spec(family: str, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec(family, dict(DEFAULT_HYPERPARAMETERS[family]), seed)


def child_rng(seed: int, *streams: int) -> np.random.Generator:
    """Deterministic per-component generator derived from (seed, streams)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(s) & 0xFFFFFFFF for s in streams]]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def check_matrix(X, n_features: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(0, n_features or 0) if X.size == 0 else X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if n_features is not None and X.shape[1] != n_features and X.shape[0] > 0:
        raise ValueError(f"X has {X.shape[1]} columns, model was trained with {n_features}")
    return X


def check_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("y must contain only 0/1 labels")
    return X, y


class TrainedClassifier:
    """Fitted model exposing hard labels and normalized per-class probabilities.

    ``predict`` is the argmax of ``predict_proba`` for every family; rows of
    the probability matrix sum to 1.
    """

    def __init__(self, spec: ClassifierSpec, n_features: int):
        self.spec = spec
        self.n_features = n_features

    def _proba(self, X: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def predict_proba(self, X) -> np.ndarray:
        X = check_matrix(X, self.n_features)
        if X.shape[0] == 0:
            return np.empty((0, 2), dtype=float)
        proba = np.asarray(self._proba(X), dtype=float)
        proba = np.clip(proba, 0.0, None)
        totals = proba.sum(axis=1, keepdims=True)
        totals[totals == 0.0] = 1.0
        return proba / totals

    def predict(self, X) -> np.ndarray:
        proba = self.predict_proba(X)
        if proba.shape[0] == 0:
            return np.empty(0, dtype=int)
        return np.argmax(proba, axis=1)

    # Serialization hooks implemented per family.
    def payload(self) -> tuple[dict, dict[str, np.ndarray]]:  # pragma: no cover - abstract
        raise NotImplementedError

    @classmethod
    def from_payload(
        cls, spec: ClassifierSpec, n_features: int, meta: dict, arrays: dict[str, np.ndarray]
    ) -> "TrainedClassifier":  # pragma: no cover - abstract
        raise NotImplementedError
