"""k-nearest neighbors under Minkowski distance, brute force.

The ``algorithm`` hyperparameter is accepted and recorded but every lookup
is brute force at this data scale; results are identical across values.
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, TrainedClassifier, check_training_data


class KNNModel(TrainedClassifier):
    def __init__(self, spec, n_features, X_train, y_train, k, weights, p):
        super().__init__(spec, n_features)
        self.X_train = np.asarray(X_train, dtype=float)
        self.y_train = np.asarray(y_train, dtype=int)
        self.k = int(k)
        self.weights = weights
        self.p = int(p)

    def _distances(self, X):
        diff = np.abs(X[:, None, :] - self.X_train[None, :, :])
        if self.p == 1:
            return diff.sum(axis=2)
        return (diff ** self.p).sum(axis=2) ** (1.0 / self.p)

    def _proba(self, X):
        dist = self._distances(X)
        n_train = self.X_train.shape[0]
        # Stable (distance, index) order makes neighbor ties deterministic.
        order = np.lexsort((np.tile(np.arange(n_train), (X.shape[0], 1)), dist), axis=1)
        proba = np.empty((X.shape[0], 2))
        for r in range(X.shape[0]):
            nearest = order[r, : self.k]
            d = dist[r, nearest]
            labels = self.y_train[nearest]
            if self.weights == "distance":
                exact = d == 0.0
                if exact.any():
                    labels = labels[exact]
                    w = np.ones(labels.shape[0])
                else:
                    w = 1.0 / d
            else:
                w = np.ones(self.k)
            pos = float(w[labels == 1].sum())
            total = float(w.sum())
            proba[r] = [(total - pos) / total, pos / total]
        return proba

    def payload(self):
        return (
            {"k": self.k, "weights": self.weights, "p": self.p},
            {"X_train": self.X_train, "y_train": self.y_train.astype(np.int32)},
        )

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(
            spec, n_features, arrays["X_train"], arrays["y_train"],
            meta["k"], meta["weights"], meta["p"],
        )


def fit_knn(X, y, spec: ClassifierSpec) -> KNNModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    k = int(params["n_neighbors"])
    if k < 1:
        raise ValueError("n_neighbors must be positive")
    if k > X.shape[0]:
        raise ValueError(f"n_neighbors={k} exceeds the {X.shape[0]} training rows")
    weights = params.get("weights", "uniform")
    if weights not in ("uniform", "distance"):
        raise ValueError(f"unknown weights {weights!r}")
    p = int(params.get("p", 2))
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    return KNNModel(spec, X.shape[1], X, y, k, weights, p)
