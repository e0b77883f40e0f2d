"""Gaussian naive Bayes with a variance floor for degenerate columns."""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, TrainedClassifier, check_training_data

VARIANCE_FLOOR_SCALE = 1e-9


class GaussianNBModel(TrainedClassifier):
    def __init__(self, spec, n_features, priors, means, variances):
        super().__init__(spec, n_features)
        self.priors = np.asarray(priors, dtype=float)  # [p(class 0), p(class 1)]
        self.means = np.asarray(means, dtype=float)  # (2, d)
        self.variances = np.asarray(variances, dtype=float)  # (2, d)

    def _proba(self, X):
        log_post = np.empty((X.shape[0], 2))
        for k in range(2):
            if self.priors[k] == 0.0:
                log_post[:, k] = -np.inf
                continue
            var = self.variances[k]
            diff = X - self.means[k]
            log_like = -0.5 * np.sum(np.log(2.0 * np.pi * var) + diff ** 2 / var, axis=1)
            log_post[:, k] = np.log(self.priors[k]) + log_like
        log_post -= log_post.max(axis=1, keepdims=True)
        post = np.exp(log_post)
        return post

    def payload(self):
        return {}, {"priors": self.priors, "means": self.means, "variances": self.variances}

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(spec, n_features, arrays["priors"], arrays["means"], arrays["variances"])


def fit_gaussian_nb(X, y, spec: ClassifierSpec | None = None) -> GaussianNBModel:
    X, y = check_training_data(X, y)
    spec = spec or ClassifierSpec("GNB")
    n, d = X.shape
    priors = np.zeros(2)
    means = np.zeros((2, d))
    variances = np.zeros((2, d))
    for k in range(2):
        rows = X[y == k]
        priors[k] = rows.shape[0] / n
        if rows.shape[0] == 0:
            continue
        means[k] = rows.mean(axis=0)
        variances[k] = rows.var(axis=0)
    max_var = float(variances.max())
    floor = VARIANCE_FLOOR_SCALE * max_var if max_var > 0 else VARIANCE_FLOOR_SCALE
    variances = np.maximum(variances, floor)
    return GaussianNBModel(spec, d, priors, means, variances)
