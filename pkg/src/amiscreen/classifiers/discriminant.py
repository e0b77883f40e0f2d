"""Gaussian discriminants: LDA (pooled covariance), QDA (per-class),
and a generative classifier with one Gaussian mixture per class.

Covariances use the MLE divisor. LDA shrinkage pulls the pooled
covariance toward a spherical target; 'auto' estimates the intensity by
the Ledoit-Wolf formula on within-class-centered rows.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, SingularCovarianceError
from .base import ClassifierSpec, TrainedClassifier, check_training_data, child_rng

_EIG_NULL = 1e-12
_EM_TOL = 1e-6
_EM_MAX_ITER = 500


def _logsumexp(a: np.ndarray, axis: int = 1) -> np.ndarray:
    peak = a.max(axis=axis, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    return (peak + np.log(np.exp(a - peak).sum(axis=axis, keepdims=True))).squeeze(axis)


def _softmax(a: np.ndarray) -> np.ndarray:
    z = a - a.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _spherical_target(cov: np.ndarray) -> np.ndarray:
    d = cov.shape[0]
    # Floor keeps the target usable when a class is entirely constant.
    return max(np.trace(cov) / d, 1e-9) * np.eye(d)


def _check_not_singular(cov: np.ndarray, label) -> None:
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals[-1] <= 0 or eigvals[0] <= _EIG_NULL * max(eigvals[-1], 1.0):
        raise SingularCovarianceError(
            f"covariance for class {label} is singular; set a regularization "
            "parameter to proceed",
            class_label=label,
        )


def ledoit_wolf_shrinkage(Z: np.ndarray) -> float:
    """Shrinkage intensity toward the spherical target for centered rows Z."""
    n, d = Z.shape
    emp = Z.T @ Z / n
    mu = np.trace(emp) / d
    delta = float(((emp - mu * np.eye(d)) ** 2).sum()) / d
    if delta == 0.0:
        return 0.0
    Z2 = Z ** 2
    beta_hat = float((Z2.T @ Z2 / n - emp ** 2).sum()) / (n * d)
    return float(min(beta_hat, delta) / delta)


class LDAModel(TrainedClassifier):
    def __init__(self, spec, n_features, priors, means, coef, const, projection):
        super().__init__(spec, n_features)
        self.priors = np.asarray(priors, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.coef = np.asarray(coef, dtype=float)  # (2, d): inv(cov) @ mean_k
        self.const = np.asarray(const, dtype=float)  # (2,)
        self.projection = np.asarray(projection, dtype=float)  # inv(cov) @ (mu1 - mu0)

    def _proba(self, X):
        scores = X @ self.coef.T + self.const
        return _softmax(scores)

    def payload(self):
        return {}, {
            "priors": self.priors, "means": self.means, "coef": self.coef,
            "const": self.const, "projection": self.projection,
        }

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(
            spec, n_features, arrays["priors"], arrays["means"], arrays["coef"],
            arrays["const"], arrays["projection"],
        )


def fit_lda(X, y, spec: ClassifierSpec) -> LDAModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    solver = params.get("solver", "lsqr")
    if solver not in ("lsqr", "eigen"):
        raise ValueError(f"unknown solver {solver!r}")
    shrinkage = params.get("shrinkage")

    n, d = X.shape
    classes = (0, 1)
    if any((y == k).sum() == 0 for k in classes):
        raise ValueError("LDA requires rows from both classes")

    priors = np.array([(y == k).mean() for k in classes])
    means = np.vstack([X[y == k].mean(axis=0) for k in classes])
    centered = X - means[y]
    cov = centered.T @ centered / n

    if shrinkage == "auto":
        gamma = ledoit_wolf_shrinkage(centered)
    elif shrinkage is None:
        gamma = 0.0
    else:
        gamma = float(shrinkage)
        if not 0.0 <= gamma <= 1.0:
            raise ValueError("shrinkage must lie in [0, 1]")
    if gamma > 0.0:
        cov = (1.0 - gamma) * cov + gamma * _spherical_target(cov)
    else:
        _check_not_singular(cov, "pooled")

    if solver == "lsqr":
        coef = np.linalg.solve(cov, means.T).T
    else:  # eigen: invert through the spectral decomposition
        eigvals, eigvecs = np.linalg.eigh(cov)
        inv = (eigvecs / eigvals) @ eigvecs.T
        coef = means @ inv
    const = np.array(
        [-0.5 * means[k] @ coef[k] + np.log(priors[k]) for k in classes]
    )
    projection = coef[1] - coef[0]
    return LDAModel(spec, d, priors, means, coef, const, projection)


class QDAModel(TrainedClassifier):
    def __init__(self, spec, n_features, priors, means, covariances):
        super().__init__(spec, n_features)
        self.priors = np.asarray(priors, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.covariances = np.asarray(covariances, dtype=float)  # (2, d, d)

    def _proba(self, X):
        scores = np.empty((X.shape[0], 2))
        for k in range(2):
            sign, logdet = np.linalg.slogdet(self.covariances[k])
            diff = X - self.means[k]
            maha = np.einsum("ij,ij->i", diff, np.linalg.solve(self.covariances[k], diff.T).T)
            scores[:, k] = np.log(self.priors[k]) - 0.5 * (logdet + maha)
        return _softmax(scores)

    def payload(self):
        return {}, {
            "priors": self.priors, "means": self.means, "covariances": self.covariances,
        }

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(spec, n_features, arrays["priors"], arrays["means"], arrays["covariances"])


def fit_qda(X, y, spec: ClassifierSpec) -> QDAModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    reg = float(params.get("reg_param", 0.0))
    if any((y == k).sum() == 0 for k in (0, 1)):
        raise ValueError("QDA requires rows from both classes")

    d = X.shape[1]
    priors = np.array([(y == k).mean() for k in (0, 1)])
    means = np.empty((2, d))
    covs = np.empty((2, d, d))
    for k in (0, 1):
        rows = X[y == k]
        means[k] = rows.mean(axis=0)
        centered = rows - means[k]
        cov = centered.T @ centered / rows.shape[0]
        if reg > 0.0:
            cov = (1.0 - reg) * cov + reg * _spherical_target(cov)
        else:
            _check_not_singular(cov, k)
        covs[k] = cov
    return QDAModel(spec, d, priors, means, covs)


# ---------------------------------------------------------------------------
# Gaussian mixture classifier
# ---------------------------------------------------------------------------

def _component_log_density(X, mean, cov, covariance_type):
    d = X.shape[1]
    diff = X - mean
    if covariance_type in ("full", "tied"):
        chol = np.linalg.cholesky(cov)
        z = np.linalg.solve(chol, diff.T)
        maha = (z ** 2).sum(axis=0)
        logdet = 2.0 * np.log(np.diag(chol)).sum()
    elif covariance_type == "diag":
        maha = ((diff ** 2) / cov).sum(axis=1)
        logdet = float(np.log(cov).sum())
    else:  # spherical
        maha = (diff ** 2).sum(axis=1) / cov
        logdet = d * float(np.log(cov))
    return -0.5 * (d * np.log(2.0 * np.pi) + logdet + maha)


def _kmeanspp_centers(X, k, rng):
    n = X.shape[0]
    centers = [X[int(rng.integers(n))]]
    for _ in range(1, k):
        dist2 = np.min(
            [((X - c) ** 2).sum(axis=1) for c in centers], axis=0
        )
        total = dist2.sum()
        if total <= 0:
            centers.append(X[int(rng.integers(n))])
            continue
        centers.append(X[int(rng.choice(n, p=dist2 / total))])
    return np.vstack(centers)


def _m_step(X, resp, covariance_type, reg):
    n, d = X.shape
    nk = resp.sum(axis=0) + 10.0 * np.finfo(float).eps
    weights = nk / nk.sum()
    means = (resp.T @ X) / nk[:, None]
    k = resp.shape[1]
    if covariance_type == "full":
        covs = np.empty((k, d, d))
        for j in range(k):
            diff = X - means[j]
            covs[j] = (resp[:, j][:, None] * diff).T @ diff / nk[j] + reg * np.eye(d)
    elif covariance_type == "tied":
        cov = np.zeros((d, d))
        for j in range(k):
            diff = X - means[j]
            cov += (resp[:, j][:, None] * diff).T @ diff
        covs = cov / n + reg * np.eye(d)
    elif covariance_type == "diag":
        covs = np.empty((k, d))
        for j in range(k):
            diff = X - means[j]
            covs[j] = (resp[:, j][:, None] * diff ** 2).sum(axis=0) / nk[j] + reg
    else:  # spherical
        covs = np.empty(k)
        for j in range(k):
            diff = X - means[j]
            covs[j] = (resp[:, j][:, None] * diff ** 2).sum() / (nk[j] * d) + reg
    return weights, means, covs


def _mixture_log_components(X, weights, means, covs, covariance_type):
    k = means.shape[0]
    parts = np.empty((X.shape[0], k))
    for j in range(k):
        cov_j = covs if covariance_type == "tied" else covs[j]
        parts[:, j] = np.log(weights[j]) + _component_log_density(
            X, means[j], cov_j, covariance_type
        )
    return parts


def fit_mixture(X, n_components, covariance_type, rng, reg):
    """EM for one Gaussian mixture; returns params and the LL trace."""
    n = X.shape[0]
    k = max(1, min(int(n_components), n))
    centers = _kmeanspp_centers(X, k, rng)
    dist2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    resp = np.zeros((n, k))
    resp[np.arange(n), dist2.argmin(axis=1)] = 1.0

    weights, means, covs = _m_step(X, resp, covariance_type, reg)
    history = []
    previous = -np.inf
    delta = np.inf
    for _ in range(_EM_MAX_ITER):
        parts = _mixture_log_components(X, weights, means, covs, covariance_type)
        ll = float(_logsumexp(parts).mean())
        history.append(ll)
        delta = ll - previous
        if abs(delta) < _EM_TOL:
            return weights, means, covs, history
        previous = ll
        resp = np.exp(parts - _logsumexp(parts)[:, None])
        weights, means, covs = _m_step(X, resp, covariance_type, reg)
    raise ConvergenceError(
        f"EM did not converge in {_EM_MAX_ITER} iterations "
        f"(last log-likelihood delta {delta:.3e})",
        iterations=_EM_MAX_ITER,
        residual=abs(delta),
    )


class GMMModel(TrainedClassifier):
    def __init__(self, spec, n_features, priors, covariance_type, mixtures):
        super().__init__(spec, n_features)
        self.priors = np.asarray(priors, dtype=float)
        self.covariance_type = covariance_type
        self.mixtures = mixtures  # per class: (weights, means, covs)
        self.em_log_likelihoods: dict[int, list[float]] = {}

    def _proba(self, X):
        scores = np.empty((X.shape[0], 2))
        for k in range(2):
            weights, means, covs = self.mixtures[k]
            parts = _mixture_log_components(X, weights, means, covs, self.covariance_type)
            scores[:, k] = np.log(self.priors[k]) + _logsumexp(parts)
        return _softmax(scores)

    def payload(self):
        meta = {"covariance_type": self.covariance_type}
        arrays = {"priors": self.priors}
        for k in range(2):
            weights, means, covs = self.mixtures[k]
            arrays[f"c{k}.weights"] = np.asarray(weights, dtype=float)
            arrays[f"c{k}.means"] = np.asarray(means, dtype=float)
            arrays[f"c{k}.covs"] = np.asarray(covs, dtype=float)
        return meta, arrays

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        mixtures = [
            (arrays[f"c{k}.weights"], arrays[f"c{k}.means"], arrays[f"c{k}.covs"])
            for k in range(2)
        ]
        return cls(spec, n_features, arrays["priors"], meta["covariance_type"], mixtures)


def fit_gmm(X, y, spec: ClassifierSpec) -> GMMModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    n_components = int(params.get("n_components", 1))
    covariance_type = params.get("covariance_type", "full")
    if covariance_type not in ("spherical", "tied", "diag", "full"):
        raise ValueError(f"unknown covariance_type {covariance_type!r}")
    if any((y == k).sum() == 0 for k in (0, 1)):
        raise ValueError("the mixture classifier requires rows from both classes")

    priors = np.array([(y == k).mean() for k in (0, 1)])
    mixtures = []
    histories = {}
    for k in (0, 1):
        rows = X[y == k]
        max_var = float(rows.var(axis=0).max())
        reg = 1e-9 * max_var if max_var > 0 else 1e-9
        rng = child_rng(spec.seed, k)
        weights, means, covs, history = fit_mixture(
            rows, n_components, covariance_type, rng, reg
        )
        mixtures.append((weights, means, covs))
        histories[k] = history
    model = GMMModel(spec, X.shape[1], priors, covariance_type, mixtures)
    model.em_log_likelihoods = histories
    return model
