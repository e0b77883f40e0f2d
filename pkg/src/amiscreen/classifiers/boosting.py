"""Stagewise boosting: logistic-loss gradient boosting and AdaBoost stumps."""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, TrainedClassifier, check_training_data, child_rng
from .logistic import sigmoid
from .tree import Tree, grow_tree

ALPHA_CAP = float(np.log(1e10))
_PROBA_CLIP = 1e-15


def _trees_payload(trees: list[Tree], prefix: str) -> dict[str, np.ndarray]:
    arrays = {}
    for i, t in enumerate(trees):
        arrays[f"{prefix}{i}.feature"] = t.feature
        arrays[f"{prefix}{i}.threshold"] = t.threshold
        arrays[f"{prefix}{i}.left"] = t.left
        arrays[f"{prefix}{i}.right"] = t.right
        arrays[f"{prefix}{i}.value"] = t.value
        arrays[f"{prefix}{i}.n_samples"] = t.n_samples
    return arrays


def _trees_from_payload(arrays: dict[str, np.ndarray], prefix: str, count: int) -> list[Tree]:
    trees = []
    for i in range(count):
        t = Tree()
        t.feature = arrays[f"{prefix}{i}.feature"].astype(np.int32)
        t.threshold = arrays[f"{prefix}{i}.threshold"].astype(float)
        t.left = arrays[f"{prefix}{i}.left"].astype(np.int32)
        t.right = arrays[f"{prefix}{i}.right"].astype(np.int32)
        t.value = arrays[f"{prefix}{i}.value"].astype(float)
        t.n_samples = arrays[f"{prefix}{i}.n_samples"].astype(np.int32)
        trees.append(t)
    return trees


def logistic_loss(y: np.ndarray, decision: np.ndarray) -> float:
    t = np.where(y == 1, 1.0, -1.0)
    return float(np.mean(np.logaddexp(0.0, -t * decision)))


class GradientBoostingModel(TrainedClassifier):
    def __init__(self, spec, n_features, base_score, stages, learning_rate, train_losses=None):
        super().__init__(spec, n_features)
        self.base_score = float(base_score)
        self.stages = stages  # regression trees on the logistic negative gradient
        self.learning_rate = float(learning_rate)
        self.train_losses = list(train_losses or [])

    def decision_function(self, X, n_stages: int | None = None) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.full(X.shape[0], self.base_score)
        stages = self.stages if n_stages is None else self.stages[:n_stages]
        for tree in stages:
            out += self.learning_rate * tree.leaf_values(X)[:, 0]
        return out

    def _proba(self, X):
        p1 = sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def payload(self):
        meta = {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "n_stages": len(self.stages),
            "train_losses": self.train_losses,
        }
        return meta, _trees_payload(self.stages, "s")

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        stages = _trees_from_payload(arrays, "s", int(meta["n_stages"]))
        return cls(
            spec, n_features, meta["base_score"], stages, meta["learning_rate"],
            meta.get("train_losses"),
        )


def fit_gradient_boosting(X, y, spec: ClassifierSpec) -> GradientBoostingModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    lr = float(params["learning_rate"])
    n_stages = int(params["n_estimators"])
    subsample = float(params.get("subsample", 1.0))

    n = X.shape[0]
    p_bar = float(np.clip(y.mean(), _PROBA_CLIP, 1.0 - _PROBA_CLIP))
    base = float(np.log(p_bar / (1.0 - p_bar)))
    F = np.full(n, base)
    yf = y.astype(float)

    stages: list[Tree] = []
    losses = [logistic_loss(y, F)]
    for m in range(n_stages):
        p = sigmoid(F)
        residual = yf - p
        if subsample < 1.0:
            rng = child_rng(spec.seed, m)
            size = max(1, int(subsample * n))
            rows = np.sort(rng.permutation(n)[:size])
        else:
            rows = np.arange(n)

        tree = grow_tree(
            X[rows],
            residual[rows],
            criterion="mse",
            max_depth=params.get("max_depth", 3),
            min_samples_split=int(params.get("min_samples_split", 2)),
            min_samples_leaf=int(params.get("min_samples_leaf", 1)),
        )
        # Newton step per leaf: sum(residual) / sum(p(1-p)) over the stage's rows.
        leaf_of = tree.apply(X[rows])
        hessian = p[rows] * (1.0 - p[rows])
        for leaf in np.unique(leaf_of):
            members = leaf_of == leaf
            denom = float(hessian[members].sum())
            tree.value[leaf, 0] = float(residual[rows][members].sum()) / max(denom, 1e-12)
        stages.append(tree)
        F += lr * tree.leaf_values(X)[:, 0]
        losses.append(logistic_loss(y, F))

    return GradientBoostingModel(spec, X.shape[1], base, stages, lr, losses)


class AdaBoostModel(TrainedClassifier):
    def __init__(self, spec, n_features, stumps, alphas, algorithm, learning_rate,
                 errors=None):
        super().__init__(spec, n_features)
        self.stumps = stumps
        self.alphas = [float(a) for a in alphas]
        self.algorithm = algorithm
        self.learning_rate = float(learning_rate)
        self.errors = [float(e) for e in (errors or [])]

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0])
        if self.algorithm == "SAMME":
            for stump, a in zip(self.stumps, self.alphas):
                counts = stump.leaf_values(X)
                h = np.where(counts[:, 1] > counts[:, 0], 1.0, -1.0)
                out += a * h
        else:  # SAMME.R: sum of half log-odds from each stump
            for stump in self.stumps:
                counts = stump.leaf_values(X)
                totals = counts.sum(axis=1)
                p1 = np.clip(counts[:, 1] / totals, _PROBA_CLIP, 1.0 - _PROBA_CLIP)
                out += self.learning_rate * 0.5 * (np.log(p1) - np.log(1.0 - p1))
        return out

    def _proba(self, X):
        p1 = sigmoid(2.0 * self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def payload(self):
        meta = {
            "alphas": self.alphas,
            "algorithm": self.algorithm,
            "learning_rate": self.learning_rate,
            "errors": self.errors,
            "n_stumps": len(self.stumps),
        }
        return meta, _trees_payload(self.stumps, "a")

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        stumps = _trees_from_payload(arrays, "a", int(meta["n_stumps"]))
        return cls(
            spec, n_features, stumps, meta["alphas"], meta["algorithm"],
            meta["learning_rate"], meta.get("errors"),
        )


def fit_adaboost(X, y, spec: ClassifierSpec) -> AdaBoostModel:
    """Boosted depth-1 stumps.

    SAMME reweights by the stage weight a_t = learning_rate * 0.5*ln((1-e)/e);
    a perfect stump takes the capped weight and halts, a stump at e >= 1/2
    contributes weight 0 and halts. SAMME.R boosts the stumps' log-odds.
    """
    X, y = check_training_data(X, y)
    params = spec.resolved()
    lr = float(params["learning_rate"])
    n_rounds = int(params["n_estimators"])
    algorithm = params.get("algorithm", "SAMME")
    if algorithm not in ("SAMME", "SAMME.R"):
        raise ValueError(f"unknown algorithm {algorithm!r}")

    n = X.shape[0]
    t = np.where(y == 1, 1.0, -1.0)
    w = np.full(n, 1.0 / n)

    stumps: list[Tree] = []
    alphas: list[float] = []
    errors: list[float] = []
    weight_history: list[np.ndarray] = []
    for _ in range(n_rounds):
        stump = grow_tree(X, y.astype(float), sample_weight=w, criterion="gini", max_depth=1)
        counts = stump.leaf_values(X)
        if algorithm == "SAMME":
            h = np.where(counts[:, 1] > counts[:, 0], 1.0, -1.0)
            err = float(w[h != t].sum())
            errors.append(err)
            stumps.append(stump)
            if err <= 0.0:
                alphas.append(ALPHA_CAP)
                break
            if err >= 0.5:
                alphas.append(0.0)
                break
            a = lr * 0.5 * np.log((1.0 - err) / err)
            alphas.append(a)
            w = w * np.exp(-a * t * h)
            w /= w.sum()
            weight_history.append(w.copy())
        else:
            totals = counts.sum(axis=1)
            p1 = np.clip(counts[:, 1] / totals, _PROBA_CLIP, 1.0 - _PROBA_CLIP)
            h = 0.5 * (np.log(p1) - np.log(1.0 - p1))
            hard = np.where(p1 > 0.5, 1.0, -1.0)
            err = float(w[hard != t].sum())
            errors.append(err)
            stumps.append(stump)
            alphas.append(1.0)
            if err <= 0.0:
                break
            w = w * np.exp(-lr * t * h)
            w /= w.sum()
            weight_history.append(w.copy())

    model = AdaBoostModel(spec, X.shape[1], stumps, alphas, algorithm, lr, errors)
    model.weight_history = weight_history
    return model
