"""Stratified K-fold plans, cross-validated scoring, and exhaustive grid search.

Each fold evaluation fits the scalers and the classifier on out-of-fold
rows only, so no statistic of a scored fold can leak into training.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .classifiers import ClassifierSpec, TrainedClassifier, fit
from .errors import StratificationError
from .preprocessing import ScalerParams, apply_scalers, fit_scalers

Metric = Callable[[np.ndarray, np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class FoldPlan:
    n_folds: int
    assignments: np.ndarray  # fold index per row
    seed: int

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=int)
        a.setflags(write=False)
        object.__setattr__(self, "assignments", a)

    def fold_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def make_folds(y, n_folds: int, seed: int, stratify: bool = True) -> FoldPlan:
    """Stratified fold plan: per-class rows are shuffled and dealt
    round-robin, carrying the dealing offset across classes so fold sizes
    differ by at most one. ``stratify=False`` deals all rows in one
    shuffled pass instead."""
    y = np.asarray(y, dtype=int)
    if n_folds < 2:
        raise ValueError("n_folds must be at least 2")
    rng = np.random.default_rng(seed)
    assignments = np.empty(y.shape[0], dtype=int)
    if not stratify:
        perm = rng.permutation(y.shape[0])
        for j, row in enumerate(perm):
            assignments[row] = j % n_folds
        return FoldPlan(n_folds=n_folds, assignments=assignments, seed=seed)

    classes = np.unique(y)
    for c in classes:
        if (y == c).sum() < n_folds:
            raise StratificationError(
                f"class {int(c)} has {(y == c).sum()} rows, fewer than {n_folds} folds"
            )
    offset = 0
    for c in sorted(classes):
        members = np.flatnonzero(y == c)
        perm = rng.permutation(members)
        for j, row in enumerate(perm):
            assignments[row] = (offset + j) % n_folds
        offset = (offset + members.size) % n_folds
    return FoldPlan(n_folds=n_folds, assignments=assignments, seed=seed)


def accuracy_metric(y_true: np.ndarray, y_pred: np.ndarray, proba: np.ndarray) -> float:
    return float((y_true == y_pred).mean())


METRICS: dict[str, Metric] = {"accuracy": accuracy_metric}


def resolve_metric(metric) -> Metric:
    if callable(metric):
        return metric
    return METRICS[metric]


def fit_fold_pipeline(
    spec: ClassifierSpec, X: np.ndarray, y: np.ndarray
) -> tuple[ScalerParams, TrainedClassifier]:
    scalers = fit_scalers(X)
    model = fit(apply_scalers(X, scalers), y, spec)
    return scalers, model


def cross_val_score(
    spec: ClassifierSpec, X, y, plan: FoldPlan, metric="accuracy"
) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if plan.assignments.shape[0] != y.shape[0]:
        raise ValueError("fold plan does not cover the data")
    score = resolve_metric(metric)
    out = np.empty(plan.n_folds)
    for fold in range(plan.n_folds):
        train, test = plan.train_rows(fold), plan.fold_rows(fold)
        try:
            scalers, model = fit_fold_pipeline(spec, X[train], y[train])
        except Exception as exc:
            exc.args = (f"fold {fold}: {exc}",)
            raise
        X_test = apply_scalers(X[test], scalers)
        out[fold] = score(y[test], model.predict(X_test), model.predict_proba(X_test))
    return out


@dataclass(frozen=True)
class ParamGrid:
    family: str
    axes: dict[str, list] = field(default_factory=dict)

    def __post_init__(self):
        # Constructing a spec validates axis names against the family vocabulary.
        ClassifierSpec(self.family, {k: v[0] for k, v in self.axes.items() if v})
        for name, values in self.axes.items():
            if not values:
                raise ValueError(f"axis {name!r} has no candidate values")

    def candidates(self) -> list[dict[str, Any]]:
        """Cartesian product in axis declaration order."""
        if not self.axes:
            return [{}]
        names = list(self.axes)
        combos = itertools.product(*(self.axes[n] for n in names))
        return [dict(zip(names, combo)) for combo in combos]


@dataclass
class CandidateResult:
    params: dict[str, Any]
    fold_scores: list[float] | None
    mean_score: float
    error: str | None = None


@dataclass
class SearchResult:
    family: str
    candidates: list[CandidateResult]
    best_index: int
    best_spec: ClassifierSpec
    best_mean_score: float
    best_model: TrainedClassifier | None = None
    refit_scalers: ScalerParams | None = None

    def to_dict(self) -> dict:
        best = self.best_mean_score
        return {
            "family": self.family,
            "best_index": self.best_index,
            "best_params": self.candidates[self.best_index].params if self.candidates else {},
            "best_mean_score": None if not np.isfinite(best) else best,
            "candidates": [
                {
                    "params": c.params,
                    "fold_scores": c.fold_scores,
                    "mean_score": None if not np.isfinite(c.mean_score) else c.mean_score,
                    "error": c.error,
                }
                for c in self.candidates
            ],
        }


def grid_search(
    grid: ParamGrid, X, y, plan: FoldPlan, metric="accuracy", seed: int = 0, refit: bool = True
) -> SearchResult:
    """Evaluate every grid point by cross-validation and refit the best.

    A candidate whose fit fails on any fold scores -inf with the error
    recorded; the search itself never aborts. Ties keep the earliest
    candidate in grid-iteration order.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    results: list[CandidateResult] = []
    best_index = -1
    best_mean = -np.inf
    for index, params in enumerate(grid.candidates()):
        spec = ClassifierSpec(grid.family, params, seed)
        try:
            scores = cross_val_score(spec, X, y, plan, metric)
        except Exception as exc:
            results.append(CandidateResult(params, None, -np.inf, f"{type(exc).__name__}: {exc}"))
            continue
        mean = float(scores.mean())
        results.append(CandidateResult(params, [float(s) for s in scores], mean))
        if mean > best_mean:
            best_mean = mean
            best_index = index

    if best_index < 0:
        raise RuntimeError("every grid candidate failed cross-validation")

    best_spec = ClassifierSpec(grid.family, results[best_index].params, seed)
    best_model = None
    scalers = None
    if refit:
        scalers, best_model = fit_fold_pipeline(best_spec, X, y)
    return SearchResult(
        family=grid.family,
        candidates=results,
        best_index=best_index,
        best_spec=best_spec,
        best_mean_score=best_mean,
        best_model=best_model,
        refit_scalers=scalers,
    )


# Tuning grids shipped with the toolkit, one per family, in print order.
PRESET_GRIDS: dict[str, ParamGrid] = {
    "LR": ParamGrid("LR", {
        "penalty": ["l1"],
        "C": [0.01, 0.1, 1.0, 10.0],
        "dual": [False],
        "tol": [0.0001, 0.001, 0.01],
        "fit_intercept": [True, False],
        "intercept_scaling": [1, 2, 5],
        "class_weight": [None, "balanced"],
        "solver": ["saga"],
        "max_iter": [1000, 2000, 5000],
        "l1_ratio": [None],
    }),
    "GNB": ParamGrid("GNB", {}),
    "DT": ParamGrid("DT", {
        "criterion": ["gini", "entropy"],
        "max_depth": [None, 5, 10, 20],
        "min_samples_split": [2, 5, 10],
        "min_samples_leaf": [1, 2, 4],
        "max_features": [None, "sqrt", "log2"],
    }),
    "RF": ParamGrid("RF", {
        "n_estimators": [100, 200, 300],
        "criterion": ["gini", "entropy"],
        "max_depth": [None, 5, 10],
        "min_samples_split": [2, 5, 10],
        "min_samples_leaf": [1, 2, 4],
        "max_features": ["sqrt", "log2"],
        "ccp_alpha": [0.0, 0.1, 0.2],
    }),
    "SVM": ParamGrid("SVM", {
        "C": [0.1, 1, 10],
        "kernel": ["linear", "rbf", "sigmoid"],
        "gamma": ["scale", "auto"],
    }),
    "KNN": ParamGrid("KNN", {
        "n_neighbors": [3, 5, 7],
        "weights": ["uniform", "distance"],
        "algorithm": ["auto", "ball_tree", "kd_tree", "brute"],
        "p": [1, 2],
    }),
    "GB": ParamGrid("GB", {
        "learning_rate": [0.1, 0.01, 0.001],
        "n_estimators": [100, 200, 300],
        "max_depth": [3, 4, 5],
        "subsample": [0.8, 1.0],
        "min_samples_split": [2, 4, 6],
        "min_samples_leaf": [1, 2, 3],
    }),
    "AB": ParamGrid("AB", {
        "n_estimators": [50, 100, 200],
        "learning_rate": [0.01, 0.1, 1.0],
        "algorithm": ["SAMME", "SAMME.R"],
    }),
    "GMM": ParamGrid("GMM", {
        "n_components": [2, 3, 4, 5],
        "covariance_type": ["spherical", "tied", "diag", "full"],
    }),
    "LDA": ParamGrid("LDA", {
        "solver": ["lsqr", "eigen"],
        "shrinkage": ["auto", None, 0.5, 1.0],
        "n_components": [None, 1],
    }),
    "QDA": ParamGrid("QDA", {
        "reg_param": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    }),
}
