"""Confusion arithmetic, the six screening metrics, and ROC/AUC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LOG_LOSS_EPS = 1e-15


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def confusion(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have the same length")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
    )


def accuracy(cm: ConfusionMatrix) -> float:
    return (cm.tp + cm.tn) / cm.total if cm.total else 0.0


def recall(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fn
    return cm.tp / denom if denom else 0.0


def precision(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fp
    return cm.tp / denom if denom else 0.0


def f1(cm: ConfusionMatrix) -> float:
    p, r = precision(cm), recall(cm)
    return 2.0 * p * r / (p + r) if p + r else 0.0


def log_loss(y_true, p_hat) -> float:
    """Mean negative log-likelihood with predictions clipped away from {0, 1}."""
    y_true = np.asarray(y_true, dtype=float)
    p = np.asarray(p_hat, dtype=float)
    if y_true.shape != p.shape:
        raise ValueError("y_true and p_hat must have the same length")
    if y_true.size == 0:
        raise ValueError("log loss of an empty prediction set is undefined")
    if (p < 0).any() or (p > 1).any():
        raise ValueError("probabilities must lie in [0, 1]")
    p = np.clip(p, LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS)
    return float(-np.mean(y_true * np.log(p) + (1.0 - y_true) * np.log(1.0 - p)))


def roc_curve(y_true, scores) -> list[tuple[float, float]]:
    """(FPR, TPR) points swept over distinct score thresholds, descending.

    Tied scores enter at one threshold. The curve starts at (0, 0) and ends
    at (1, 1).
    """
    y_true = np.asarray(y_true, dtype=int)
    scores = np.asarray(scores, dtype=float)
    if y_true.shape != scores.shape:
        raise ValueError("y_true and scores must have the same length")
    n_pos = int((y_true == 1).sum())
    n_neg = int((y_true == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC requires both classes in y_true")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = y_true[order]
    tp_cum = np.cumsum(sorted_labels == 1)
    fp_cum = np.cumsum(sorted_labels == 0)
    # Keep only the last index of each tied-score block.
    distinct = np.flatnonzero(np.diff(sorted_scores) != 0.0)
    cut = np.append(distinct, len(sorted_scores) - 1)
    points = [(0.0, 0.0)]
    points += [
        (fp_cum[i] / n_neg, tp_cum[i] / n_pos)
        for i in cut
    ]
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return points


def auc(points: list[tuple[float, float]]) -> float:
    """Trapezoidal area under an ROC polyline."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return float(area)


@dataclass(frozen=True)
class EvaluationReport:
    confusion: ConfusionMatrix
    accuracy: float
    recall: float
    precision: float
    f1: float
    log_loss: float
    auc: float
    roc_points: tuple[tuple[float, float], ...]
    phase: str  # train | test

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "confusion": {
                "tp": self.confusion.tp, "tn": self.confusion.tn,
                "fp": self.confusion.fp, "fn": self.confusion.fn,
            },
            "accuracy": self.accuracy,
            "recall": self.recall,
            "precision": self.precision,
            "f1": self.f1,
            "log_loss": self.log_loss,
            "auc": self.auc,
            "roc_points": [[x, y] for x, y in self.roc_points],
        }


def evaluate(model, X, y, phase: str) -> EvaluationReport:
    """All metrics for one model on one data slice, from a single pass."""
    if phase not in ("train", "test"):
        raise ValueError("phase must be 'train' or 'test'")
    y = np.asarray(y, dtype=int)
    proba = model.predict_proba(X)
    p1 = proba[:, 1]
    y_pred = np.argmax(proba, axis=1)
    cm = confusion(y, y_pred)
    points = roc_curve(y, p1)
    return EvaluationReport(
        confusion=cm,
        accuracy=accuracy(cm),
        recall=recall(cm),
        precision=precision(cm),
        f1=f1(cm),
        log_loss=log_loss(y, p1),
        auc=auc(points),
        roc_points=tuple((float(x), float(t)) for x, t in points),
        phase=phase,
    )
