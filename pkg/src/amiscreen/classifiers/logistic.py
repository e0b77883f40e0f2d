"""L1-penalized logistic regression trained by proximal gradient (FISTA).

Objective: C * sum_i w_i * log(1 + exp(-t_i * (x_i . beta + b))) + ||beta||_1
with t_i in {-1, +1} and an unpenalized intercept. ``class_weight``
'balanced' sets w_i = n / (2 * n_class(i)).
"""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError
from .base import ClassifierSpec, TrainedClassifier, check_training_data


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def penalized_loss(X, y, coef, intercept, C, weights=None) -> float:
    """The training objective at (coef, intercept); reused by test oracles."""
    t = np.where(np.asarray(y) == 1, 1.0, -1.0)
    w = np.ones(len(t)) if weights is None else np.asarray(weights, dtype=float)
    margin = t * (X @ coef + intercept)
    return float(C * np.sum(w * np.logaddexp(0.0, -margin)) + np.abs(coef).sum())


class LogisticModel(TrainedClassifier):
    def __init__(self, spec, n_features, coef, intercept, n_iter):
        super().__init__(spec, n_features)
        self.coef = np.asarray(coef, dtype=float)
        self.intercept = float(intercept)
        self.n_iter = int(n_iter)

    def _proba(self, X):
        p1 = sigmoid(X @ self.coef + self.intercept)
        return np.column_stack([1.0 - p1, p1])

    def payload(self):
        return {"intercept": self.intercept, "n_iter": self.n_iter}, {"coef": self.coef}

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(spec, n_features, arrays["coef"], meta["intercept"], meta["n_iter"])


def fit_logistic_regression(X, y, spec: ClassifierSpec) -> LogisticModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    if params.get("penalty", "l1") != "l1":
        raise ValueError("only the l1 penalty is supported")
    C = float(params["C"])
    tol = float(params["tol"])
    max_iter = int(params["max_iter"])
    fit_intercept = bool(params["fit_intercept"])

    n, d = X.shape
    t = np.where(y == 1, 1.0, -1.0)

    if params.get("class_weight") == "balanced":
        counts = np.bincount(y, minlength=2).astype(float)
        w = np.where(y == 1, n / (2.0 * max(counts[1], 1.0)), n / (2.0 * max(counts[0], 1.0)))
    else:
        w = np.ones(n)

    n_pos = int((y == 1).sum())
    if n_pos in (0, n):
        # Degenerate labels: intercept-only model at the smoothed prior log-odds.
        p = (n_pos + 1.0) / (n + 2.0)
        return LogisticModel(spec, d, np.zeros(d), np.log(p / (1.0 - p)), 0)

    def grad(coef, intercept):
        margin = t * (X @ coef + intercept)
        s = w * sigmoid(-margin)  # w_i * P(wrong side)
        gz = -C * (s * t)
        g_coef = X.T @ gz
        g_b = float(gz.sum()) if fit_intercept else 0.0
        return g_coef, g_b

    def smooth_loss(coef, intercept):
        margin = t * (X @ coef + intercept)
        return float(C * np.sum(w * np.logaddexp(0.0, -margin)))

    coef = np.zeros(d)
    intercept = 0.0
    v_coef, v_b = coef.copy(), intercept
    momentum = 1.0
    L = max(C * float((w[:, None] * X ** 2).sum()) / (4.0 * max(n, 1)), 1e-3)

    converged = False
    residual = np.inf
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        g_coef, g_b = grad(v_coef, v_b)
        f_v = smooth_loss(v_coef, v_b)
        # Backtracking on the majorization constant.
        while True:
            step = 1.0 / L
            cand = _soft_threshold(v_coef - step * g_coef, step)
            cand_b = v_b - step * g_b if fit_intercept else 0.0
            dc, db = cand - v_coef, cand_b - v_b
            quad = f_v + g_coef @ dc + g_b * db + 0.5 * L * (dc @ dc + db * db)
            if smooth_loss(cand, cand_b) <= quad + 1e-12 or L > 1e16:
                break
            L *= 2.0

        # Gradient mapping at the accelerated point; converged when small.
        residual = float(max(np.max(np.abs(cand - v_coef)), abs(cand_b - v_b)) * L)
        prev_coef, prev_b = coef, intercept
        coef, intercept = cand, cand_b
        if residual <= tol:
            converged = True
            break

        momentum_next = (1.0 + np.sqrt(1.0 + 4.0 * momentum ** 2)) / 2.0
        beta = (momentum - 1.0) / momentum_next
        v_coef = coef + beta * (coef - prev_coef)
        v_b = intercept + beta * (intercept - prev_b)
        momentum = momentum_next
        # Restart acceleration if the step went uphill.
        if (coef - prev_coef) @ g_coef + (intercept - prev_b) * g_b > 0:
            v_coef, v_b = coef.copy(), intercept
            momentum = 1.0

    if not converged:
        raise ConvergenceError(
            f"logistic regression did not reach tol={tol} within {max_iter} iterations "
            f"(gradient-mapping norm {residual:.3e})",
            iterations=max_iter,
            residual=residual,
        )
    return LogisticModel(spec, d, coef, intercept, n_iter)
