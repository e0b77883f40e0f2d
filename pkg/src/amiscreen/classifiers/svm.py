"""Soft-margin SVM trained in the dual by sequential minimal optimization.

Pairs of multipliers are optimized analytically until no example violates
its KKT condition beyond tolerance. Probabilities come from a sigmoid
fitted to the training decision values (Platt calibration with smoothed
targets). The pair-selection heuristics are deterministic: scans run in
index order and the partner maximizing |E_i - E_j| wins with
lowest-index tie-breaks.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError
from .base import ClassifierSpec, TrainedClassifier, check_training_data
from .logistic import sigmoid

DEFAULT_TOL = 1e-7
MAX_EXAMINE_ROUNDS = 2000
_STEP_EPS = 1e-14


def resolve_gamma(gamma, X: np.ndarray) -> float:
    if gamma == "scale":
        var = float(X.var())
        return 1.0 / (X.shape[1] * var) if var > 0 else 1.0
    if gamma == "auto":
        return 1.0 / X.shape[1]
    return float(gamma)


def kernel_matrix(kind: str, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if kind == "linear":
        return A @ B.T
    if kind == "rbf":
        sq = (
            (A ** 2).sum(axis=1)[:, None]
            + (B ** 2).sum(axis=1)[None, :]
            - 2.0 * (A @ B.T)
        )
        return np.exp(-gamma * np.maximum(sq, 0.0))
    if kind == "sigmoid":
        return np.tanh(gamma * (A @ B.T))
    raise ValueError(f"unknown kernel {kind!r}")


def fit_platt(decision: np.ndarray, y: np.ndarray, max_iter: int = 200) -> tuple[float, float]:
    """Fit P(y=1|f) = 1 / (1 + exp(A f + B)) with smoothed targets."""
    n_pos = int((y == 1).sum())
    n_neg = len(y) - n_pos
    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    t = np.where(y == 1, hi, lo)
    f = np.asarray(decision, dtype=float)

    def objective(a, b):
        z = f * a + b
        return float(np.sum(np.where(z >= 0, t * z + np.logaddexp(0, -z), (t - 1) * z + np.logaddexp(0, z))))

    A = 0.0
    B = np.log((n_neg + 1.0) / (n_pos + 1.0))
    sigma = 1e-12
    value = objective(A, B)
    for _ in range(max_iter):
        z = f * A + B
        p = sigmoid(-z)
        q = 1.0 - p
        d1 = t - p
        d2 = p * q
        g_a = float(np.sum(f * d1))
        g_b = float(np.sum(d1))
        if max(abs(g_a), abs(g_b)) < 1e-10:
            break
        h11 = float(np.sum(f * f * d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h12 = float(np.sum(f * d2))
        det = h11 * h22 - h12 * h12
        dA = -(h22 * g_a - h12 * g_b) / det
        dB = -(-h12 * g_a + h11 * g_b) / det
        step = 1.0
        while step >= 1e-10:
            cand = objective(A + step * dA, B + step * dB)
            if cand < value + 1e-12:
                A += step * dA
                B += step * dB
                value = cand
                break
            step /= 2.0
        else:
            break
    return A, B


class SVMModel(TrainedClassifier):
    def __init__(
        self, spec, n_features, support_vectors, dual_coef, intercept,
        kernel, gamma_value, platt_a, platt_b, constant_p1=None,
    ):
        super().__init__(spec, n_features)
        self.support_vectors = np.asarray(support_vectors, dtype=float).reshape(-1, n_features)
        self.dual_coef = np.asarray(dual_coef, dtype=float)  # alpha_i * t_i
        self.intercept = float(intercept)
        self.kernel = kernel
        self.gamma_value = float(gamma_value)
        self.platt_a = float(platt_a)
        self.platt_b = float(platt_b)
        self.constant_p1 = constant_p1

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.intercept)
        K = kernel_matrix(self.kernel, self.gamma_value, X, self.support_vectors)
        return K @ self.dual_coef + self.intercept

    def _proba(self, X):
        if self.constant_p1 is not None:
            p1 = np.full(X.shape[0], self.constant_p1)
        else:
            z = self.decision_function(X) * self.platt_a + self.platt_b
            p1 = sigmoid(-z)
        return np.column_stack([1.0 - p1, p1])

    def payload(self):
        meta = {
            "intercept": self.intercept,
            "kernel": self.kernel,
            "gamma_value": self.gamma_value,
            "platt_a": self.platt_a,
            "platt_b": self.platt_b,
            "constant_p1": self.constant_p1,
        }
        return meta, {"support_vectors": self.support_vectors, "dual_coef": self.dual_coef}

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        return cls(
            spec, n_features, arrays["support_vectors"], arrays["dual_coef"],
            meta["intercept"], meta["kernel"], meta["gamma_value"],
            meta["platt_a"], meta["platt_b"], meta["constant_p1"],
        )


def kkt_violations(alpha: np.ndarray, margins: np.ndarray, C: float) -> np.ndarray:
    """Per-example violation of the dual optimality conditions.

    margins holds t_i * f(x_i); at the optimum, alpha == 0 requires
    margin >= 1, alpha == C requires margin <= 1, interior alphas sit on
    the margin exactly.
    """
    at_zero = alpha <= 1e-12
    at_cap = alpha >= C - 1e-12
    v = np.abs(margins - 1.0)
    v[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
    v[at_cap] = np.maximum(0.0, margins[at_cap] - 1.0)
    return v


def fit_svm(X, y, spec: ClassifierSpec, tol: float = DEFAULT_TOL) -> SVMModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    C = float(params["C"])
    kernel = params.get("kernel", "rbf")
    gamma_value = resolve_gamma(params.get("gamma", "scale"), X)

    n, d = X.shape
    n_pos = int((y == 1).sum())
    if n_pos in (0, n):
        p1 = (n_pos + 1.0) / (n + 2.0)
        return SVMModel(
            spec, d, np.empty((0, d)), np.empty(0), 1.0 if n_pos == n else -1.0,
            kernel, gamma_value, 0.0, 0.0, constant_p1=p1,
        )

    t = np.where(y == 1, 1.0, -1.0)
    K = kernel_matrix(kernel, gamma_value, X, X)
    alpha = np.zeros(n)
    b = 0.0
    # E[i] = f(x_i) - t_i, maintained incrementally after each step.
    E = -t.copy()

    def take_step(i, j):
        nonlocal b, E
        if i == j:
            return False
        a_i, a_j = alpha[i], alpha[j]
        if t[i] != t[j]:
            L, H = max(0.0, a_j - a_i), min(C, C + a_j - a_i)
        else:
            L, H = max(0.0, a_i + a_j - C), min(C, a_i + a_j)
        if H - L < _STEP_EPS:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= 0.0:
            return False
        a_j_new = np.clip(a_j + t[j] * (E[i] - E[j]) / eta, L, H)
        if abs(a_j_new - a_j) < _STEP_EPS * (a_j_new + a_j + _STEP_EPS):
            return False
        a_i_new = a_i + t[i] * t[j] * (a_j - a_j_new)

        b1 = b - E[i] - t[i] * (a_i_new - a_i) * K[i, i] - t[j] * (a_j_new - a_j) * K[i, j]
        b2 = b - E[j] - t[i] * (a_i_new - a_i) * K[i, j] - t[j] * (a_j_new - a_j) * K[j, j]
        if 0.0 < a_i_new < C:
            b_new = b1
        elif 0.0 < a_j_new < C:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0

        E += (
            t[i] * (a_i_new - a_i) * K[i]
            + t[j] * (a_j_new - a_j) * K[j]
            + (b_new - b)
        )
        alpha[i], alpha[j] = a_i_new, a_j_new
        b = b_new
        return True

    def examine(i):
        r = E[i] * t[i]
        if (r < -tol and alpha[i] < C) or (r > tol and alpha[i] > 0):
            gaps = np.abs(E[i] - E)
            gaps[i] = -1.0
            if take_step(i, int(np.argmax(gaps))):
                return True
            non_bound = np.flatnonzero((alpha > 0) & (alpha < C))
            for j in non_bound:
                if take_step(i, int(j)):
                    return True
            for j in range(n):
                if take_step(i, j):
                    return True
        return False

    examine_all = True
    rounds = 0
    while rounds < MAX_EXAMINE_ROUNDS:
        rounds += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += examine(i)
            if changed == 0:
                break  # a full sweep without progress: KKT satisfied within tol
            examine_all = False
        else:
            for i in np.flatnonzero((alpha > 0) & (alpha < C)):
                changed += examine(int(i))
            if changed == 0:
                examine_all = True
    else:
        margins = t * (E + t)  # f = E + t
        violations = kkt_violations(alpha, margins, C)
        count = int((violations > tol).sum())
        raise ConvergenceError(
            f"SMO exceeded {MAX_EXAMINE_ROUNDS} rounds with {count} KKT violations > {tol}",
            iterations=MAX_EXAMINE_ROUNDS,
            residual=float(violations.max()),
        )

    decision = E + t  # f(x_i) on training rows
    platt_a, platt_b = fit_platt(decision, y)

    keep = alpha > 1e-12
    return SVMModel(
        spec, d, X[keep], alpha[keep] * t[keep], b, kernel, gamma_value, platt_a, platt_b,
    )
