"""Greedy binary CART: weighted classification and regression trees.

Splits maximize impurity decrease (gini/entropy for labels, variance for
regression targets). Thresholds are midpoints between consecutive distinct
sorted values, scanned ascending with features in ascending index order;
the first best candidate wins, so fits are deterministic. The same tree
backs the decision-tree family, random forests (feature subsampling),
boosting stages, and AdaBoost stumps (sample weights).
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, TrainedClassifier, check_training_data, child_rng

_EPS = 1e-12
LEAF = -1


def _gini(counts: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = counts / total
    return 1.0 - (p ** 2 + (1.0 - p) ** 2)


def _entropy(counts: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = counts / total
    out = np.zeros_like(p)
    for q in (p, 1.0 - p):
        mask = q > 0.0
        out[mask] -= q[mask] * np.log2(q[mask])
    return out


class Tree:
    """Flattened binary tree; ``feature[i] == LEAF`` marks leaves."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[list[float]] = []  # clf: weighted [w0, w1]; reg: [value, 0]
        self.n_samples: list[int] = []

    def add_node(self, value, n_samples) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(list(value))
        self.n_samples.append(int(n_samples))
        return len(self.feature) - 1

    def finalize(self):
        self.feature = np.asarray(self.feature, dtype=np.int32)
        self.threshold = np.asarray(self.threshold, dtype=float)
        self.left = np.asarray(self.left, dtype=np.int32)
        self.right = np.asarray(self.right, dtype=np.int32)
        self.value = np.asarray(self.value, dtype=float).reshape(len(self.feature), 2)
        self.n_samples = np.asarray(self.n_samples, dtype=np.int32)
        return self

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index for each row."""
        nodes = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[nodes] != LEAF
        while active.any():
            idx = np.flatnonzero(active)
            node = nodes[idx]
            goes_left = X[idx, self.feature[node]] <= self.threshold[node]
            nodes[idx] = np.where(goes_left, self.left[node], self.right[node])
            active = self.feature[nodes] != LEAF
        return nodes

    def leaf_values(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def depth(self, node: int = 0) -> int:
        if self.feature[node] == LEAF:
            return 0
        return 1 + max(self.depth(self.left[node]), self.depth(self.right[node]))


def _max_features_count(max_features, d: int) -> int:
    if max_features is None:
        return d
    if max_features == "sqrt":
        return max(1, int(np.sqrt(d)))
    if max_features == "log2":
        return max(1, int(np.log2(d))) if d > 1 else 1
    k = int(max_features)
    if k < 1:
        raise ValueError("max_features must be at least 1")
    return min(k, d)


def _best_split_for_column(col, target, weight, criterion, min_leaf):
    """Return (decrease, threshold) for the best split of one column, or None."""
    order = np.argsort(col, kind="stable")
    v = col[order]
    w = weight[order]
    t = target[order]

    n = v.shape[0]
    boundaries = np.flatnonzero(v[:-1] < v[1:])
    if boundaries.size == 0:
        return None
    sizes_left = boundaries + 1
    ok = (sizes_left >= min_leaf) & (n - sizes_left >= min_leaf)
    if not ok.any():
        return None
    boundaries = boundaries[ok]
    sizes_left = sizes_left[ok]

    w_cum = np.cumsum(w)
    total_w = w_cum[-1]
    wl = w_cum[boundaries]
    wr = total_w - wl

    if criterion in ("gini", "entropy"):
        wy_cum = np.cumsum(w * t)  # weighted positive-class mass
        pos_l = wy_cum[boundaries]
        pos_r = wy_cum[-1] - pos_l
        imp = _gini if criterion == "gini" else _entropy
        parent = imp(np.array([wy_cum[-1]]), np.array([total_w]))[0]
        child = (wl * imp(pos_l, wl) + wr * imp(pos_r, wr)) / total_w
    else:  # variance reduction
        s_cum = np.cumsum(w * t)
        s2_cum = np.cumsum(w * t ** 2)
        sl, s2l = s_cum[boundaries], s2_cum[boundaries]
        sr, s2r = s_cum[-1] - sl, s2_cum[-1] - s2l
        parent = (s2_cum[-1] - s_cum[-1] ** 2 / total_w) / total_w
        child = ((s2l - sl ** 2 / wl) + (s2r - sr ** 2 / wr)) / total_w

    decrease = parent - child
    best = int(np.argmax(decrease))
    if decrease[best] <= _EPS:
        return None
    b = boundaries[best]
    threshold = (v[b] + v[b + 1]) / 2.0
    return float(decrease[best]), threshold


def grow_tree(
    X: np.ndarray,
    target: np.ndarray,
    sample_weight: np.ndarray | None = None,
    criterion: str = "gini",
    max_depth: int | None = None,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
    max_features=None,
    rng: np.random.Generator | None = None,
) -> Tree:
    X = np.asarray(X, dtype=float)
    target = np.asarray(target, dtype=float)
    n, d = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
    depth_cap = np.inf if max_depth is None else int(max_depth)
    k_features = _max_features_count(max_features, d)
    classification = criterion in ("gini", "entropy")

    tree = Tree()

    def node_value(rows):
        if classification:
            pos = float(w[rows][target[rows] == 1.0].sum())
            return [float(w[rows].sum()) - pos, pos]
        total = float(w[rows].sum())
        return [float((w[rows] * target[rows]).sum()) / total if total > 0 else 0.0, 0.0]

    def is_pure(rows):
        t = target[rows]
        return bool((t == t[0]).all())

    def build(rows, depth):
        node = tree.add_node(node_value(rows), rows.shape[0])
        if (
            depth >= depth_cap
            or rows.shape[0] < min_samples_split
            or rows.shape[0] < 2 * min_samples_leaf
            or is_pure(rows)
        ):
            return node

        if k_features < d:
            candidates = np.sort(rng.choice(d, size=k_features, replace=False))
        else:
            candidates = np.arange(d)

        best = None  # (decrease, feature, threshold)
        for f in candidates:
            found = _best_split_for_column(
                X[rows, f], target[rows], w[rows], criterion, min_samples_leaf
            )
            if found is not None and (best is None or found[0] > best[0]):
                best = (found[0], int(f), found[1])
        if best is None:
            return node

        _, f, threshold = best
        goes_left = X[rows, f] <= threshold
        left = build(rows[goes_left], depth + 1)
        right = build(rows[~goes_left], depth + 1)
        tree.feature[node] = f
        tree.threshold[node] = threshold
        tree.left[node] = left
        tree.right[node] = right
        return node

    if k_features < d and rng is None:
        rng = np.random.default_rng(0)
    build(np.arange(n), 0)
    return tree.finalize()


def _prune_ccp(tree: Tree, ccp_alpha: float) -> Tree:
    """Minimal cost-complexity pruning: collapse weakest links while
    their effective alpha does not exceed ccp_alpha."""
    if ccp_alpha <= 0.0:
        return tree
    total_w = tree.value[0].sum()

    def node_risk(i):
        w0, w1 = tree.value[i]
        wt = w0 + w1
        if wt == 0:
            return 0.0
        p = w1 / wt
        return (1.0 - (p ** 2 + (1.0 - p) ** 2)) * (wt / total_w)

    while True:
        # Subtree risk and leaf counts bottom-up.
        sub_risk = {}
        leaves = {}

        def walk(i):
            if tree.feature[i] == LEAF:
                sub_risk[i] = node_risk(i)
                leaves[i] = 1
                return
            walk(tree.left[i])
            walk(tree.right[i])
            sub_risk[i] = sub_risk[tree.left[i]] + sub_risk[tree.right[i]]
            leaves[i] = leaves[tree.left[i]] + leaves[tree.right[i]]

        walk(0)
        weakest, weakest_alpha = None, np.inf
        for i in range(len(tree.feature)):
            if tree.feature[i] == LEAF or i not in leaves:
                continue
            alpha = (node_risk(i) - sub_risk[i]) / (leaves[i] - 1)
            if alpha < weakest_alpha - 1e-15:
                weakest, weakest_alpha = i, alpha
        if weakest is None or weakest_alpha > ccp_alpha:
            return tree
        tree.feature[weakest] = LEAF
        tree.left[weakest] = LEAF
        tree.right[weakest] = LEAF


class DecisionTreeModel(TrainedClassifier):
    def __init__(self, spec, n_features, tree: Tree):
        super().__init__(spec, n_features)
        self.tree = tree

    def _proba(self, X):
        counts = self.tree.leaf_values(X)
        totals = counts.sum(axis=1, keepdims=True)
        totals[totals == 0.0] = 1.0
        return counts / totals

    def payload(self):
        t = self.tree
        return {}, {
            "feature": t.feature,
            "threshold": t.threshold,
            "left": t.left,
            "right": t.right,
            "value": t.value,
            "n_samples": t.n_samples,
        }

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        t = Tree()
        t.feature = arrays["feature"].astype(np.int32)
        t.threshold = arrays["threshold"].astype(float)
        t.left = arrays["left"].astype(np.int32)
        t.right = arrays["right"].astype(np.int32)
        t.value = arrays["value"].astype(float)
        t.n_samples = arrays["n_samples"].astype(np.int32)
        return cls(spec, n_features, t)


def fit_decision_tree(
    X, y, spec: ClassifierSpec, sample_weight=None, rng=None, ccp_alpha: float = 0.0
) -> DecisionTreeModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    if rng is None and params.get("max_features") is not None:
        rng = child_rng(spec.seed)
    tree = grow_tree(
        X,
        y.astype(float),
        sample_weight=sample_weight,
        criterion=params.get("criterion", "gini"),
        max_depth=params.get("max_depth"),
        min_samples_split=int(params.get("min_samples_split", 2)),
        min_samples_leaf=int(params.get("min_samples_leaf", 1)),
        max_features=params.get("max_features"),
        rng=rng,
    )
    alpha = float(params.get("ccp_alpha", ccp_alpha))
    tree = _prune_ccp(tree, alpha)
    return DecisionTreeModel(spec, X.shape[1], tree)
