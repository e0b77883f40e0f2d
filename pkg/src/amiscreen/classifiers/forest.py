"""Random forest: bootstrapped trees with per-split feature subsampling."""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, TrainedClassifier, check_training_data, child_rng
from .tree import Tree, _prune_ccp, grow_tree


class RandomForestModel(TrainedClassifier):
    def __init__(self, spec, n_features, trees: list[Tree]):
        super().__init__(spec, n_features)
        self.trees = trees

    def _proba(self, X):
        votes = np.zeros(X.shape[0])
        for tree in self.trees:
            counts = tree.leaf_values(X)
            votes += (counts[:, 1] > counts[:, 0]).astype(float)
        frac = votes / len(self.trees)
        return np.column_stack([1.0 - frac, frac])

    def payload(self):
        meta = {"n_trees": len(self.trees)}
        arrays = {}
        for i, t in enumerate(self.trees):
            arrays[f"t{i}.feature"] = t.feature
            arrays[f"t{i}.threshold"] = t.threshold
            arrays[f"t{i}.left"] = t.left
            arrays[f"t{i}.right"] = t.right
            arrays[f"t{i}.value"] = t.value
            arrays[f"t{i}.n_samples"] = t.n_samples
        return meta, arrays

    @classmethod
    def from_payload(cls, spec, n_features, meta, arrays):
        trees = []
        for i in range(int(meta["n_trees"])):
            t = Tree()
            t.feature = arrays[f"t{i}.feature"].astype(np.int32)
            t.threshold = arrays[f"t{i}.threshold"].astype(float)
            t.left = arrays[f"t{i}.left"].astype(np.int32)
            t.right = arrays[f"t{i}.right"].astype(np.int32)
            t.value = arrays[f"t{i}.value"].astype(float)
            t.n_samples = arrays[f"t{i}.n_samples"].astype(np.int32)
            trees.append(t)
        return cls(spec, n_features, trees)


def fit_random_forest(X, y, spec: ClassifierSpec) -> RandomForestModel:
    X, y = check_training_data(X, y)
    params = spec.resolved()
    n = X.shape[0]
    trees = []
    for i in range(int(params["n_estimators"])):
        rng = child_rng(spec.seed, i)
        sample = np.sort(rng.integers(0, n, size=n))
        tree = grow_tree(
            X[sample],
            y[sample].astype(float),
            criterion=params.get("criterion", "gini"),
            max_depth=params.get("max_depth"),
            min_samples_split=int(params.get("min_samples_split", 2)),
            min_samples_leaf=int(params.get("min_samples_leaf", 1)),
            max_features=params.get("max_features", "sqrt"),
            rng=rng,
        )
        trees.append(_prune_ccp(tree, float(params.get("ccp_alpha", 0.0))))
    return RandomForestModel(spec, X.shape[1], trees)
